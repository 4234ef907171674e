//! Seeded sampling of field elements and points. The generator is
//! SplitMix64; a value below `m` is `next_u64() % m`.

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::Result;
use crate::fq::{Field, FieldElement};
use crate::weyl::PointTriple;

pub const GENERATOR: &str = "splitmix64";

#[derive(Clone, Debug)]
pub struct Sampler {
    rng: SplitMix64,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn below(&mut self, m: u64) -> u64 {
        self.rng.next_u64() % m
    }

    pub fn element(&mut self, f: &Field) -> FieldElement {
        let v = self.below(f.order());
        f.element_raw(v as u32)
    }

    pub fn nonzero(&mut self, f: &Field) -> FieldElement {
        loop {
            let x = self.element(f);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// A point whose Artin-Schreier roots lie in `f`: `c` and `b` are drawn
    /// first and `omega_p = (c^p - c) / b`; when `b = 0`, `omega_p` is free
    /// and `c` is drawn from the prime field.
    pub fn split_point(&mut self, f: &Field, n: usize) -> Result<PointTriple> {
        let prime = f.prime_field();
        let (mut b, mut omega, mut c) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..n {
            let bi = self.element(f);
            if bi.is_zero() {
                omega.push(self.element(f));
                c.push(crate::fq::embed(&self.element(&prime), f)?);
            } else {
                let ci = self.element(f);
                omega.push(&ci.artin_schreier() / &bi);
                c.push(ci);
            }
            b.push(bi);
        }
        PointTriple::new(b, omega, c)
    }

    /// A split point with every `b_i` and `omega_i` nonzero. Needs `f`
    /// larger than its prime field.
    pub fn split_point_nonzero(&mut self, f: &Field, n: usize) -> Result<PointTriple> {
        let (mut b, mut omega, mut c) = (Vec::new(), Vec::new(), Vec::new());
        for _ in 0..n {
            let bi = self.nonzero(f);
            let ci = loop {
                let x = self.element(f);
                if !x.artin_schreier().is_zero() {
                    break x;
                }
            };
            omega.push(&ci.artin_schreier() / &bi);
            c.push(ci);
            b.push(bi);
        }
        PointTriple::new(b, omega, c)
    }

    /// `b` and `omega_p` uniform in `f`, root `choice` uniform; the point may
    /// live in the degree-`p` extension.
    pub fn base_point(&mut self, f: &Field, n: usize) -> Result<PointTriple> {
        let b: Vec<FieldElement> = (0..n).map(|_| self.element(f)).collect();
        let omega: Vec<FieldElement> = (0..n).map(|_| self.element(f)).collect();
        let choice: Vec<usize> = (0..n).map(|_| self.below(f.p() as u64) as usize).collect();
        PointTriple::over_base(&b, &omega, Some(&choice))
    }
}
