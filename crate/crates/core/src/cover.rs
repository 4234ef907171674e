//! The Artin-Schreier cover `Y_n -> T*A^n(1)`: fibers, the AS map, and the
//! Cartesian-square check.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fq::{artin_schreier_roots, embed, make_field, Field, FieldElement};
use crate::weyl::WeylElement;

/// Roots of `T^p - T - b_i omega_i` for every `i`, in one common field.
#[derive(Clone, Debug)]
pub struct ArtinSchreierSolution {
    pub field: Field,
    pub b: Vec<FieldElement>,
    pub omega_p: Vec<FieldElement>,
    pub roots: Vec<Vec<FieldElement>>,
}

/// Solves the `n` equations over the smallest common field: the base field,
/// or its degree-`p` extension when some right-hand side has nonzero trace.
pub fn solve_artin_schreier(b: &[FieldElement], omega_p: &[FieldElement]) -> Result<ArtinSchreierSolution> {
    if b.is_empty() || b.len() != omega_p.len() {
        return Err(Error::InvalidPoint(format!(
            "need matching nonempty b and omega_p, got {} and {}",
            b.len(),
            omega_p.len()
        )));
    }
    let base = b[0].field().clone();
    for x in b.iter().chain(omega_p) {
        base.ensure_same(x.field())?;
    }
    let needs_ext = b.iter().zip(omega_p).any(|(x, w)| !(x * w).trace().is_zero());
    let field = if needs_ext {
        make_field(base.p() as u64, base.k() * base.p())?
    } else {
        base
    };
    let b: Vec<FieldElement> = b.iter().map(|x| embed(x, &field)).collect::<Result<_>>()?;
    let omega_p: Vec<FieldElement> = omega_p.iter().map(|x| embed(x, &field)).collect::<Result<_>>()?;
    let mut roots = Vec::with_capacity(b.len());
    for (x, w) in b.iter().zip(&omega_p) {
        let (owner, r) = artin_schreier_roots(&(x * w))?;
        if owner != field {
            return Err(Error::Internal(format!("roots landed in {owner}, expected {field}")));
        }
        roots.push(r);
    }
    Ok(ArtinSchreierSolution {
        field,
        b,
        omega_p,
        roots,
    })
}

/// The fiber of the cover over `zeta = (b, omega_p)`.
#[derive(Clone, Debug)]
pub struct EtaleFiber {
    pub field: Field,
    pub b: Vec<FieldElement>,
    pub omega_p: Vec<FieldElement>,
    /// Per-coordinate root sets, each sorted.
    pub roots: Vec<Vec<FieldElement>>,
    /// All `p^n` points, lexicographic in the root indices.
    pub points: Vec<Vec<FieldElement>>,
}

pub fn fiber_over(b: &[FieldElement], omega_p: &[FieldElement]) -> Result<EtaleFiber> {
    let sol = solve_artin_schreier(b, omega_p)?;
    let p = sol.field.p() as usize;
    for (i, r) in sol.roots.iter().enumerate() {
        let distinct: BTreeSet<u32> = r.iter().map(|x| x.value()).collect();
        if r.len() != p || distinct.len() != p {
            return Err(Error::Internal(format!("coordinate {i}: {} roots, {} distinct", r.len(), distinct.len())));
        }
    }
    let mut points = vec![Vec::new()];
    for r in &sol.roots {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                r.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    Ok(EtaleFiber {
        field: sol.field,
        b: sol.b,
        omega_p: sol.omega_p,
        roots: sol.roots,
        points,
    })
}

impl EtaleFiber {
    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// `mu(zeta) = (b_i omega_i)_i`.
    pub fn moment(&self) -> Vec<FieldElement> {
        self.b.iter().zip(&self.omega_p).map(|(x, w)| x * w).collect()
    }

    /// Whether translating by every vector of `F_p^n` permutes the points.
    pub fn is_torsor(&self) -> bool {
        let p = self.field.p() as usize;
        let n = self.n();
        let set: BTreeSet<Vec<u32>> = self.points.iter().map(|v| v.iter().map(|x| x.value()).collect()).collect();
        if set.len() != p.pow(n as u32) {
            return false;
        }
        (0..p.pow(n as u32)).all(|t| {
            let shift = crate::weyl::lex_label(t, n, p as u32);
            self.points.iter().all(|pt| {
                let moved: Vec<u32> = pt
                    .iter()
                    .zip(&shift)
                    .map(|(x, &s)| (x + &self.field.from_int(s as i64)).value())
                    .collect();
                set.contains(&moved)
            })
        })
    }

    /// Each equation has exactly `p` distinct roots.
    pub fn is_separable(&self) -> bool {
        let p = self.field.p() as usize;
        self.roots.iter().all(|r| {
            let s: BTreeSet<u32> = r.iter().map(|x| x.value()).collect();
            s.len() == p
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "field": field_json(&self.field),
            "b": self.b.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "omega_p": self.omega_p.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "points": self.points.iter().map(|v| v.iter().map(|x| x.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

pub fn field_json(f: &Field) -> serde_json::Value {
    serde_json::json!({ "p": f.p(), "k": f.k(), "modulus": f.modulus() })
}

/// Componentwise `c_i -> c_i^p - c_i`.
pub fn as_map(c: &[FieldElement]) -> Vec<FieldElement> {
    c.iter().map(|x| x.artin_schreier()).collect()
}

/// Outcome of comparing a fiber with the locus `{c : AS(c) = mu(zeta)}`.
#[derive(Clone, Debug)]
pub struct CartesianReport {
    pub field: Field,
    pub fiber_size: usize,
    pub locus_size: usize,
    /// `true` when the locus was found by scanning all of `F'^n`; otherwise
    /// each coordinate was scanned over `F'` and the product taken.
    pub full_scan: bool,
    pub equal: bool,
}

impl CartesianReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "field": field_json(&self.field),
            "fiber_size": self.fiber_size,
            "locus_size": self.locus_size,
            "full_scan": self.full_scan,
            "pass": self.equal,
        })
    }
}

const FULL_SCAN_LIMIT: u64 = 1 << 20;

pub fn cartesian_check(b: &[FieldElement], omega_p: &[FieldElement]) -> Result<CartesianReport> {
    let fiber = fiber_over(b, omega_p)?;
    let f = fiber.field.clone();
    let n = fiber.n();
    let target: Vec<u32> = fiber.moment().iter().map(|x| x.value()).collect();
    let q = f.order();
    let fiber_set: BTreeSet<Vec<u32>> = fiber.points.iter().map(|v| v.iter().map(|x| x.value()).collect()).collect();
    let full_scan = q.checked_pow(n as u32).is_some_and(|t| t <= FULL_SCAN_LIMIT);
    let locus: BTreeSet<Vec<u32>> = if full_scan {
        artin_schreier_scan(&f, &target).into_iter().collect()
    } else {
        let per: Vec<Vec<u32>> = target
            .iter()
            .map(|&t| artin_schreier_scan(&f, &[t]).into_iter().map(|v| v[0]).collect())
            .collect();
        let mut acc = vec![Vec::new()];
        for r in &per {
            acc = acc
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    r.iter().map(move |&x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        acc.into_iter().collect()
    };
    Ok(CartesianReport {
        field: f,
        fiber_size: fiber_set.len(),
        locus_size: locus.len(),
        full_scan,
        equal: locus == fiber_set,
    })
}

/// Every `c` in `f^n` with `as_map(c)` encoded as `target`, visiting all of
/// `f^n` in odometer order and updating the image by linearity.
fn artin_schreier_scan(f: &Field, target: &[u32]) -> Vec<Vec<u32>> {
    let p = f.p();
    let k = f.k() as usize;
    let n = target.len();
    let basis: Vec<FieldElement> = (0..k).map(|i| f.element_raw(p.pow(i as u32))).collect();
    let images: Vec<FieldElement> = basis.iter().map(|e| e.artin_schreier()).collect();
    let mut digits = vec![0u32; n * k];
    let mut c = vec![f.zero(); n];
    let mut img = vec![f.zero(); n];
    let mut out = Vec::new();
    loop {
        if img.iter().zip(target).all(|(x, &t)| x.value() == t) {
            out.push(c.iter().map(|x| x.value()).collect());
        }
        let mut pos = 0;
        loop {
            if pos == n * k {
                return out;
            }
            let (coord, j) = (pos / k, pos % k);
            c[coord] += &basis[j];
            img[coord] += &images[j];
            digits[pos] += 1;
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Checks `(x_k d_k)^p - x_k d_k = x_k^p d_k^p` in `A_n` over `F_p` for every `k`.
pub fn euler_relation_check(p: u32, n: usize) -> Result<bool> {
    let f = make_field(p as u64, 1)?;
    for k in 0..n {
        let e = WeylElement::euler(&f, n, k);
        let lhs = e.pow(p)?.sub(&e)?;
        let mut ex = vec![0; n];
        ex[k] = p;
        let rhs = WeylElement::monomial(&f.one(), &ex, &ex)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_fiber() {
        for p in [2u64, 3, 5] {
            let f = make_field(p, 1).unwrap();
            let z = vec![f.zero(); 2];
            let fib = fiber_over(&z, &z).unwrap();
            assert_eq!(fib.points.len(), (p * p) as usize);
            assert_eq!(fib.field, f);
            assert!(fib.is_torsor());
            assert!(cartesian_check(&z, &z).unwrap().equal);
        }
    }

    #[test]
    fn f2_fiber_lands_in_f4() {
        let f2 = make_field(2, 1).unwrap();
        let fib = fiber_over(&[f2.one()], &[f2.one()]).unwrap();
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(fib.field, f4);
        assert_eq!(fib.points, vec![vec![f4.generator()], vec![f4.from_coeffs(&[1, 1]).unwrap()]]);
        let r = cartesian_check(&[f2.one()], &[f2.one()]).unwrap();
        assert!(r.equal && r.full_scan);
        assert_eq!(r.locus_size, 2);
    }

    #[test]
    fn as_map_examples() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(as_map(&[f4.zero()]), vec![f4.zero()]);
        assert_eq!(as_map(&[f4.generator()]), vec![f4.one()]);
        let f5 = make_field(5, 1).unwrap();
        assert!(as_map(&f5.elements().collect::<Vec<_>>()).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn euler_relation_small_primes() {
        for p in [2, 3, 5, 7] {
            assert!(euler_relation_check(p, 2).unwrap());
        }
    }
}
