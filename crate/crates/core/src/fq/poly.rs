use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{prime_factors, Field, FieldElement};

/// Univariate polynomial over a [`Field`], coefficients constant term first,
/// with no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldPoly {
    field: Field,
    coeffs: Vec<u32>,
}

impl FieldPoly {
    /// Builds from encoded coefficients.
    pub fn new(field: &Field, mut coeffs: Vec<u32>) -> FieldPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FieldPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_elements(field: &Field, coeffs: &[FieldElement]) -> FieldPoly {
        for c in coeffs {
            assert!(c.field().same(field), "coefficient outside {field}");
        }
        FieldPoly::new(field, coeffs.iter().map(|c| c.value()).collect())
    }

    pub fn zero(field: &Field) -> FieldPoly {
        FieldPoly::new(field, Vec::new())
    }

    pub fn one(field: &Field) -> FieldPoly {
        FieldPoly::new(field, vec![1])
    }

    pub fn x(field: &Field) -> FieldPoly {
        FieldPoly::new(field, vec![0, 1])
    }

    /// `c X^deg`.
    pub fn monomial(c: &FieldElement, deg: usize) -> FieldPoly {
        let mut coeffs = vec![0; deg + 1];
        coeffs[deg] = c.value();
        FieldPoly::new(c.field(), coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn raw_coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        FieldElement::from_raw(&self.field, self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        (0..self.coeffs.len()).map(|i| self.coeff(i)).collect()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn scale(&self, c: &FieldElement) -> FieldPoly {
        let f = &self.field;
        FieldPoly::new(f, self.coeffs.iter().map(|&a| f.mul_raw(a, c.value())).collect())
    }

    pub fn monic(&self) -> FieldPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = self.field.inv_raw(lead).unwrap();
                self.scale(&FieldElement::from_raw(&self.field, inv))
            }
        }
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| f.add_raw(f.mul_raw(acc, x.value()), c));
        FieldElement::from_raw(f, v)
    }

    pub fn derivative(&self) -> FieldPoly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul_raw(c, (i as u64 % f.p() as u64) as u32))
            .collect();
        FieldPoly::new(f, coeffs)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, d: &FieldPoly) -> (FieldPoly, FieldPoly) {
        let f = &self.field;
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = f.inv_raw(d.coeffs[dd]).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (FieldPoly::zero(f), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let m = f.mul_raw(c, inv);
            quot[i - dd] = m;
            f.axpy(&mut rem[i - dd..=i], m, &d.coeffs);
        }
        rem.truncate(dd);
        (FieldPoly::new(f, quot), FieldPoly::new(f, rem))
    }

    pub fn rem(&self, d: &FieldPoly) -> FieldPoly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, other: &FieldPoly) -> FieldPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &FieldPoly) -> FieldPoly {
        if self.is_zero() || other.is_zero() {
            return FieldPoly::zero(&self.field);
        }
        let g = self.gcd(other);
        (self * &other.div_rem(&g).0).monic()
    }

    pub fn pow(&self, mut e: u64) -> FieldPoly {
        let mut base = self.clone();
        let mut acc = FieldPoly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn mul_mod(&self, other: &FieldPoly, m: &FieldPoly) -> FieldPoly {
        (self * other).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &FieldPoly) -> FieldPoly {
        let mut base = self.rem(m);
        let mut acc = FieldPoly::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            e >>= 1;
        }
        acc
    }

    /// Rabin's test. Only meaningful over the prime field, where `q = p`.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else {
            return false;
        };
        if n == 0 {
            return false;
        }
        let f = self.monic();
        let q = self.field.order();
        let x = FieldPoly::x(&self.field);
        // frob[j] = X^{q^j} mod f
        let mut frob = vec![x.rem(&f)];
        for j in 1..=n {
            let next = frob[j - 1].pow_mod(q, &f);
            frob.push(next);
        }
        if !(&frob[n] - &x).rem(&f).is_zero() {
            return false;
        }
        prime_factors(n as u64).into_iter().all(|r| {
            let g = (&frob[n / r as usize] - &x).gcd(&f);
            g.degree() == Some(0)
        })
    }

    /// Distinct roots in the coefficient field, sorted by encoded value.
    /// The zero polynomial is reported as having no roots.
    pub fn roots(&self) -> Vec<FieldElement> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let x = FieldPoly::x(&self.field);
        let xq = x.pow_mod(self.field.order(), &f);
        let g = (&xq - &x).gcd(&f);
        split_linear(&g, 0, &mut out);
        out.sort();
        out
    }
}

/// Splits a monic product of distinct linear factors with trace maps of
/// `t^i X`; each basis direction either separates roots or is skipped.
fn split_linear(g: &FieldPoly, start: u32, out: &mut Vec<FieldElement>) {
    let field = g.field().clone();
    match g.degree() {
        None | Some(0) => return,
        Some(1) => {
            out.push(FieldElement::from_raw(&field, field.neg_raw(g.coeffs[0])));
            return;
        }
        _ => {}
    }
    let p = field.p() as u64;
    for i in start..field.k() {
        let beta = (field.p() as u64).pow(i) as u32;
        let mut y = FieldPoly::new(&field, vec![0, beta]).rem(g);
        let mut tr = y.clone();
        for _ in 1..field.k() {
            y = y.pow_mod(p, g);
            tr = &tr + &y;
        }
        let mut parts = Vec::new();
        for c in 0..field.p() {
            let shifted = &tr - &FieldPoly::new(&field, vec![c]);
            let d = shifted.gcd(g);
            if d.degree().unwrap_or(0) >= 1 {
                parts.push(d);
            }
        }
        if parts.len() > 1 {
            for d in parts {
                split_linear(&d, i + 1, out);
            }
            return;
        }
    }
    // Only reachable for repeated factors; fall back to enumeration.
    for v in 0..field.order() {
        let x = FieldElement::from_raw(&field, v as u32);
        if g.eval(&x).is_zero() {
            out.push(x);
        }
    }
}

impl Add<&FieldPoly> for &FieldPoly {
    type Output = FieldPoly;
    fn add(self, rhs: &FieldPoly) -> FieldPoly {
        self.field.ensure_same(&rhs.field).unwrap();
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                f.add_raw(a, b)
            })
            .collect();
        FieldPoly::new(f, coeffs)
    }
}

impl Neg for &FieldPoly {
    type Output = FieldPoly;
    fn neg(self) -> FieldPoly {
        let f = &self.field;
        FieldPoly::new(f, self.coeffs.iter().map(|&c| f.neg_raw(c)).collect())
    }
}

impl Sub<&FieldPoly> for &FieldPoly {
    type Output = FieldPoly;
    fn sub(self, rhs: &FieldPoly) -> FieldPoly {
        self + &(-rhs)
    }
}

impl Mul<&FieldPoly> for &FieldPoly {
    type Output = FieldPoly;
    fn mul(self, rhs: &FieldPoly) -> FieldPoly {
        self.field.ensure_same(&rhs.field).unwrap();
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return FieldPoly::zero(f);
        }
        let mut out = vec![0u32; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a != 0 {
                f.axpy(&mut out[i..i + rhs.coeffs.len()], f.neg_raw(a), &rhs.coeffs);
            }
        }
        FieldPoly::new(f, out)
    }
}

impl fmt::Display for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeff(i);
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            terms.push(match (i, c.is_one()) {
                (0, _) => cs,
                (1, true) => "X".to_string(),
                (1, false) => format!("{cs}*X"),
                (_, true) => format!("X^{i}"),
                (_, false) => format!("{cs}*X^{i}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::make_field;

    #[test]
    fn roots_of_split_polynomial() {
        let f = make_field(5, 2).unwrap();
        let picks: Vec<FieldElement> = [3u32, 7, 11, 24].iter().map(|&v| FieldElement::from_raw(&f, v)).collect();
        let mut prod = FieldPoly::one(&f);
        for r in &picks {
            prod = &prod * &FieldPoly::from_elements(&f, &[-r, f.one()]);
        }
        let irr = FieldPoly::new(&f.prime_field(), vec![2, 0, 1]);
        assert!(irr.is_irreducible());
        assert_eq!(FieldPoly::new(&f, vec![2, 0, 1]).roots().len(), 2);
        assert_eq!(prod.roots(), picks);
    }

    #[test]
    fn roots_match_enumeration() {
        for (p, k) in [(2, 3), (3, 2), (7, 1)] {
            let f = make_field(p, k).unwrap();
            for seed in 0..30u32 {
                let coeffs: Vec<u32> = (0..5)
                    .map(|i| ((seed * 31 + i * 17 + seed * i * 7) as u64 % f.order()) as u32)
                    .collect();
                let poly = FieldPoly::new(&f, coeffs);
                if poly.degree().unwrap_or(0) == 0 {
                    continue;
                }
                let brute: Vec<FieldElement> = f.elements().filter(|x| poly.eval(x).is_zero()).collect();
                assert_eq!(poly.roots(), brute, "{poly:?}");
            }
        }
    }

    #[test]
    fn div_rem_roundtrip() {
        let f = make_field(3, 2).unwrap();
        let a = FieldPoly::new(&f, vec![1, 2, 3, 4, 5, 6, 7, 8]);
        let b = FieldPoly::new(&f, vec![5, 0, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
    }
}
