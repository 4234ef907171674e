//! Exact arithmetic in prime fields `F_p` and their extensions `F_{p^k}`.
//!
//! Elements are stored as integers `sum c_i p^i` whose base-`p` digits are the
//! coefficients of the residue polynomial modulo the field's defining
//! polynomial. Small fields get precomputed tables; larger ones fall back to
//! schoolbook polynomial arithmetic.

mod element;
mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

pub use element::{ElementInput, ElementJson, FieldElement};
pub use poly::FieldPoly;

/// Fields up to this order get log/exp tables.
const LOG_TABLE_LIMIT: u64 = 1 << 16;
/// Fields up to this order get full addition and multiplication tables.
const FULL_TABLE_LIMIT: u64 = 1024;

/// A finite field `F_p[t]/(m(t))` with `m` the lexicographically least monic
/// irreducible polynomial of degree `k`.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

struct FieldInner {
    p: u32,
    k: u32,
    order: u64,
    modulus: Vec<u32>,
    arith: Arith,
}

enum Arith {
    Prime,
    Tables(Tables),
    Poly,
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    mul: Option<Vec<u32>>,
}

fn field_cache() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds `F_{p^k}`. Calls with equal arguments return the same field.
pub fn make_field(p: u64, k: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::ZeroDegree);
    }
    let order = (p as u128).checked_pow(k).filter(|&q| q <= u32::MAX as u128);
    let Some(order) = order else {
        return Err(Error::FieldTooLarge { p, k });
    };
    let key = (p as u32, k);
    if let Some(f) = field_cache().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let field = if k == 1 {
        Field(Arc::new(FieldInner {
            p: p as u32,
            k: 1,
            order: order as u64,
            modulus: vec![0, 1],
            arith: Arith::Prime,
        }))
    } else {
        let prime = make_field(p, 1)?;
        let modulus = least_irreducible(&prime, k);
        Field::with_modulus(p as u32, k, order as u64, modulus)
    };
    let mut cache = field_cache().lock().unwrap();
    Ok(cache.entry(key).or_insert(field).clone())
}

/// Least monic irreducible of degree `k` over the prime field, ordered by the
/// coefficient vector read from `t^{k-1}` down to the constant term.
fn least_irreducible(prime: &Field, k: u32) -> Vec<u32> {
    let p = prime.p() as u64;
    let count = p.pow(k);
    for index in 0..count {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut rest = index;
        for _ in 0..k {
            coeffs.push((rest % p) as u32);
            rest /= p;
        }
        coeffs.push(1);
        if FieldPoly::new(prime, coeffs.clone()).is_irreducible() {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    fn with_modulus(p: u32, k: u32, order: u64, modulus: Vec<u32>) -> Field {
        let mut inner = FieldInner {
            p,
            k,
            order,
            modulus,
            arith: Arith::Poly,
        };
        if order <= LOG_TABLE_LIMIT {
            inner.arith = Arith::Tables(Tables::build(&inner));
        }
        Field(Arc::new(inner))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> u32 {
        self.0.k
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    /// Defining polynomial, constant term first, monic of degree `k`.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn prime_field(&self) -> Field {
        make_field(self.p() as u64, 1).expect("p was validated at construction")
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_raw(self, 0)
    }

    pub(crate) fn element_raw(&self, v: u32) -> FieldElement {
        FieldElement::from_raw(self, v)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_raw(self, 1)
    }

    /// The class of `t`; equal to zero in a prime field (modulus `t`).
    pub fn generator(&self) -> FieldElement {
        if self.k() == 1 {
            self.zero()
        } else {
            FieldElement::from_raw(self, self.p())
        }
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        let p = self.p() as i64;
        FieldElement::from_raw(self, v.rem_euclid(p) as u32)
    }

    /// Element with the given residue coefficients (constant term first).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElement> {
        if coeffs.len() > self.k() as usize {
            return Err(Error::Parse(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.k()
            )));
        }
        let p = self.p() as i64;
        let mut value = 0u64;
        for &c in coeffs.iter().rev() {
            value = value * p as u64 + c.rem_euclid(p) as u64;
        }
        Ok(FieldElement::from_raw(self, value as u32))
    }

    /// All elements, in increasing encoded order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |v| FieldElement::from_raw(self, v as u32))
    }

    pub fn same(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p() == other.p() && self.k() == other.k() && self.modulus() == other.modulus())
    }

    pub(crate) fn ensure_same(&self, other: &Field) -> Result<()> {
        if self.same(other) {
            Ok(())
        } else {
            Err(Error::MixedFields(self.to_string(), other.to_string()))
        }
    }

    pub(crate) fn digits(&self, v: u32) -> Vec<u32> {
        let p = self.p();
        let mut rest = v;
        (0..self.k())
            .map(|_| {
                let d = rest % p;
                rest /= p;
                d
            })
            .collect()
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.0;
        match &inner.arith {
            Arith::Prime => ((a as u64 + b as u64) % inner.p as u64) as u32,
            Arith::Tables(t) => match &t.add {
                Some(add) => add[a as usize * inner.order as usize + b as usize],
                None => inner.add_digits(a, b),
            },
            Arith::Poly => inner.add_digits(a, b),
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        let inner = &*self.0;
        match &inner.arith {
            Arith::Prime => {
                if a == 0 {
                    0
                } else {
                    inner.p - a
                }
            }
            Arith::Tables(t) => t.neg[a as usize],
            Arith::Poly => inner.neg_digits(a),
        }
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.0;
        match &inner.arith {
            Arith::Prime => ((a as u64 * b as u64) % inner.p as u64) as u32,
            Arith::Tables(t) => {
                if let Some(mul) = &t.mul {
                    mul[a as usize * inner.order as usize + b as usize]
                } else if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
                }
            }
            Arith::Poly => inner.mul_poly(a, b),
        }
    }

    pub(crate) fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv_raw(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let inner = &*self.0;
        Some(match &inner.arith {
            Arith::Tables(t) => {
                let q1 = inner.order as u32 - 1;
                t.exp[((q1 - t.log[a as usize]) % q1) as usize]
            }
            _ => self.pow_raw(a, inner.order - 2),
        })
    }

    /// `dst -= f * src`, elementwise.
    pub(crate) fn axpy(&self, dst: &mut [u32], f: u32, src: &[u32]) {
        if f == 0 {
            return;
        }
        let inner = &*self.0;
        match &inner.arith {
            Arith::Prime => {
                let p = inner.p as u64;
                let nf = p - f as u64;
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = ((*d as u64 + nf * s as u64) % p) as u32;
                }
            }
            Arith::Tables(Tables {
                add: Some(add),
                mul: Some(mul),
                neg,
                ..
            }) => {
                let q = inner.order as usize;
                let row = &mul[neg[f as usize] as usize * q..][..q];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = add[*d as usize * q + row[s as usize] as usize];
                }
            }
            _ => {
                let nf = self.neg_raw(f);
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = self.add_raw(*d, self.mul_raw(nf, s));
                }
            }
        }
    }

    pub(crate) fn scale_slice(&self, dst: &mut [u32], f: u32) {
        for d in dst.iter_mut() {
            *d = self.mul_raw(*d, f);
        }
    }
}

impl FieldInner {
    fn add_digits(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let p = self.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for i in 0..self.k {
            let d = (a % p + b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            if i + 1 < self.k {
                place *= p;
            }
        }
        out
    }

    fn neg_digits(&self, a: u32) -> u32 {
        let p = self.p;
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        for i in 0..self.k {
            let d = a % p;
            out += ((p - d) % p) * place;
            a /= p;
            if i + 1 < self.k {
                place *= p;
            }
        }
        out
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let split = |mut v: u32| -> Vec<u64> {
            (0..k)
                .map(|_| {
                    let d = (v % self.p) as u64;
                    v /= self.p;
                    d
                })
                .collect()
        };
        let (da, db) = (split(a), split(b));
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for i in 0..k {
                let m = self.modulus[i] as u64;
                prod[d - k + i] = (prod[d - k + i] + (p - c) * m) % p;
            }
            prod[d] = 0;
        }
        prod[..k]
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * p + d) as u32
    }
}

impl Tables {
    fn build(inner: &FieldInner) -> Tables {
        let q = inner.order as usize;
        let q1 = (inner.order - 1) as u64;
        let factors = prime_factors(q1);
        let pow = |a: u32, mut e: u64| {
            let (mut base, mut acc) = (a, 1u32);
            while e > 0 {
                if e & 1 == 1 {
                    acc = inner.mul_poly(acc, base);
                }
                base = inner.mul_poly(base, base);
                e >>= 1;
            }
            acc
        };
        let g = (2..inner.order as u32)
            .find(|&g| factors.iter().all(|&r| pow(g, q1 / r) != 1))
            .expect("the multiplicative group is cyclic");
        let mut exp = vec![0u32; 2 * q];
        let mut log = vec![0u32; q];
        let mut cur = 1u32;
        for i in 0..q1 as usize {
            exp[i] = cur;
            log[cur as usize] = i as u32;
            cur = inner.mul_poly(cur, g);
        }
        for i in q1 as usize..2 * q {
            exp[i] = exp[i - q1 as usize];
        }
        let neg = (0..q as u32).map(|a| inner.neg_digits(a)).collect();
        let (add, mul) = if inner.order <= FULL_TABLE_LIMIT {
            let mut add = vec![0u32; q * q];
            let mut mul = vec![0u32; q * q];
            for a in 0..q {
                for b in 0..q {
                    add[a * q + b] = inner.add_digits(a as u32, b as u32);
                    mul[a * q + b] = if a == 0 || b == 0 {
                        0
                    } else {
                        exp[(log[a] + log[b]) as usize]
                    };
                }
            }
            (Some(add), Some(mul))
        } else {
            (None, None)
        };
        Tables {
            exp,
            log,
            neg,
            add,
            mul,
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Field {}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k() == 1 {
            write!(f, "F_{}", self.p())
        } else {
            write!(f, "F_{}^{}", self.p(), self.k())
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {:?}", self, self.modulus())
    }
}

/// The canonical embedding `F_{p^k} -> F_{p^{km}}` sending `t` to the least
/// root (in encoded order) of the source modulus.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: Field,
    target: Field,
    powers: Arc<Vec<u32>>,
}

fn embedding_cache() -> &'static Mutex<HashMap<(u32, u32, u32), Arc<Vec<u32>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32, u32), Arc<Vec<u32>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn embedding(source: &Field, target: &Field) -> Result<Embedding> {
    if source.p() != target.p() || target.k() % source.k() != 0 {
        return Err(Error::NoEmbedding(source.to_string(), target.to_string()));
    }
    let key = (source.p(), source.k(), target.k());
    if let Some(powers) = embedding_cache().lock().unwrap().get(&key) {
        return Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            powers: powers.clone(),
        });
    }
    // Coefficients of the source modulus lie in F_p, whose encoding is shared.
    let lifted = FieldPoly::new(target, source.modulus().to_vec());
    let root = lifted
        .roots()
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal(format!("{source:?} has no root in {target}")))?;
    let mut powers = Vec::with_capacity(source.k() as usize);
    let mut cur = 1u32;
    for _ in 0..source.k() {
        powers.push(cur);
        cur = target.mul_raw(cur, root.value());
    }
    let powers = Arc::new(powers);
    embedding_cache()
        .lock()
        .unwrap()
        .insert(key, powers.clone());
    Ok(Embedding {
        source: source.clone(),
        target: target.clone(),
        powers,
    })
}

impl Embedding {
    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement> {
        self.source.ensure_same(x.field())?;
        let mut acc = 0u32;
        for (d, &pw) in self.source.digits(x.value()).into_iter().zip(self.powers.iter()) {
            if d != 0 {
                acc = self.target.add_raw(acc, self.target.mul_raw(d, pw));
            }
        }
        Ok(FieldElement::from_raw(&self.target, acc))
    }

    pub fn apply_all(&self, xs: &[FieldElement]) -> Result<Vec<FieldElement>> {
        xs.iter().map(|x| self.apply(x)).collect()
    }
}

/// Sends `x` into `target` through the canonical embedding (identity when the
/// fields agree).
pub fn embed(x: &FieldElement, target: &Field) -> Result<FieldElement> {
    if x.field().same(target) {
        return Ok(x.clone());
    }
    embedding(x.field(), target)?.apply(x)
}

/// Smallest field containing both arguments.
pub fn common_field(a: &Field, b: &Field) -> Result<Field> {
    if a.p() != b.p() {
        return Err(Error::MixedFields(a.to_string(), b.to_string()));
    }
    make_field(a.p() as u64, num_integer::lcm(a.k(), b.k()))
}

/// All roots of `T^p - T - c`, together with the field holding them: the
/// owner of `c` when `Tr(c) = 0`, otherwise its degree-`p` extension.
pub fn artin_schreier_roots(c: &FieldElement) -> Result<(Field, Vec<FieldElement>)> {
    let base = c.field().clone();
    let field = if c.trace().is_zero() {
        base
    } else {
        make_field(base.p() as u64, base.k() * base.p())?
    };
    let c = embed(c, &field)?;
    let p = field.p() as usize;
    let mut coeffs = vec![0u32; p + 1];
    coeffs[0] = field.neg_raw(c.value());
    coeffs[1] = field.neg_raw(1);
    coeffs[p] = 1;
    let roots = FieldPoly::new(&field, coeffs).roots();
    if roots.len() != p {
        return Err(Error::Internal(format!(
            "T^p - T - {c} has {} roots in {field}",
            roots.len()
        )));
    }
    Ok((field, roots))
}

/// Unique `y` with `y^p = x`.
pub fn pth_root(x: &FieldElement) -> FieldElement {
    x.pth_root()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elem(f: &Field, coeffs: &[i64]) -> FieldElement {
        f.from_coeffs(coeffs).unwrap()
    }

    #[test]
    fn prime_field_has_modulus_t() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 3);
    }

    #[test]
    fn f4_modulus_matches_exhaustive_search() {
        // Degree-2 monics over F_2: t^2, t^2+1, t^2+t, t^2+t+1. Only the last
        // has no root in F_2.
        let f2 = make_field(2, 1).unwrap();
        let irreducible: Vec<Vec<u32>> = (0..4u32)
            .map(|i| vec![i & 1, i >> 1, 1])
            .filter(|m| f2.elements().all(|x| FieldPoly::new(&f2, m.clone()).eval(&x) != f2.zero()))
            .collect();
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(1, 1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(make_field(3, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(make_field(2, 40), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn construction_is_deterministic() {
        for (p, k) in [(2, 3), (3, 2), (5, 3), (7, 2), (2, 17)] {
            let a = make_field(p, k).unwrap();
            let b = make_field(p, k).unwrap();
            assert_eq!(a.modulus(), b.modulus());
            assert!(FieldPoly::new(&a.prime_field(), a.modulus().to_vec()).is_irreducible());
        }
    }

    #[test]
    fn pth_root_examples() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(pth_root(&f3.from_int(2)), f3.from_int(2));
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(pth_root(&elem(&f4, &[1, 1])), f4.generator());
        assert_eq!(pth_root(&f4.zero()), f4.zero());
    }

    #[test]
    fn pth_root_exhaustive() {
        for (p, k) in [(2, 1), (2, 4), (3, 3), (5, 2), (5, 4), (7, 2), (23, 2)] {
            let f = make_field(p, k).unwrap();
            assert!(f.order() <= 625 || (p, k) == (23, 2));
            for x in f.elements() {
                let r = pth_root(&x);
                assert_eq!(r.pow(p), x);
                assert_eq!(pth_root(&x.pow(p)), x);
            }
        }
    }

    #[test]
    fn field_axioms_in_every_tier() {
        // F_4 (full tables), F_3^7 (log tables), F_2^17 and F_5^8 (polynomial).
        for (p, k) in [(2u64, 2u32), (3, 7), (2, 17), (5, 8)] {
            let f = make_field(p, k).unwrap();
            let q = f.order();
            let sample: Vec<FieldElement> = (0..40u64)
                .map(|i| FieldElement::from_raw(&f, ((i * 2654435761) % q) as u32))
                .collect();
            for a in &sample {
                if !a.is_zero() {
                    assert_eq!(a * &a.inv().unwrap(), f.one());
                }
                assert_eq!(a + &(-a), f.zero());
                for b in sample.iter().take(8) {
                    assert_eq!(a * b, b * a);
                    for c in sample.iter().take(4) {
                        assert_eq!(&(a + b) * c, &(a * c) + &(b * c));
                        assert_eq!(&(a * b) * c, a * &(b * c));
                    }
                }
            }
        }
    }

    #[test]
    fn fermat_in_small_fields() {
        for (p, k) in [(2, 3), (3, 2), (5, 2)] {
            let f = make_field(p, k).unwrap();
            for x in f.elements() {
                assert_eq!(x.pow(f.order()), x);
            }
        }
    }

    #[test]
    fn artin_schreier_examples() {
        let f3 = make_field(3, 1).unwrap();
        let (field, roots) = artin_schreier_roots(&f3.zero()).unwrap();
        assert_eq!(field, f3);
        assert_eq!(roots, vec![f3.from_int(0), f3.from_int(1), f3.from_int(2)]);

        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        let (field, roots) = artin_schreier_roots(&f2.one()).unwrap();
        assert_eq!(field, f4);
        assert_eq!(roots, vec![f4.generator(), elem(&f4, &[1, 1])]);

        let (field, roots) = artin_schreier_roots(&f4.one()).unwrap();
        assert_eq!(field, f4);
        assert_eq!(roots, vec![f4.generator(), elem(&f4, &[1, 1])]);
    }

    #[test]
    fn artin_schreier_roots_form_torsor() {
        for (p, k) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)] {
            let f = make_field(p, k).unwrap();
            for c in f.elements() {
                let (field, roots) = artin_schreier_roots(&c).unwrap();
                assert_eq!(roots.len(), p as usize);
                let c = embed(&c, &field).unwrap();
                let mut diffs: Vec<u32> = roots
                    .iter()
                    .map(|r| {
                        assert_eq!(&(&r.pow(p) - r) - &c, field.zero());
                        (r - &roots[0]).value()
                    })
                    .collect();
                diffs.sort();
                assert_eq!(diffs, (0..p as u32).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let f9 = make_field(3, 2).unwrap();
        let f729 = make_field(3, 6).unwrap();
        let e = embedding(&f9, &f729).unwrap();
        for a in f9.elements() {
            for b in f9.elements() {
                let lhs = e.apply(&(&a * &b)).unwrap();
                assert_eq!(lhs, &e.apply(&a).unwrap() * &e.apply(&b).unwrap());
                let lhs = e.apply(&(&a + &b)).unwrap();
                assert_eq!(lhs, &e.apply(&a).unwrap() + &e.apply(&b).unwrap());
            }
        }
        assert!(embedding(&f9, &make_field(3, 3).unwrap()).is_err());
    }
}
