//! The Weyl algebra `A_n` over a finite field, its point modules, and the
//! point-level Azumaya checks.

mod fiber;
mod point;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fq::{Field, FieldElement};

pub use fiber::{azumaya_point_check, d_eta_build, AzumayaCertificate, EtaModule, FiberAlgebra, Quotient};
pub(crate) use fiber::euler_shift;
pub(crate) use point::lex_label;
pub use point::{
    delta_rep, euler_block, euler_block_check, represent, EulerBlockReport, PointJson, PointRep, PointTriple,
};

/// Exponent pair `(I, J)` of the normal-form monomial `x^I d^J`.
pub type Exponents = (Vec<u32>, Vec<u32>);

/// Element of `A_n` in normal form `sum c_{I,J} x^I d^J`.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylElement {
    n: usize,
    field: Field,
    terms: BTreeMap<Exponents, u32>,
}

pub(crate) fn binom_mod_p(a: u32, b: u32, p: u32) -> u32 {
    if b > a {
        return 0;
    }
    let p64 = p as u64;
    let (mut a, mut b) = (a as u64, b as u64);
    let mut acc = 1u64;
    while a > 0 || b > 0 {
        let (ad, bd) = (a % p64, b % p64);
        if bd > ad {
            return 0;
        }
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..bd {
            num = num * ((ad - i) % p64) % p64;
            den = den * ((i + 1) % p64) % p64;
        }
        acc = acc * num % p64 * pow_mod(den, p64 - 2, p64) % p64;
        a /= p64;
        b /= p64;
    }
    acc as u32
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

pub(crate) fn factorial_mod_p(m: u32, p: u32) -> u32 {
    if m >= p {
        return 0;
    }
    (1..=m as u64).fold(1u64, |acc, i| acc * i % p as u64) as u32
}

/// `d^j x^k = sum_m binom(j,m) binom(k,m) m! x^{k-m} d^{j-m}` in one variable,
/// as `(m, coefficient mod p)` with zero coefficients dropped.
pub(crate) fn reorder_1d(j: u32, k: u32, p: u32) -> Vec<(u32, u32)> {
    (0..=j.min(k))
        .filter_map(|m| {
            let c = binom_mod_p(j, m, p) as u64 * binom_mod_p(k, m, p) as u64 % p as u64
                * factorial_mod_p(m, p) as u64
                % p as u64;
            (c != 0).then_some((m, c as u32))
        })
        .collect()
}

impl WeylElement {
    pub fn zero(field: &Field, n: usize) -> WeylElement {
        WeylElement {
            n,
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(c: &FieldElement, n: usize) -> WeylElement {
        let mut w = WeylElement::zero(c.field(), n);
        if !c.is_zero() {
            w.terms.insert((vec![0; n], vec![0; n]), c.value());
        }
        w
    }

    pub fn one(field: &Field, n: usize) -> WeylElement {
        WeylElement::scalar(&field.one(), n)
    }

    /// `c x^I d^J`.
    pub fn monomial(c: &FieldElement, x: &[u32], d: &[u32]) -> Result<WeylElement> {
        if x.len() != d.len() {
            return Err(Error::Dimension("exponent vectors differ in length".into()));
        }
        let mut w = WeylElement::zero(c.field(), x.len());
        w.check_cap(x, d)?;
        if !c.is_zero() {
            w.terms.insert((x.to_vec(), d.to_vec()), c.value());
        }
        Ok(w)
    }

    fn unit(field: &Field, n: usize, var: usize, is_x: bool) -> WeylElement {
        assert!(var < n, "variable {var} out of range for A_{n}");
        let mut e = vec![0; n];
        e[var] = 1;
        let z = vec![0; n];
        let key = if is_x { (e, z) } else { (z, e) };
        let mut w = WeylElement::zero(field, n);
        w.terms.insert(key, 1);
        w
    }

    /// The coordinate `x_var` (0-based).
    pub fn x(field: &Field, n: usize, var: usize) -> WeylElement {
        WeylElement::unit(field, n, var, true)
    }

    /// The derivation `d_var` (0-based).
    pub fn d(field: &Field, n: usize, var: usize) -> WeylElement {
        WeylElement::unit(field, n, var, false)
    }

    /// Euler operator `E_var = x_var d_var`.
    pub fn euler(field: &Field, n: usize, var: usize) -> WeylElement {
        let mut e = vec![0; n];
        e[var] = 1;
        let mut w = WeylElement::zero(field, n);
        w.terms.insert((e.clone(), e), 1);
        w
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &[u32], FieldElement)> + '_ {
        self.terms
            .iter()
            .map(|((x, d), &c)| (x.as_slice(), d.as_slice(), self.field.element_raw(c)))
    }

    pub fn coefficient(&self, x: &[u32], d: &[u32]) -> FieldElement {
        let v = self.terms.get(&(x.to_vec(), d.to_vec())).copied().unwrap_or(0);
        self.field.element_raw(v)
    }

    /// Exponent cap `2p^2` per variable.
    pub fn degree_cap(&self) -> u32 {
        2 * self.field.p() * self.field.p()
    }

    fn check_cap(&self, x: &[u32], d: &[u32]) -> Result<()> {
        let cap = self.degree_cap();
        for (var, &e) in x.iter().chain(d.iter()).enumerate() {
            if e >= cap {
                return Err(Error::DegreeCap {
                    var: var % self.n.max(1),
                    exponent: e,
                    cap,
                });
            }
        }
        Ok(())
    }

    fn compatible(&self, other: &WeylElement) -> Result<()> {
        self.field.ensure_same(&other.field)?;
        if self.n != other.n {
            return Err(Error::Dimension(format!("A_{} and A_{}", self.n, other.n)));
        }
        Ok(())
    }

    fn accumulate(&mut self, key: Exponents, c: u32) {
        if c == 0 {
            return;
        }
        let f = &self.field;
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add_raw(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &WeylElement) -> Result<WeylElement> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (k, &c) in &other.terms {
            out.accumulate(k.clone(), c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> WeylElement {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = self.field.neg_raw(*c);
        }
        out
    }

    pub fn sub(&self, other: &WeylElement) -> Result<WeylElement> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElement) -> Result<WeylElement> {
        self.field.ensure_same(c.field())?;
        let mut out = WeylElement::zero(&self.field, self.n);
        for (k, &v) in &self.terms {
            out.accumulate(k.clone(), self.field.mul_raw(v, c.value()));
        }
        Ok(out)
    }

    /// Normal-form product.
    pub fn mul(&self, other: &WeylElement) -> Result<WeylElement> {
        self.compatible(other)?;
        let f = &self.field;
        let p = f.p();
        let n = self.n;
        let mut out = WeylElement::zero(f, n);
        for ((xi, dj), &a) in &self.terms {
            for ((xk, dl), &b) in &other.terms {
                let ab = f.mul_raw(a, b);
                // expand each variable independently, then take the product
                let per_var: Vec<Vec<(u32, u32)>> = (0..n).map(|v| reorder_1d(dj[v], xk[v], p)).collect();
                let mut idx = vec![0usize; n];
                'outer: loop {
                    let mut coef = ab;
                    let mut x = Vec::with_capacity(n);
                    let mut d = Vec::with_capacity(n);
                    for v in 0..n {
                        let (m, c) = per_var[v][idx[v]];
                        coef = f.mul_raw(coef, c);
                        x.push(xi[v] + xk[v] - m);
                        d.push(dj[v] - m + dl[v]);
                    }
                    if coef != 0 {
                        out.check_cap(&x, &d)?;
                        out.accumulate((x, d), coef);
                    }
                    for v in (0..n).rev() {
                        idx[v] += 1;
                        if idx[v] < per_var[v].len() {
                            continue 'outer;
                        }
                        idx[v] = 0;
                    }
                    break;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<WeylElement> {
        let mut acc = WeylElement::one(&self.field, self.n);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `[self, other] = self other - other self`.
    pub fn commutator(&self, other: &WeylElement) -> Result<WeylElement> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Whether the element commutes with every generator.
    pub fn is_central(&self) -> bool {
        (0..self.n).all(|v| {
            let gens = [WeylElement::x(&self.field, self.n, v), WeylElement::d(&self.field, self.n, v)];
            gens.iter()
                .all(|g| self.commutator(g).map(|c| c.is_zero()).unwrap_or(false))
        })
    }

    /// Whether every exponent is divisible by `p` (membership in
    /// `F[x_i^p, d_i^p]`).
    pub fn has_central_support(&self) -> bool {
        let p = self.field.p();
        self.terms
            .keys()
            .all(|(x, d)| x.iter().chain(d.iter()).all(|&e| e % p == 0))
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for ((x, d), &c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (sym, exps) in [("x", x), ("d", d)] {
                for (v, &e) in exps.iter().enumerate() {
                    let name = if self.n == 1 { sym.to_string() } else { format!("{sym}{}", v + 1) };
                    match e {
                        0 => {}
                        1 => factors.push(name),
                        _ => factors.push(format!("{name}^{e}")),
                    }
                }
            }
            let c = self.field.element_raw(c);
            let cs = c.to_string();
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            parts.push(match (factors.is_empty(), c.is_one()) {
                (true, _) => cs,
                (false, true) => factors.join("*"),
                (false, false) => format!("{cs}*{}", factors.join("*")),
            });
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in A_{} over {}", self, self.n, self.field)
    }
}
