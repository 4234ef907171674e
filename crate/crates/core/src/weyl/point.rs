use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::WeylElement;
use crate::cover::solve_artin_schreier;
use crate::error::{Error, Result};
use crate::fq::{embed, make_field, ElementInput, Field, FieldElement, FieldPoly};
use crate::linalg::FieldMatrix;

/// Linked points `zeta = (b, omega_p)`, `xi = (a, omega_p)` with `a^p = b`,
/// and `eta = (c, omega_p)` with `c^p - c = b omega_p`, all in one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointTriple {
    field: Field,
    b: Vec<FieldElement>,
    omega_p: Vec<FieldElement>,
    a: Vec<FieldElement>,
    c: Vec<FieldElement>,
}

impl PointTriple {
    pub fn new(b: Vec<FieldElement>, omega_p: Vec<FieldElement>, c: Vec<FieldElement>) -> Result<PointTriple> {
        let n = b.len();
        if n == 0 {
            return Err(Error::InvalidPoint("n must be at least 1".into()));
        }
        if omega_p.len() != n || c.len() != n {
            return Err(Error::InvalidPoint(format!(
                "coordinate counts differ: b {}, omega_p {}, c {}",
                n,
                omega_p.len(),
                c.len()
            )));
        }
        let field = b[0].field().clone();
        for x in b.iter().chain(&omega_p).chain(&c) {
            field.ensure_same(x.field())?;
        }
        for i in 0..n {
            let lhs = c[i].artin_schreier();
            let rhs = &b[i] * &omega_p[i];
            if lhs != rhs {
                return Err(Error::InvalidPoint(format!(
                    "c_{i}^p - c_{i} = {lhs} but b_{i} omega_{i} = {rhs}"
                )));
            }
        }
        let a = b.iter().map(|x| x.pth_root()).collect();
        Ok(PointTriple {
            field,
            b,
            omega_p,
            a,
            c,
        })
    }

    /// Point over `zeta`, taking root number `choice[i]` (in sorted order) of
    /// each Artin-Schreier equation; all roots 0 when `choice` is `None`.
    pub fn over_base(b: &[FieldElement], omega_p: &[FieldElement], choice: Option<&[usize]>) -> Result<PointTriple> {
        let sol = solve_artin_schreier(b, omega_p)?;
        let c = sol
            .roots
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let pick = choice.map_or(0, |ch| ch.get(i).copied().unwrap_or(0));
                r.get(pick)
                    .cloned()
                    .ok_or_else(|| Error::InvalidPoint(format!("root index {pick} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        PointTriple::new(sol.b, sol.omega_p, c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn b(&self) -> &[FieldElement] {
        &self.b
    }

    pub fn omega_p(&self) -> &[FieldElement] {
        &self.omega_p
    }

    pub fn a(&self) -> &[FieldElement] {
        &self.a
    }

    pub fn c(&self) -> &[FieldElement] {
        &self.c
    }

    /// Same base point, different cover point.
    pub fn with_c(&self, c: Vec<FieldElement>) -> Result<PointTriple> {
        PointTriple::new(self.b.clone(), self.omega_p.clone(), c)
    }

    pub fn to_json(&self) -> PointJson {
        let conv = |v: &[FieldElement]| v.iter().map(ElementInput::from).collect();
        PointJson {
            p: self.field.p(),
            k: self.field.k(),
            n: self.n(),
            b: conv(&self.b),
            omega_p: conv(&self.omega_p),
            c: Some(conv(&self.c)),
        }
    }
}

/// Serialized point. `c` may be omitted, in which case the least root of
/// each Artin-Schreier equation is used.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointJson {
    pub p: u32,
    pub k: u32,
    pub n: usize,
    pub b: Vec<ElementInput>,
    pub omega_p: Vec<ElementInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<ElementInput>>,
}

impl PointJson {
    pub fn to_point(&self) -> Result<PointTriple> {
        if self.b.len() != self.n || self.omega_p.len() != self.n {
            return Err(Error::Parse(format!("expected {} coordinates", self.n)));
        }
        let mut k = self.k;
        if let Some(c) = &self.c {
            for x in c {
                if let ElementInput::Full(j) = x {
                    if j.p != self.p {
                        return Err(Error::Parse(format!("c lives in characteristic {}", j.p)));
                    }
                    k = num_integer::lcm(k, j.k);
                }
            }
        }
        let field = make_field(self.p as u64, k)?;
        let resolve = |v: &[ElementInput]| v.iter().map(|x| x.resolve(&field)).collect::<Result<Vec<_>>>();
        let b = resolve(&self.b)?;
        let omega_p = resolve(&self.omega_p)?;
        match &self.c {
            Some(c) => {
                if c.len() != self.n {
                    return Err(Error::Parse(format!("expected {} c coordinates", self.n)));
                }
                PointTriple::new(b, omega_p, resolve(c)?)
            }
            None => PointTriple::over_base(&b, &omega_p, None),
        }
    }
}

/// Index of `I` in lexicographic order, first coordinate most significant.
pub(crate) fn lex_index(i: &[u32], p: u32) -> usize {
    i.iter().fold(0usize, |acc, &v| acc * p as usize + v as usize)
}

pub(crate) fn lex_label(mut idx: usize, n: usize, p: u32) -> Vec<u32> {
    let mut out = vec![0u32; n];
    for v in (0..n).rev() {
        out[v] = (idx % p as usize) as u32;
        idx /= p as usize;
    }
    out
}

/// The point module `delta^xi = D_zeta / D_zeta (x - a)` with basis `d^I`,
/// `I in {0..p-1}^n` in lexicographic order. Column `j` of each matrix is the
/// image of basis vector `j`.
///
/// In this module `(x_k - a_k) d^I = -I_k d^{I - e_k}`, which is what
/// `[d_k, x_k] = 1` forces on the cyclic vector annihilated by `x - a`.
#[derive(Clone, Debug)]
pub struct PointRep {
    point: PointTriple,
    x: Vec<FieldMatrix>,
    d: Vec<FieldMatrix>,
}

impl PointRep {
    pub fn point(&self) -> &PointTriple {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.x.first().map_or(1, |m| m.rows())
    }

    pub fn x(&self, k: usize) -> &FieldMatrix {
        &self.x[k]
    }

    pub fn d(&self, k: usize) -> &FieldMatrix {
        &self.d[k]
    }
}

pub fn delta_rep(pt: &PointTriple) -> Result<PointRep> {
    let f = pt.field();
    let (n, p) = (pt.n(), pt.p());
    let dim = (p as usize).pow(n as u32);
    let mut xs = Vec::with_capacity(n);
    let mut ds = Vec::with_capacity(n);
    for k in 0..n {
        let mut x = FieldMatrix::zeros(f, dim, dim);
        let mut d = FieldMatrix::zeros(f, dim, dim);
        for col in 0..dim {
            let label = lex_label(col, n, p);
            x.set(col, col, &pt.a[k]);
            if label[k] > 0 {
                let mut lower = label.clone();
                lower[k] -= 1;
                x.set(lex_index(&lower, p), col, &f.from_int(-(label[k] as i64)));
            }
            let mut next = label.clone();
            if label[k] < p - 1 {
                next[k] += 1;
                d.set(lex_index(&next, p), col, &f.one());
            } else {
                next[k] = 0;
                d.set(lex_index(&next, p), col, &pt.omega_p[k]);
            }
        }
        xs.push(x);
        ds.push(d);
    }
    let rep = PointRep {
        point: pt.clone(),
        x: xs,
        d: ds,
    };
    verify_rep(&rep)?;
    Ok(rep)
}

fn matrix_pow(m: &FieldMatrix, e: u32) -> Result<FieldMatrix> {
    let mut acc = FieldMatrix::identity(m.field(), m.rows());
    for _ in 0..e {
        acc = acc.mul(m)?;
    }
    Ok(acc)
}

fn verify_rep(rep: &PointRep) -> Result<()> {
    let pt = &rep.point;
    let f = pt.field();
    let (n, p, dim) = (pt.n(), pt.p(), rep.dim());
    let id = FieldMatrix::identity(f, dim);
    let fail = |what: String| Err(Error::Internal(format!("delta rep: {what}")));
    for k in 0..n {
        for l in 0..n {
            let dx = rep.d[k].mul(&rep.x[l])?.sub(&rep.x[l].mul(&rep.d[k])?)?;
            let expect = if k == l { id.clone() } else { FieldMatrix::zeros(f, dim, dim) };
            if dx != expect {
                return fail(format!("[d_{k}, x_{l}] is wrong"));
            }
            if !rep.x[k].mul(&rep.x[l])?.sub(&rep.x[l].mul(&rep.x[k])?)?.is_zero()
                || !rep.d[k].mul(&rep.d[l])?.sub(&rep.d[l].mul(&rep.d[k])?)?.is_zero()
            {
                return fail(format!("generators {k}, {l} do not commute"));
            }
        }
        if matrix_pow(&rep.x[k], p)? != id.scale(&pt.b[k]) {
            return fail(format!("x_{k}^p is not b_{k}"));
        }
        if matrix_pow(&rep.d[k], p)? != id.scale(&pt.omega_p[k]) {
            return fail(format!("d_{k}^p is not omega_{k}"));
        }
    }
    Ok(())
}

/// Image of `u` in `End(delta^xi)`. Coefficients are embedded into the
/// point's field when they come from a subfield.
pub fn represent(u: &WeylElement, rep: &PointRep) -> Result<FieldMatrix> {
    let pt = &rep.point;
    let f = pt.field();
    let (n, p, dim) = (pt.n(), pt.p(), rep.dim());
    if u.n() != n {
        return Err(Error::Dimension(format!("A_{} acting on a point with n = {n}", u.n())));
    }
    let mut xpow: Vec<Vec<FieldMatrix>> = Vec::with_capacity(n);
    let mut dpow: Vec<Vec<FieldMatrix>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut xs = vec![FieldMatrix::identity(f, dim)];
        let mut ds = vec![FieldMatrix::identity(f, dim)];
        for e in 1..p as usize {
            xs.push(xs[e - 1].mul(&rep.x[k])?);
            ds.push(ds[e - 1].mul(&rep.d[k])?);
        }
        xpow.push(xs);
        dpow.push(ds);
    }
    let mut cache: HashMap<(Vec<u32>, Vec<u32>), FieldMatrix> = HashMap::new();
    let mut acc = FieldMatrix::zeros(f, dim, dim);
    for (x, d, c) in u.terms() {
        let mut coef = embed(&c, f)?;
        let xr: Vec<u32> = x.iter().map(|&e| e % p).collect();
        let dr: Vec<u32> = d.iter().map(|&e| e % p).collect();
        for k in 0..n {
            coef = &coef * &pt.b[k].pow((x[k] / p) as u64);
            coef = &coef * &pt.omega_p[k].pow((d[k] / p) as u64);
        }
        if coef.is_zero() {
            continue;
        }
        let key = (xr.clone(), dr.clone());
        if !cache.contains_key(&key) {
            let mut m = FieldMatrix::identity(f, dim);
            for k in 0..n {
                m = m.mul(&xpow[k][xr[k] as usize])?;
            }
            for k in 0..n {
                m = m.mul(&dpow[k][dr[k] as usize])?;
            }
            cache.insert(key.clone(), m);
        }
        acc = acc.add(&cache[&key].scale(&coef))?;
    }
    Ok(acc)
}

/// The `p x p` principal Euler block `T_k(tau)`.
pub fn euler_block(pt: &PointTriple, k: usize, tau: &FieldElement) -> Result<FieldMatrix> {
    let f = pt.field();
    f.ensure_same(tau.field())?;
    let p = pt.p() as usize;
    let a = &pt.a[k];
    let mut t = FieldMatrix::zeros(f, p, p);
    for j in 0..p {
        t.set(j, j, &(&f.from_int(j as i64 + 1) - tau));
        if j + 1 < p {
            t.set(j + 1, j, a);
        }
    }
    let corner = &t.get(0, p - 1) + &(a * &pt.omega_p[k]);
    t.set(0, p - 1, &corner);
    Ok(t)
}

/// Characteristic and minimal polynomial data of `E_k - c_k` on `delta^xi`.
#[derive(Clone, Debug)]
pub struct EulerBlockReport {
    pub k: usize,
    pub tau: FieldElement,
    pub char_poly: FieldPoly,
    pub min_poly: FieldPoly,
    pub block_char_poly: FieldPoly,
    pub expected_char_poly: FieldPoly,
    pub expected_min_poly: FieldPoly,
    pub char_ok: bool,
    pub min_ok: bool,
    pub block_ok: bool,
}

impl EulerBlockReport {
    pub fn pass(&self) -> bool {
        self.char_ok && self.min_ok && self.block_ok
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "k": self.k,
            "tau": self.tau.to_json(),
            "char_poly": self.char_poly.to_string(),
            "min_poly": self.min_poly.to_string(),
            "block_char_poly": self.block_char_poly.to_string(),
            "expected_char_poly": self.expected_char_poly.to_string(),
            "expected_min_poly": self.expected_min_poly.to_string(),
            "pass": self.pass(),
        })
    }
}

pub fn euler_block_check(pt: &PointTriple, k: usize) -> Result<EulerBlockReport> {
    if k >= pt.n() {
        return Err(Error::Dimension(format!("index {k} for n = {}", pt.n())));
    }
    let f = pt.field();
    let (n, p) = (pt.n(), pt.p());
    let tau = pt.c[k].clone();
    let rep = delta_rep(pt)?;
    let op = WeylElement::euler(f, n, k).sub(&WeylElement::scalar(&tau, n))?;
    let m = represent(&op, &rep)?;
    let char_poly = m.char_poly()?;
    let min_poly = m.min_poly()?;
    let block = euler_block(pt, k, &tau)?;
    let reps = (p as u64).pow(n as u32 - 1);
    let block_char_poly = block.char_poly()?.pow(reps);
    let mut as_coeffs = vec![0u32; p as usize + 1];
    as_coeffs[p as usize] = 1;
    as_coeffs[1] = f.neg_raw(1);
    let as_poly = FieldPoly::new(f, as_coeffs);
    let expected_char_poly = -&as_poly.pow(reps);
    Ok(EulerBlockReport {
        k,
        tau,
        char_ok: char_poly == expected_char_poly,
        min_ok: min_poly == as_poly,
        block_ok: char_poly == block_char_poly,
        char_poly,
        min_poly,
        block_char_poly,
        expected_char_poly,
        expected_min_poly: as_poly,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2_point() -> PointTriple {
        let f2 = make_field(2, 1).unwrap();
        PointTriple::over_base(&[f2.one()], &[f2.one()], None).unwrap()
    }

    #[test]
    fn delta_rep_example() {
        let pt = f2_point();
        let f = pt.field().clone();
        assert_eq!(f.order(), 4);
        let rep = delta_rep(&pt).unwrap();
        assert_eq!(rep.x(0), &FieldMatrix::from_ints(&f, &[vec![1, 1], vec![0, 1]]));
        assert_eq!(rep.d(0), &FieldMatrix::from_ints(&f, &[vec![0, 1], vec![1, 0]]));
        let e = represent(&WeylElement::euler(&f, 1, 0), &rep).unwrap();
        assert_eq!(e, FieldMatrix::from_ints(&f, &[vec![1, 1], vec![1, 0]]));
    }

    #[test]
    fn zero_point_is_nilpotent() {
        let f3 = make_field(3, 1).unwrap();
        let pt = PointTriple::over_base(&[f3.zero()], &[f3.zero()], None).unwrap();
        let rep = delta_rep(&pt).unwrap();
        assert_eq!(rep.dim(), 3);
        let x3 = WeylElement::monomial(&f3.one(), &[3], &[0]).unwrap();
        assert!(represent(&x3, &rep).unwrap().is_zero());
        for i in 0..3 {
            for j in 0..=i {
                assert!(rep.x(0).get(j, i).is_zero() || j + 1 == i);
                assert!(rep.d(0).get(j, i).is_zero());
            }
        }
    }

    #[test]
    fn euler_block_examples() {
        let pt = f2_point();
        let f = pt.field().clone();
        let r = euler_block_check(&pt, 0).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.char_poly, FieldPoly::new(&f, vec![0, 1, 1]));

        let f3 = make_field(3, 1).unwrap();
        let pt = PointTriple::over_base(&[f3.zero()], &[f3.zero()], None).unwrap();
        let r = euler_block_check(&pt, 0).unwrap();
        assert!(r.pass());
        assert_eq!(r.char_poly, FieldPoly::new(&f3, vec![0, 1, 0, 2]));
        let t = euler_block(&pt, 0, &f3.zero()).unwrap();
        assert_eq!(t, FieldMatrix::from_ints(&f3, &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 0]]));

        let f2 = make_field(2, 1).unwrap();
        let pt = PointTriple::over_base(&[f2.one(), f2.one()], &[f2.one(), f2.zero()], None).unwrap();
        for k in 0..2 {
            let r = euler_block_check(&pt, k).unwrap();
            assert!(r.pass());
            assert_eq!(r.char_poly.degree(), Some(4));
        }
    }

    #[test]
    fn rejects_bad_c() {
        let f3 = make_field(3, 1).unwrap();
        let err = PointTriple::new(vec![f3.one()], vec![f3.one()], vec![f3.zero()]).unwrap_err();
        assert!(matches!(err, Error::InvalidPoint(_)));
    }

    #[test]
    fn json_round_trip() {
        let pt = f2_point();
        let j = serde_json::to_string(&pt.to_json()).unwrap();
        let back: PointJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_point().unwrap(), pt);
        let short: PointJson = serde_json::from_str(r#"{"p":2,"k":1,"n":1,"b":[1],"omega_p":[1]}"#).unwrap();
        assert_eq!(short.to_point().unwrap(), pt);
    }
}
