//! Torus and lattice data for hypertoric quotients `mu^-1(lambda) //_alpha K`:
//! the hyperplane arrangement, moment maps, semistability, stabilizers,
//! circuits, walls and the polytope `P`.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::fq::{common_field, embed, make_field, ElementInput, Field, FieldElement};
use crate::linalg::{FieldMatrix, IntMatrix};

/// Largest `n` accepted by the subset enumerations.
pub const COMBINATORICS_MAX_N: usize = 12;

/// `X_*(K) -> X_*(T) = Z^n -> X_*(H) = Z^h`. Rows of `B` span `X_*(K)`;
/// column `i` of `Q` is `A_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusData {
    n: usize,
    b: Vec<Vec<i64>>,
    q: Vec<Vec<i64>>,
}

pub fn build_torus_data(b: &IntMatrix, n: usize) -> Result<TorusData> {
    if b.cols() != n {
        return Err(Error::Dimension(format!("B has {} columns, expected {n}", b.cols())));
    }
    if b.rows() > n {
        return Err(Error::Dimension(format!("B has {} rows but n = {n}", b.rows())));
    }
    if let Some(why) = b.z_basis_diagnostic() {
        return Err(Error::NotPrimitive(why));
    }
    let q = if b.rows() == 0 {
        IntMatrix::identity(n)
    } else {
        b.integer_kernel()?
    };
    let product = b.mul(&q.transpose())?;
    let orthogonal = (0..product.rows()).all(|i| product.row(i).iter().all(|x| x.is_zero()));
    if q.rows() != n - b.rows() || !q.extends_to_z_basis() || !orthogonal {
        return Err(Error::Internal("kernel lattice of B is not a saturated complement".into()));
    }
    let to_small = |m: &IntMatrix| m.to_i64().ok_or_else(|| Error::TooLarge("lattice entries exceed i64".into()));
    Ok(TorusData {
        n,
        b: to_small(b)?,
        q: to_small(&q)?,
    })
}

impl TorusData {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.b.len()
    }

    pub fn h(&self) -> usize {
        self.n - self.k()
    }

    pub fn b(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn q(&self) -> &[Vec<i64>] {
        &self.q
    }

    pub fn b_int(&self) -> IntMatrix {
        IntMatrix::from_rows(&self.b, self.n).expect("rows have length n")
    }

    /// `A_i` as an integer vector of length `h`.
    pub fn a(&self, i: usize) -> Vec<i64> {
        self.q.iter().map(|row| row[i]).collect()
    }

    /// `iota^* chi_i^vee`, column `i` of `B`.
    pub fn b_col(&self, i: usize) -> Vec<i64> {
        self.b.iter().map(|row| row[i]).collect()
    }

    pub fn b_mod(&self, f: &Field) -> FieldMatrix {
        FieldMatrix::from_ints(f, &self.b)
    }

    pub fn q_mod(&self, f: &Field) -> FieldMatrix {
        FieldMatrix::from_ints(f, &self.q)
    }

    fn b_cols(&self, cols: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self.b.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        IntMatrix::from_rows(&rows, cols.len()).expect("rows have equal length")
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "n": self.n, "k": self.k(), "h": self.h(), "B": self.b, "Q": self.q })
    }
}

/// The triple `(K, alpha, lambda)` with a lift `lambda~` of `lambda` to `t*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypertoricData {
    torus: TorusData,
    alpha: Vec<i64>,
    field: Field,
    lambda: Vec<FieldElement>,
    lambda_lift: Vec<FieldElement>,
}

impl HypertoricData {
    /// Without an explicit lift, `B lambda~ = lambda` is solved on the pivot
    /// columns of `B mod p` with the other coordinates zero.
    pub fn new(
        torus: TorusData,
        alpha: Vec<i64>,
        field: &Field,
        lambda: Vec<FieldElement>,
        lambda_lift: Option<Vec<FieldElement>>,
    ) -> Result<HypertoricData> {
        let k = torus.k();
        if alpha.len() != k || lambda.len() != k {
            return Err(Error::Dimension(format!(
                "alpha and lambda need length k = {k}, got {} and {}",
                alpha.len(),
                lambda.len()
            )));
        }
        let lambda: Vec<FieldElement> = lambda.iter().map(|x| embed(x, field)).collect::<Result<_>>()?;
        let bm = torus.b_mod(field);
        if bm.rank() != k {
            return Err(Error::CharacteristicDrop(field.p()));
        }
        let lambda_lift = match lambda_lift {
            Some(l) => {
                if l.len() != torus.n() {
                    return Err(Error::Dimension(format!("lambda_lift needs length {}", torus.n())));
                }
                let l: Vec<FieldElement> = l.iter().map(|x| embed(x, field)).collect::<Result<_>>()?;
                if bm.mul_vec(&l)? != lambda {
                    return Err(Error::InconsistentLambda("B lambda_lift differs from lambda".into()));
                }
                l
            }
            None if k == 0 => vec![field.zero(); torus.n()],
            None => bm
                .solve(&lambda)?
                .ok_or_else(|| Error::Internal("B mod p has full rank but B x = lambda failed".into()))?,
        };
        Ok(HypertoricData {
            torus,
            alpha,
            field: field.clone(),
            lambda,
            lambda_lift,
        })
    }

    pub fn from_json(j: &HypertoricJson) -> Result<HypertoricData> {
        let b = IntMatrix::from_rows(&j.b, j.n)?;
        let torus = build_torus_data(&b, j.n)?;
        let field = make_field(j.p, j.field_k)?;
        let resolve = |v: &[ElementInput]| v.iter().map(|x| x.resolve(&field)).collect::<Result<Vec<_>>>();
        let lambda = resolve(&j.lambda)?;
        let lift = j.lambda_lift.as_deref().map(resolve).transpose()?;
        HypertoricData::new(torus, j.alpha.clone(), &field, lambda, lift)
    }

    pub fn to_json(&self) -> HypertoricJson {
        HypertoricJson {
            n: self.torus.n(),
            b: self.torus.b().to_vec(),
            alpha: self.alpha.clone(),
            p: self.field.p() as u64,
            field_k: self.field.k(),
            lambda: self.lambda.iter().map(ElementInput::from).collect(),
            lambda_lift: Some(self.lambda_lift.iter().map(ElementInput::from).collect()),
        }
    }

    pub fn torus(&self) -> &TorusData {
        &self.torus
    }

    pub fn alpha(&self) -> &[i64] {
        &self.alpha
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn lambda(&self) -> &[FieldElement] {
        &self.lambda
    }

    pub fn lambda_lift(&self) -> &[FieldElement] {
        &self.lambda_lift
    }

    /// `alpha mod p` in `k*`.
    pub fn d_alpha(&self) -> Vec<FieldElement> {
        self.alpha.iter().map(|&a| self.field.from_int(a)).collect()
    }
}

fn default_field_k() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypertoricJson {
    pub n: usize,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i64>>,
    pub alpha: Vec<i64>,
    pub p: u64,
    #[serde(default = "default_field_k")]
    pub field_k: u32,
    #[serde(default)]
    pub lambda: Vec<ElementInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_lift: Option<Vec<ElementInput>>,
}

/// A point `(z, w)` of `T*A^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePoint {
    field: Field,
    z: Vec<FieldElement>,
    w: Vec<FieldElement>,
}

impl PhasePoint {
    pub fn new(z: Vec<FieldElement>, w: Vec<FieldElement>) -> Result<PhasePoint> {
        if z.len() != w.len() || z.is_empty() {
            return Err(Error::InvalidPoint(format!("z has {} and w has {} coordinates", z.len(), w.len())));
        }
        let field = z[0].field().clone();
        for x in z.iter().chain(&w) {
            field.ensure_same(x.field())?;
        }
        Ok(PhasePoint { field, z, w })
    }

    pub fn from_ints(field: &Field, z: &[i64], w: &[i64]) -> Result<PhasePoint> {
        PhasePoint::new(
            z.iter().map(|&v| field.from_int(v)).collect(),
            w.iter().map(|&v| field.from_int(v)).collect(),
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn z(&self) -> &[FieldElement] {
        &self.z
    }

    pub fn w(&self) -> &[FieldElement] {
        &self.w
    }

    /// `I(z, w) = {i : z_i = w_i = 0}`.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.z[i].is_zero() && self.w[i].is_zero()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "z": self.z.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "w": self.w.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn check_n(data: &HypertoricData, pt: &PhasePoint) -> Result<()> {
    if pt.n() != data.torus.n() {
        return Err(Error::Dimension(format!("point has {} coordinates, data has n = {}", pt.n(), data.torus.n())));
    }
    Ok(())
}

/// A hyperplane `{v in h* : <v, a_i> = offset}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: Vec<FieldElement>,
    /// `A_i` before reduction mod `p`.
    pub normal_int: Vec<i64>,
    pub offset: FieldElement,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub field: Field,
    pub h: usize,
    pub hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    /// Whether the hyperplanes with the given indices share a point.
    pub fn meets(&self, idx: &[usize]) -> Result<bool> {
        let rows: Vec<Vec<FieldElement>> = idx.iter().map(|&i| self.hyperplanes[i].normal.clone()).collect();
        let rhs: Vec<FieldElement> = idx.iter().map(|&i| self.hyperplanes[i].offset.clone()).collect();
        let m = if rows.is_empty() {
            FieldMatrix::zeros(&self.field, 0, self.h)
        } else if self.h == 0 {
            FieldMatrix::zeros(&self.field, rows.len(), 0)
        } else {
            FieldMatrix::from_rows(&self.field, &rows)?
        };
        Ok(m.solve(&rhs)?.is_some())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "h": self.h,
            "hyperplanes": self.hyperplanes.iter().map(|hp| json!({
                "a": hp.normal.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
                "A": hp.normal_int,
                "offset": hp.offset.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn require_rank(data: &HypertoricData, f: &Field) -> Result<()> {
    let t = &data.torus;
    if t.b_mod(f).rank() != t.k() || t.q_mod(f).rank() != t.h() {
        return Err(Error::CharacteristicDrop(f.p()));
    }
    Ok(())
}

fn require_combinatorial_size(n: usize) -> Result<()> {
    if n > COMBINATORICS_MAX_N {
        return Err(Error::TooLarge(format!("n = {n} exceeds the subset enumeration cap {COMBINATORICS_MAX_N}")));
    }
    Ok(())
}

pub fn arrangement(data: &HypertoricData) -> Result<Arrangement> {
    let f = data.field();
    require_rank(data, f)?;
    let t = data.torus();
    let hyperplanes = (0..t.n())
        .map(|i| {
            let a = t.a(i);
            Hyperplane {
                normal: a.iter().map(|&v| f.from_int(v)).collect(),
                normal_int: a,
                offset: data.lambda_lift[i].clone(),
            }
        })
        .collect();
    Ok(Arrangement {
        field: f.clone(),
        h: t.h(),
        hyperplanes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrangementClass {
    pub simple: bool,
    pub smooth: bool,
    /// `h + 1` hyperplanes with a common point, when not simple.
    pub simple_witness: Option<Vec<usize>>,
    /// `h` meeting hyperplanes whose `A_i` are not a basis, when simple but
    /// not smooth.
    pub smooth_witness: Option<Vec<usize>>,
}

impl ArrangementClass {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "simple": self.simple,
            "smooth": self.smooth,
            "simple_witness": self.simple_witness,
            "smooth_witness": self.smooth_witness,
        })
    }
}

/// Simple: no `h + 1` hyperplanes meet. Smooth: simple, and the `A_i` of any
/// `h` meeting hyperplanes form a basis of `Z^h`.
pub fn classify_arrangement(data: &HypertoricData) -> Result<ArrangementClass> {
    let arr = arrangement(data)?;
    let t = data.torus();
    let (n, h) = (t.n(), t.h());
    require_combinatorial_size(n)?;
    let mut simple_witness = None;
    for s in (0..n).combinations(h + 1) {
        if arr.meets(&s)? {
            simple_witness = Some(s);
            break;
        }
    }
    let mut smooth_witness = None;
    if simple_witness.is_none() {
        for s in (0..n).combinations(h) {
            if !arr.meets(&s)? {
                continue;
            }
            let rows: Vec<Vec<i64>> = s.iter().map(|&i| t.a(i)).collect();
            if !IntMatrix::from_rows(&rows, h)?.extends_to_z_basis() {
                smooth_witness = Some(s);
                break;
            }
        }
    }
    let simple = simple_witness.is_none();
    Ok(ArrangementClass {
        simple,
        smooth: simple && smooth_witness.is_none(),
        simple_witness,
        smooth_witness,
    })
}

fn stabilizer_dim_for(data: &HypertoricData, f: &Field, support: &[usize]) -> usize {
    let t = data.torus();
    let (n, k) = (t.n(), t.k());
    let cols = k + support.len();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|r| {
            let mut row: Vec<i64> = (0..k).map(|j| t.b()[j][r]).collect();
            row.extend(support.iter().map(|&i| i64::from(i == r)));
            row
        })
        .collect();
    if cols == 0 {
        return 0;
    }
    cols - FieldMatrix::from_ints(f, &rows).rank()
}

/// `dim(t_I ∩ k)` over the point's field, `I` the common zeros of `z` and `w`.
pub fn stabilizer_dim(data: &HypertoricData, pt: &PhasePoint) -> Result<usize> {
    check_n(data, pt)?;
    Ok(stabilizer_dim_for(data, pt.field(), &pt.support()))
}

fn is_partial_basis(data: &HypertoricData, support: &[usize]) -> Result<bool> {
    let t = data.torus();
    let rows: Vec<Vec<i64>> = support.iter().map(|&i| t.a(i)).collect();
    Ok(IntMatrix::from_rows(&rows, t.h())?.extends_to_z_basis())
}

/// Whether `{A_i : i in I}` is part of a basis of `Z^h`.
pub fn stabilizer_trivial(data: &HypertoricData, pt: &PhasePoint) -> Result<bool> {
    check_n(data, pt)?;
    is_partial_basis(data, &pt.support())
}

/// `f = prod x_i^{x_exponents[i]} d_i^{d_exponents[i]}` has weight `m alpha`
/// and does not vanish at the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemistabilityWitness {
    pub m: u64,
    pub x_exponents: Vec<u64>,
    pub d_exponents: Vec<u64>,
}

impl SemistabilityWitness {
    pub fn to_json(&self) -> serde_json::Value {
        json!({ "m": self.m, "x": self.x_exponents, "d": self.d_exponents })
    }
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// The unique solution of `sum_j c_j cols[j] = rhs` when the columns are
/// independent and the system is consistent.
fn solve_independent(cols: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = rhs.len();
    let s = cols.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut r: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            r.push(rhs[i].clone());
            r
        })
        .collect();
    let mut r = 0;
    for c in 0..s {
        let piv = (r..rows).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let fac = m[i][c].clone();
                for j in c..=s {
                    let v = &m[r][j] * &fac;
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    if m[r..].iter().any(|row| !row[s].is_zero()) {
        return None;
    }
    Some((0..s).map(|c| m[c][s].clone()).collect())
}

/// Nonnegative rational coefficients expressing `target` in the cone spanned
/// by `gens`, found on a linearly independent subset (Carathéodory).
fn cone_coefficients(gens: &[Vec<i64>], target: &[i64]) -> Option<Vec<BigRational>> {
    let rhs: Vec<BigRational> = target.iter().map(|&v| rat(v)).collect();
    if target.iter().all(|&v| v == 0) {
        return Some(vec![BigRational::zero(); gens.len()]);
    }
    let mut usable: Vec<usize> = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, g) in gens.iter().enumerate() {
        if g.iter().any(|&v| v != 0) && seen.insert(g.clone()) {
            usable.push(i);
        }
    }
    let cols: Vec<Vec<BigRational>> = gens.iter().map(|g| g.iter().map(|&v| rat(v)).collect()).collect();
    let max = target.len().min(usable.len());
    for size in 1..=max {
        for subset in usable.iter().copied().combinations(size) {
            let sub: Vec<Vec<BigRational>> = subset.iter().map(|&i| cols[i].clone()).collect();
            if let Some(c) = solve_independent(&sub, &rhs) {
                if c.iter().all(|x| !x.is_negative()) {
                    let mut out = vec![BigRational::zero(); gens.len()];
                    for (&i, x) in subset.iter().zip(c) {
                        out[i] = x;
                    }
                    return Some(out);
                }
            }
        }
    }
    None
}

/// Generators `+iota^* chi_i^vee` for `z_i != 0` and `-iota^* chi_i^vee` for
/// `w_i != 0`, tagged with `(i, sign)`.
fn semistability_generators(t: &TorusData, z_nonzero: &[bool], w_nonzero: &[bool]) -> (Vec<Vec<i64>>, Vec<(usize, bool)>) {
    let mut gens = Vec::new();
    let mut tags = Vec::new();
    for i in 0..t.n() {
        let col = t.b_col(i);
        if z_nonzero[i] {
            gens.push(col.clone());
            tags.push((i, true));
        }
        if w_nonzero[i] {
            gens.push(col.iter().map(|v| -v).collect());
            tags.push((i, false));
        }
    }
    (gens, tags)
}

fn witness_from_pattern(t: &TorusData, alpha: &[i64], z_nonzero: &[bool], w_nonzero: &[bool]) -> Option<SemistabilityWitness> {
    let (gens, tags) = semistability_generators(t, z_nonzero, w_nonzero);
    let coeffs = cone_coefficients(&gens, alpha)?;
    let m = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut x = vec![0u64; t.n()];
    let mut d = vec![0u64; t.n()];
    for ((i, plus), c) in tags.iter().zip(&coeffs) {
        let e = (c * BigRational::from_integer(m.clone())).to_integer().to_u64()?;
        if *plus {
            x[*i] += e;
        } else {
            d[*i] += e;
        }
    }
    Some(SemistabilityWitness {
        m: m.to_u64()?,
        x_exponents: x,
        d_exponents: d,
    })
}

/// An `alpha^m`-semi-invariant monomial not vanishing at `pt`, if any.
pub fn semistability_witness(data: &HypertoricData, pt: &PhasePoint) -> Result<Option<SemistabilityWitness>> {
    check_n(data, pt)?;
    let zn: Vec<bool> = pt.z().iter().map(|x| !x.is_zero()).collect();
    let wn: Vec<bool> = pt.w().iter().map(|x| !x.is_zero()).collect();
    Ok(witness_from_pattern(data.torus(), data.alpha(), &zn, &wn))
}

/// Some `m alpha`, `m > 0`, lies in the monoid spanned by
/// `{iota^* chi_i^vee : z_i != 0} ∪ {-iota^* chi_i^vee : w_i != 0}`.
pub fn is_semistable(data: &HypertoricData, pt: &PhasePoint) -> Result<bool> {
    Ok(semistability_witness(data, pt)?.is_some())
}

/// `B (z_1 w_1, ..., z_n w_n)` over the point's field.
pub fn moment_k(data: &HypertoricData, pt: &PhasePoint) -> Result<Vec<FieldElement>> {
    check_n(data, pt)?;
    let f = pt.field();
    let zw: Vec<FieldElement> = pt.z().iter().zip(pt.w()).map(|(a, b)| a * b).collect();
    let t = data.torus();
    Ok(t
        .b()
        .iter()
        .map(|row| row.iter().zip(&zw).fold(f.zero(), |acc, (&c, x)| &acc + &(&f.from_int(c) * x)))
        .collect())
}

/// The `v in h*` with `<v, a_i> = z_i w_i + lambda~_i` for every `i`. Such a
/// `v` exists exactly when `moment_k(pt) = -lambda`.
pub fn moment_h(data: &HypertoricData, pt: &PhasePoint) -> Result<Vec<FieldElement>> {
    check_n(data, pt)?;
    let f = common_field(data.field(), pt.field())?;
    require_rank(data, &f)?;
    let t = data.torus();
    let rhs: Vec<FieldElement> = (0..t.n())
        .map(|i| Ok(&embed(&(&pt.z()[i] * &pt.w()[i]), &f)? + &embed(&data.lambda_lift[i], &f)?))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<i64>> = (0..t.n()).map(|i| t.a(i)).collect();
    let a = if t.h() == 0 {
        FieldMatrix::zeros(&f, t.n(), 0)
    } else {
        FieldMatrix::from_ints(&f, &rows)
    };
    a.solve(&rhs)?.ok_or_else(|| {
        let mk: Vec<String> = moment_k(data, pt)
            .map(|v| v.iter().map(|x| x.to_string()).collect())
            .unwrap_or_default();
        Error::NotOnFiber(format!("B(z w) = [{}] is not -lambda", mk.join(", ")))
    })
}

/// A circuit `I` with its primitive normal `n_I` and wall `W_I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub support: Vec<usize>,
    /// `n_I` in the basis of `X_*(K)` given by the rows of `B`.
    pub normal: Vec<i64>,
    /// `n_I` in `X_*(T) = Z^n`.
    pub normal_t: Vec<i64>,
    pub alpha_pairing: i64,
    /// `false` when `<n_I, alpha> = 0` and the sign was fixed by making the
    /// first nonzero entry positive.
    pub oriented_by_alpha: bool,
    /// Basis of `W_I ⊂ k*` over the data field.
    pub wall: Vec<Vec<FieldElement>>,
}

impl Circuit {
    /// `N_I = sum_i |<n_I, chi_i>|`.
    pub fn n_i(&self) -> i64 {
        self.normal_t.iter().map(|v| v.abs()).sum()
    }

    /// Whether `v in k*` lies on `W_I`.
    pub fn wall_contains(&self, v: &[FieldElement]) -> bool {
        let Some(first) = v.first() else {
            return true;
        };
        let f = first.field();
        self.normal
            .iter()
            .zip(v)
            .fold(f.zero(), |acc, (&c, x)| &acc + &(&f.from_int(c) * x))
            .is_zero()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "support": self.support,
            "normal": self.normal,
            "normal_t": self.normal_t,
            "alpha_pairing": self.alpha_pairing,
            "oriented_by_alpha": self.oriented_by_alpha,
            "wall_dim": self.wall.len(),
            "wall": self.wall.iter().map(|v| v.iter().map(|x| x.to_json()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "N_I": self.n_i(),
        })
    }
}

fn complement(n: usize, s: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !s.contains(i)).collect()
}

/// Minimal `I` with `dim(k ∩ t_I) = 1` over the rationals.
pub fn circuits_and_walls(data: &HypertoricData) -> Result<Vec<Circuit>> {
    let t = data.torus();
    let (n, k) = (t.n(), t.k());
    require_combinatorial_size(n)?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let f = data.field();
    let mut out: Vec<Circuit> = Vec::new();
    for support in (0..n).powerset() {
        if out.iter().any(|c| c.support.iter().all(|i| support.contains(i))) {
            continue;
        }
        let comp = complement(n, &support);
        let dim = k - if comp.is_empty() { 0 } else { t.b_cols(&comp).rank() };
        if dim != 1 {
            continue;
        }
        let m0: Vec<i64> = if comp.is_empty() {
            vec![1]
        } else {
            let kernel = t.b_cols(&comp).transpose().integer_kernel()?;
            if kernel.rows() != 1 {
                return Err(Error::Internal(format!("circuit {support:?} has a kernel of rank {}", kernel.rows())));
            }
            kernel.to_i64().ok_or_else(|| Error::TooLarge("circuit normal exceeds i64".into()))?.remove(0)
        };
        let pairing: i64 = m0.iter().zip(data.alpha()).map(|(a, b)| a * b).sum();
        let flip = if pairing != 0 {
            pairing < 0
        } else {
            m0.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0)
        };
        let normal: Vec<i64> = m0.iter().map(|&v| if flip { -v } else { v }).collect();
        let normal_t: Vec<i64> = (0..n).map(|i| (0..k).map(|j| normal[j] * t.b()[j][i]).sum()).collect();
        let (_, wall) = FieldMatrix::from_ints(f, &[normal.clone()]).rank_kernel();
        out.push(Circuit {
            support,
            alpha_pairing: pairing.abs(),
            oriented_by_alpha: pairing != 0,
            normal,
            normal_t,
            wall,
        });
    }
    Ok(out)
}

/// A support set `I` realized by a semistable point of `mu^-1(lambda)`.
#[derive(Clone, Debug)]
pub struct RealizedSupport {
    pub support: Vec<usize>,
    pub point: PhasePoint,
    pub stabilizer_dim: usize,
    pub z_basis: bool,
}

/// A circuit whose wall contains both `d alpha` and `lambda`.
#[derive(Clone, Debug)]
pub struct WallHit {
    pub support: Vec<usize>,
    /// `<n_I, alpha>` vanishes only modulo `p`.
    pub characteristic_only: bool,
    /// Point built by the realizability recipe, with the checks it passed.
    pub point: Option<PhasePoint>,
    pub point_verified: bool,
}

#[derive(Clone, Debug)]
pub struct FreenessReport {
    /// No circuit has `(d alpha, lambda) in W_I x W_I`.
    pub finite_stabilizers: bool,
    /// Every realized support has a finite stabilizer.
    pub finite_stabilizers_realized: bool,
    pub free: bool,
    pub wall_hits: Vec<WallHit>,
    pub realized: Vec<RealizedSupport>,
}

impl FreenessReport {
    pub fn non_basis(&self) -> Vec<&RealizedSupport> {
        self.realized.iter().filter(|r| !r.z_basis).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "finite_stabilizers": self.finite_stabilizers,
            "finite_stabilizers_realized": self.finite_stabilizers_realized,
            "free": self.free,
            "q_alpha_lambda": self.realized.iter().map(|r| json!({
                "support": r.support,
                "stabilizer_dim": r.stabilizer_dim,
                "z_basis": r.z_basis,
                "point": r.point.to_json(),
            })).collect::<Vec<_>>(),
            "witnesses": {
                "walls": self.wall_hits.iter().map(|w| json!({
                    "support": w.support,
                    "characteristic_only": w.characteristic_only,
                    "point": w.point.as_ref().map(|p| p.to_json()),
                    "point_verified": w.point_verified,
                })).collect::<Vec<_>>(),
                "non_basis": self.non_basis().iter().map(|r| json!({
                    "support": r.support,
                    "point": r.point.to_json(),
                })).collect::<Vec<_>>(),
            },
        })
    }
}

/// A point of the affine space `c0 + span(kernel)` with every coordinate
/// nonzero, over the least extension of `f` that has one. `None` if some
/// coordinate vanishes identically.
fn nonvanishing_point(f: &Field, c0: &[FieldElement], kernel: &[Vec<FieldElement>]) -> Result<Option<Vec<FieldElement>>> {
    let len = c0.len();
    if (0..len).any(|i| c0[i].is_zero() && kernel.iter().all(|v| v[i].is_zero())) {
        return Ok(None);
    }
    let bad_roots = (len * kernel.len().max(1)) as u64;
    let mut degree = f.k();
    loop {
        let g = make_field(f.p() as u64, degree)?;
        if g.order() > bad_roots {
            let c0: Vec<FieldElement> = c0.iter().map(|x| embed(x, &g)).collect::<Result<_>>()?;
            let kernel: Vec<Vec<FieldElement>> = kernel
                .iter()
                .map(|v| v.iter().map(|x| embed(x, &g)).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            for s in g.elements() {
                let mut c = c0.clone();
                let mut power = s.clone();
                for v in &kernel {
                    for i in 0..len {
                        c[i] = &c[i] + &(&power * &v[i]);
                    }
                    power = &power * &s;
                }
                if c.iter().all(|x| !x.is_zero()) {
                    return Ok(Some(c));
                }
            }
        }
        degree += f.k();
    }
}

/// Searches for a semistable point of `mu^-1(lambda)` with zero set exactly
/// `support`, case by case on which products `z_i w_i` vanish.
fn realize_support(data: &HypertoricData, support: &[usize]) -> Result<Option<PhasePoint>> {
    let t = data.torus();
    let f = data.field();
    let comp = complement(t.n(), support);
    for nonzero in comp.iter().copied().powerset() {
        let rest: Vec<usize> = comp.iter().copied().filter(|i| !nonzero.contains(i)).collect();
        let products = if nonzero.is_empty() {
            if data.lambda().iter().any(|x| !x.is_zero()) {
                continue;
            }
            Vec::new()
        } else {
            let m = FieldMatrix::from_ints(f, &t.b_cols(&nonzero).to_i64().expect("small entries"));
            let Some(c0) = m.solve(data.lambda())? else {
                continue;
            };
            let (_, ker) = m.rank_kernel();
            match nonvanishing_point(f, &c0, &ker)? {
                Some(c) => c,
                None => continue,
            }
        };
        for choice in 0u64..(1 << rest.len()) {
            let mut zn = vec![false; t.n()];
            let mut wn = vec![false; t.n()];
            for &i in &nonzero {
                zn[i] = true;
                wn[i] = true;
            }
            for (bit, &i) in rest.iter().enumerate() {
                if choice >> bit & 1 == 0 {
                    zn[i] = true;
                } else {
                    wn[i] = true;
                }
            }
            if witness_from_pattern(t, data.alpha(), &zn, &wn).is_none() {
                continue;
            }
            let g = products.first().map_or_else(|| f.clone(), |x| x.field().clone());
            let mut z = vec![g.zero(); t.n()];
            let mut w = vec![g.zero(); t.n()];
            for (&i, c) in nonzero.iter().zip(&products) {
                z[i] = g.one();
                w[i] = c.clone();
            }
            for &i in &rest {
                if zn[i] {
                    z[i] = g.one();
                } else {
                    w[i] = g.one();
                }
            }
            return Ok(Some(PhasePoint::new(z, w)?));
        }
    }
    Ok(None)
}

/// The realizability recipe: zero on `I`; off `I`, `z_i w_i = lambda~_i` when
/// that is nonzero, else `z_i = 1` or `w_i = 1` by the sign of `alpha~_i`,
/// with both lifts supported off `I`.
fn recipe_point(data: &HypertoricData, circuit: &Circuit) -> Result<Option<PhasePoint>> {
    let t = data.torus();
    let f = data.field();
    let comp = complement(t.n(), &circuit.support);
    let cols = t.b_cols(&comp);
    let lam = FieldMatrix::from_ints(f, &cols.to_i64().expect("small entries")).solve(data.lambda())?;
    let Some(lam) = lam else {
        return Ok(None);
    };
    let rat_cols: Vec<Vec<BigRational>> = (0..comp.len())
        .map(|j| (0..t.k()).map(|r| rat(t.b()[r][comp[j]])).collect())
        .collect();
    let rhs: Vec<BigRational> = data.alpha().iter().map(|&a| rat(a)).collect();
    let Some(alpha) = solve_any(&rat_cols, &rhs) else {
        return Ok(None);
    };
    let mut z = vec![f.zero(); t.n()];
    let mut w = vec![f.zero(); t.n()];
    for (j, &i) in comp.iter().enumerate() {
        if !lam[j].is_zero() {
            z[i] = f.one();
            w[i] = lam[j].clone();
        } else if !alpha[j].is_negative() {
            z[i] = f.one();
        } else {
            w[i] = f.one();
        }
    }
    Ok(Some(PhasePoint::new(z, w)?))
}

/// Some solution of `sum_j c_j cols[j] = rhs`, free variables zero.
fn solve_any(cols: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = rhs.len();
    let s = cols.len();
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut r: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            r.push(rhs[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..s {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let fac = m[i][c].clone();
                for j in c..=s {
                    let v = &m[r][j] * &fac;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[s].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); s];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][s].clone();
    }
    Some(x)
}

/// Finite stabilizers by the wall criterion, and freeness by adding the basis
/// condition on every support in `Q_{alpha, lambda}`.
pub fn freeness_report(data: &HypertoricData) -> Result<FreenessReport> {
    let t = data.torus();
    require_combinatorial_size(t.n())?;
    let f = data.field();
    let d_alpha = data.d_alpha();
    let mut wall_hits = Vec::new();
    for c in circuits_and_walls(data)? {
        if !(c.wall_contains(&d_alpha) && c.wall_contains(data.lambda())) {
            continue;
        }
        let characteristic_only = c.alpha_pairing != 0;
        let point = recipe_point(data, &c)?;
        let point_verified = match &point {
            Some(pt) => {
                pt.support() == c.support
                    && moment_k(data, pt)? == data.lambda()
                    && is_semistable(data, pt)?
                    && stabilizer_dim(data, pt)? >= 1
            }
            None => false,
        };
        wall_hits.push(WallHit {
            support: c.support.clone(),
            characteristic_only,
            point,
            point_verified,
        });
    }
    let mut realized = Vec::new();
    for support in (0..t.n()).powerset() {
        if let Some(point) = realize_support(data, &support)? {
            realized.push(RealizedSupport {
                stabilizer_dim: stabilizer_dim_for(data, f, &support),
                z_basis: is_partial_basis(data, &support)?,
                support,
                point,
            });
        }
    }
    let finite_stabilizers = wall_hits.is_empty();
    Ok(FreenessReport {
        finite_stabilizers,
        finite_stabilizers_realized: realized.iter().all(|r| r.stabilizer_dim == 0),
        free: finite_stabilizers && realized.iter().all(|r| r.z_basis),
        wall_hits,
        realized,
    })
}

/// `P = {chi in X^*(K) : |<n_I, chi>| <= N_I for every circuit I}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    pub circuits: Vec<Circuit>,
    pub n_max: i64,
}

impl Polytope {
    pub fn contains(&self, chi: &[i64]) -> bool {
        self.circuits.iter().all(|c| {
            let v: i64 = c.normal.iter().zip(chi).map(|(a, b)| a * b).sum();
            v.abs() <= c.n_i()
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "N": self.n_max,
            "circuits": self.circuits.iter().map(|c| json!({
                "support": c.support,
                "normal": c.normal,
                "N_I": c.n_i(),
            })).collect::<Vec<_>>(),
            "inequalities": self.circuits.iter().map(|c| json!({
                "normal": c.normal,
                "bound": c.n_i(),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn polytope_p(data: &HypertoricData) -> Result<Polytope> {
    let circuits = circuits_and_walls(data)?;
    let n_max = circuits.iter().map(Circuit::n_i).max().unwrap_or(0);
    Ok(Polytope { circuits, n_max })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(b: &[Vec<i64>], n: usize, alpha: &[i64], p: u64, lambda: &[i64], lift: Option<&[i64]>) -> HypertoricData {
        let f = make_field(p, 1).unwrap();
        let torus = build_torus_data(&IntMatrix::from_rows(b, n).unwrap(), n).unwrap();
        let lambda = lambda.iter().map(|&v| f.from_int(v)).collect();
        let lift = lift.map(|l| l.iter().map(|&v| f.from_int(v)).collect());
        HypertoricData::new(torus, alpha.to_vec(), &f, lambda, lift).unwrap()
    }

    #[test]
    fn torus_data_examples() {
        let t = build_torus_data(&IntMatrix::new(&[vec![1, 1]]), 2).unwrap();
        assert_eq!(t.q(), &[vec![1, -1]]);
        assert_eq!((t.a(0), t.a(1)), (vec![1], vec![-1]));
        let t = build_torus_data(&IntMatrix::identity(3), 3).unwrap();
        assert_eq!(t.h(), 0);
        assert!(matches!(
            build_torus_data(&IntMatrix::new(&[vec![2, 0]]), 2),
            Err(Error::NotPrimitive(_))
        ));
        let t = build_torus_data(&IntMatrix::new(&[vec![1, 1, 1]]), 3).unwrap();
        assert_eq!(t.q(), &[vec![1, 0, -1], vec![0, 1, -1]]);
    }

    #[test]
    fn arrangement_examples() {
        let d = data(&[vec![1, 1]], 2, &[1], 5, &[1], Some(&[1, 0]));
        let arr = arrangement(&d).unwrap();
        assert_eq!(arr.hyperplanes[0].offset, d.field().one());
        assert!(arr.hyperplanes[1].offset.is_zero());
        let class = classify_arrangement(&d).unwrap();
        assert!(class.simple && class.smooth);
        let d0 = data(&[vec![1, 1]], 2, &[1], 5, &[0], None);
        assert!(!classify_arrangement(&d0).unwrap().simple);
        let d3 = data(&[vec![1, 1, 1]], 3, &[1], 7, &[3], Some(&[1, 2, 0]));
        let c3 = classify_arrangement(&d3).unwrap();
        assert!(c3.simple && c3.smooth);
    }

    #[test]
    fn stabilizer_examples() {
        let d = data(&[vec![1, 1]], 2, &[1], 3, &[0], None);
        let f = d.field().clone();
        let p1 = PhasePoint::from_ints(&f, &[1, 0], &[0, 0]).unwrap();
        assert_eq!(stabilizer_dim(&d, &p1).unwrap(), 0);
        assert!(stabilizer_trivial(&d, &p1).unwrap());
        let origin = PhasePoint::from_ints(&f, &[0, 0], &[0, 0]).unwrap();
        assert_eq!(stabilizer_dim(&d, &origin).unwrap(), 1);
        assert!(!stabilizer_trivial(&d, &origin).unwrap());
        let full = PhasePoint::from_ints(&f, &[1, 1], &[1, 2]).unwrap();
        assert_eq!(stabilizer_dim(&d, &full).unwrap(), 0);
        assert!(stabilizer_trivial(&d, &full).unwrap());
    }

    #[test]
    fn semistability_examples() {
        let d = data(&[vec![1, 1]], 2, &[1], 3, &[0], None);
        let f = d.field().clone();
        let p1 = PhasePoint::from_ints(&f, &[1, 0], &[0, 0]).unwrap();
        let wit = semistability_witness(&d, &p1).unwrap().unwrap();
        assert_eq!((wit.m, wit.x_exponents.clone()), (1, vec![1, 0]));
        let p2 = PhasePoint::from_ints(&f, &[0, 0], &[1, 1]).unwrap();
        assert!(!is_semistable(&d, &p2).unwrap());
        let d0 = data(&[vec![1, 1]], 2, &[0], 3, &[0], None);
        assert!(is_semistable(&d0, &p2).unwrap());
        let d12 = data(&[vec![1, 2]], 2, &[1], 5, &[0], None);
        let only_z2 = PhasePoint::from_ints(&f, &[0, 1], &[0, 0]).unwrap();
        let wit = semistability_witness(&d12, &only_z2).unwrap().unwrap();
        assert_eq!((wit.m, wit.x_exponents), (2, vec![0, 1]));
    }

    #[test]
    fn moment_examples() {
        let d = data(&[vec![1, 1]], 2, &[1], 5, &[0], Some(&[0, 0]));
        let f = d.field().clone();
        let ones = PhasePoint::from_ints(&f, &[1, 1], &[1, 1]).unwrap();
        assert_eq!(moment_k(&d, &ones).unwrap(), vec![f.from_int(2)]);
        let half = PhasePoint::from_ints(&f, &[1, 0], &[1, 0]).unwrap();
        assert_eq!(moment_k(&d, &half).unwrap(), vec![f.one()]);
        assert!(matches!(moment_h(&d, &half), Err(Error::NotOnFiber(_))));
        let pt = PhasePoint::from_ints(&f, &[1, 1], &[1, -1]).unwrap();
        assert_eq!(moment_h(&d, &pt).unwrap(), vec![f.one()]);
        let zero = PhasePoint::from_ints(&f, &[1, 0], &[0, 1]).unwrap();
        assert_eq!(moment_h(&d, &zero).unwrap(), vec![f.zero()]);
    }

    #[test]
    fn circuit_examples() {
        let d = data(&[vec![1, 1]], 2, &[1], 5, &[1], None);
        let cs = circuits_and_walls(&d).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!((cs[0].support.clone(), cs[0].normal.clone()), (vec![0, 1], vec![1]));
        assert!(cs[0].wall.is_empty());
        let dt = data(&[vec![1, 0], vec![0, 1]], 2, &[1, 1], 5, &[0, 0], None);
        let cs = circuits_and_walls(&dt).unwrap();
        assert_eq!(cs.iter().map(|c| c.support.clone()).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
        let f = dt.field().clone();
        assert_eq!(cs[0].wall, vec![vec![f.zero(), f.one()]]);
        assert!(cs.iter().all(|c| c.n_i() == 1));
        let d3 = data(&[vec![1, 1, 1]], 3, &[1], 5, &[0], None);
        let cs = circuits_and_walls(&d3).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].support, vec![0, 1, 2]);
    }

    #[test]
    fn freeness_examples() {
        let r = freeness_report(&data(&[vec![1, 1]], 2, &[1], 3, &[1], None)).unwrap();
        assert!(r.finite_stabilizers && r.free);
        let r = freeness_report(&data(&[vec![1, 1]], 2, &[0], 3, &[0], None)).unwrap();
        assert!(!r.finite_stabilizers && !r.free);
        assert!(r.wall_hits[0].point_verified);
        let r = freeness_report(&data(&[vec![1, 1]], 2, &[1], 3, &[0], None)).unwrap();
        assert!(r.free);
        let supports: Vec<Vec<usize>> = r.realized.iter().map(|x| x.support.clone()).collect();
        assert_eq!(supports, vec![vec![], vec![0], vec![1]]);
    }

    #[test]
    fn polytope_examples() {
        let pp = polytope_p(&data(&[vec![1, 1]], 2, &[1], 3, &[0], None)).unwrap();
        assert_eq!(pp.n_max, 2);
        assert!(pp.contains(&[2]) && pp.contains(&[-2]) && !pp.contains(&[3]));
        for p in [3u64, 5, 7] {
            let n = p as usize + 1;
            let pp = polytope_p(&data(&[vec![1; n]], n, &[1], p, &[0], None)).unwrap();
            assert_eq!(pp.n_max, p as i64 + 1);
        }
        let box2 = polytope_p(&data(&[vec![1, 0], vec![0, 1]], 2, &[1, 1], 3, &[0, 0], None)).unwrap();
        assert_eq!(box2.n_max, 1);
        assert!(box2.contains(&[1, -1]) && !box2.contains(&[2, 0]));
    }
}
