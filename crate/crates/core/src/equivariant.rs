//! `K[p]`-invariants of the fiber algebra `D_zeta` and the point-level
//! Azumaya check `D_nu^{K[p]} -> End(D_eta^{K[p]})` for hypertoric data.

use itertools::Itertools;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fq::{embed, FieldElement};
use crate::hypertoric::{is_semistable, HypertoricData, PhasePoint};
use crate::linalg::FieldMatrix;
use crate::weyl::{lex_label, FiberAlgebra, PointTriple, Quotient};

/// Torus weights `w in (Z/p)^n` (as lexicographic indices) with
/// `B w = 0 mod p`, i.e. the characters of `T[p]` trivial on `K[p]`.
pub fn invariant_weights(data: &HypertoricData, p: u32, n: usize) -> Vec<usize> {
    let b = data.torus().b();
    (0..(p as usize).pow(n as u32))
        .filter(|&w| {
            let wv = lex_label(w, n, p);
            b.iter().all(|row| {
                let s: i64 = row.iter().zip(&wv).map(|(&c, &x)| c * x as i64).sum();
                s.rem_euclid(p as i64) == 0
            })
        })
        .collect()
}

fn check_point(data: &HypertoricData, pt: &PointTriple) -> Result<()> {
    if data.torus().n() != pt.n() {
        return Err(Error::Dimension(format!("data has n = {}, point has n = {}", data.torus().n(), pt.n())));
    }
    if data.field().p() != pt.p() {
        return Err(Error::MixedFields(data.field().to_string(), pt.field().to_string()));
    }
    Ok(())
}

/// `B c` for the point's Artin-Schreier roots.
pub fn point_lambda(data: &HypertoricData, pt: &PointTriple) -> Vec<FieldElement> {
    let f = pt.field();
    data.torus()
        .b()
        .iter()
        .map(|row| row.iter().zip(pt.c()).fold(f.zero(), |acc, (&v, c)| &acc + &(&f.from_int(v) * c)))
        .collect()
}

/// `AS(lambda) = lambda^p - lambda`, coordinatewise.
pub fn artin_schreier_lambda(lambda: &[FieldElement]) -> Vec<FieldElement> {
    lambda.iter().map(|x| x.artin_schreier()).collect()
}

/// Moves the roots `c` by a vector of `F_p^n` so that `B c = lambda`. This is
/// possible exactly when `lambda - B c` lies in `F_p^k`.
pub fn align_point(data: &HypertoricData, pt: &PointTriple, lambda: &[FieldElement]) -> Result<PointTriple> {
    check_point(data, pt)?;
    let f = pt.field();
    let k = data.torus().k();
    if lambda.len() != k {
        return Err(Error::Dimension(format!("lambda needs length {k}")));
    }
    let lambda: Vec<FieldElement> = lambda.iter().map(|x| embed(x, f)).collect::<Result<_>>()?;
    let current = point_lambda(data, pt);
    let diff: Vec<FieldElement> = lambda.iter().zip(&current).map(|(a, b)| a - b).collect();
    if diff.iter().all(|x| x.is_zero()) {
        return Ok(pt.clone());
    }
    if diff.iter().any(|x| x.frobenius() != *x) {
        return Err(Error::InconsistentLambda(format!(
            "AS(lambda) = [{}] differs from B(b omega)",
            artin_schreier_lambda(&lambda).iter().join(", ")
        )));
    }
    let prime = f.prime_field();
    let rhs: Vec<FieldElement> = diff.iter().map(|x| prime.from_int(x.value() as i64)).collect();
    let shift = data
        .torus()
        .b_mod(&prime)
        .solve(&rhs)?
        .ok_or(Error::CharacteristicDrop(prime.p()))?;
    let c: Vec<FieldElement> = pt
        .c()
        .iter()
        .zip(&shift)
        .map(|(c, s)| Ok(c + &embed(s, f)?))
        .collect::<Result<_>>()?;
    pt.with_c(c)
}

/// `g_j = sum_i B_ji E_i - lambda_j` as dense elements of `D_zeta`.
fn harish_chandra_generators(data: &HypertoricData, alg: &FiberAlgebra, lambda: &[FieldElement]) -> Vec<Vec<u32>> {
    let f = alg.field();
    let n = alg.n();
    let zero = vec![0u32; n];
    data.torus()
        .b()
        .iter()
        .zip(lambda)
        .map(|(row, l)| {
            let mut g = vec![0u32; alg.dim()];
            for (i, &v) in row.iter().enumerate() {
                let mut e = vec![0u32; n];
                e[i] = 1;
                g[alg.label(&e, &e)] = f.from_int(v).value();
            }
            g[alg.label(&zero, &zero)] = (-l).value();
            g
        })
        .collect()
}

fn euler_generators(alg: &FiberAlgebra, c: &[FieldElement]) -> Vec<Vec<u32>> {
    (0..alg.n()).map(|k| crate::weyl::euler_shift(alg, k, &c[k])).collect()
}

/// `D_nu^{K[p]} = D_zeta^{K[p]} / sum_j D_zeta^{K[p]} g_j`.
#[derive(Clone, Debug)]
pub struct NuReduction {
    point: PointTriple,
    algebra: FiberAlgebra,
    quotient: Quotient,
    lambda: Vec<FieldElement>,
    generators: Vec<Vec<u32>>,
    invariant_dim: usize,
}

impl NuReduction {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// `dim D_zeta^{K[p]}`.
    pub fn invariant_dim(&self) -> usize {
        self.invariant_dim
    }

    /// The point with roots aligned so that `B c = lambda`.
    pub fn point(&self) -> &PointTriple {
        &self.point
    }

    pub fn algebra(&self) -> &FiberAlgebra {
        &self.algebra
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn lambda(&self) -> &[FieldElement] {
        &self.lambda
    }

    pub fn generators(&self) -> &[Vec<u32>] {
        &self.generators
    }

    /// Coordinates of `e_i e_j` in the quotient basis.
    pub fn product(&self, i: usize, j: usize) -> Result<Vec<FieldElement>> {
        let left = self.algebra.unit(self.quotient.basis()[i]);
        let m = self.quotient.action(&self.algebra, &left)?;
        Ok((0..self.dim()).map(|r| m.get(r, j)).collect())
    }

    /// Basis labels as `(I, J)` exponent pairs.
    pub fn basis_exponents(&self) -> Vec<(Vec<u32>, Vec<u32>)> {
        self.quotient.basis().iter().map(|&l| self.algebra.exponents(l)).collect()
    }
}

/// `lambda = None` takes `lambda = B c`.
pub fn build_nu_reduction(data: &HypertoricData, pt: &PointTriple, lambda: Option<&[FieldElement]>) -> Result<NuReduction> {
    check_point(data, pt)?;
    let point = match lambda {
        Some(l) => align_point(data, pt, l)?,
        None => pt.clone(),
    };
    let lambda = point_lambda(data, &point);
    let algebra = FiberAlgebra::at_point(&point)?;
    let weights = invariant_weights(data, point.p(), point.n());
    let generators = harish_chandra_generators(data, &algebra, &lambda);
    let quotient = Quotient::build(&algebra, &weights, &generators)?;
    Ok(NuReduction {
        invariant_dim: weights.len() * algebra.side(),
        point,
        algebra,
        quotient,
        lambda,
        generators,
    })
}

/// `D_eta^{K[p]}`: the invariant weight blocks of `D_eta`.
#[derive(Clone, Debug)]
pub struct EtaInvariants {
    point: PointTriple,
    algebra: FiberAlgebra,
    quotient: Quotient,
}

impl EtaInvariants {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn point(&self) -> &PointTriple {
        &self.point
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// Matrix of a dense invariant element of `D_zeta`.
    pub fn action(&self, a: &[u32]) -> Result<FieldMatrix> {
        self.quotient.action(&self.algebra, a)
    }
}

pub fn build_eta_invariants(data: &HypertoricData, pt: &PointTriple) -> Result<EtaInvariants> {
    check_point(data, pt)?;
    let algebra = FiberAlgebra::at_point(pt)?;
    let weights = invariant_weights(data, pt.p(), pt.n());
    let quotient = Quotient::build(&algebra, &weights, &euler_generators(&algebra, pt.c()))?;
    Ok(EtaInvariants {
        point: pt.clone(),
        algebra,
        quotient,
    })
}

/// `(dim D_zeta^{K[p]}, dim D_nu^{K[p]}, dim D_eta^{K[p]})` against
/// `(p^{n+h}, p^{2h}, p^h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvariantDims {
    pub zeta: usize,
    pub nu: usize,
    pub eta: usize,
    pub expected: (usize, usize, usize),
}

impl InvariantDims {
    fn expected_for(p: u32, n: usize, h: usize) -> (usize, usize, usize) {
        let p = p as usize;
        (p.pow((n + h) as u32), p.pow(2 * h as u32), p.pow(h as u32))
    }

    pub fn pass(&self) -> bool {
        (self.zeta, self.nu, self.eta) == self.expected
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "dims": [self.zeta, self.nu, self.eta],
            "expected": [self.expected.0, self.expected.1, self.expected.2],
            "pass": self.pass(),
        })
    }
}

/// The reduction is taken at `lambda = B c`.
pub fn kp_invariant_dims(data: &HypertoricData, pt: &PointTriple) -> Result<InvariantDims> {
    let nu = build_nu_reduction(data, pt, None)?;
    let eta = build_eta_invariants(data, pt)?;
    Ok(InvariantDims {
        zeta: nu.invariant_dim(),
        nu: nu.dim(),
        eta: eta.dim(),
        expected: InvariantDims::expected_for(pt.p(), pt.n(), data.torus().h()),
    })
}

/// How the closed-orbit hypothesis was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedOrbitMode {
    Asserted,
    OnePsChecked,
}

impl ClosedOrbitMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClosedOrbitMode::Asserted => "asserted",
            ClosedOrbitMode::OnePsChecked => "1ps-checked",
        }
    }
}

/// Outcome of the bounded one-parameter-subgroup test.
#[derive(Clone, Debug)]
pub struct OrbitTest {
    pub closed: bool,
    /// Coordinates in `X_*(K)` of a subgroup whose limit leaves the orbit.
    pub destabilizer: Option<Vec<i64>>,
    pub limit: Option<PhasePoint>,
}

impl OrbitTest {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "closed": self.closed,
            "destabilizer": self.destabilizer,
            "limit": self.limit.as_ref().map(|p| p.to_json()),
        })
    }
}

/// Largest rank of `K` accepted by the one-parameter-subgroup search.
pub const ORBIT_TEST_MAX_K: usize = 6;

/// Tries every `nu = sum_j m_j B_j` with `|m_j| <= bound`. When `nu(t) pt`
/// has a limit as `t -> 0` that is semistable with more vanishing
/// coordinates, the orbit is not closed.
pub fn one_ps_orbit_test(data: &HypertoricData, pt: &PhasePoint, bound: i64) -> Result<OrbitTest> {
    let t = data.torus();
    let (n, k) = (t.n(), t.k());
    if pt.n() != n {
        return Err(Error::Dimension(format!("point has {} coordinates, data has n = {n}", pt.n())));
    }
    if k > ORBIT_TEST_MAX_K {
        return Err(Error::TooLarge(format!("k = {k} exceeds {ORBIT_TEST_MAX_K} for the orbit test")));
    }
    let zeros = |p: &PhasePoint| p.z().iter().chain(p.w()).filter(|x| x.is_zero()).count();
    let base_zeros = zeros(pt);
    for m in (0..k).map(|_| -bound..=bound).multi_cartesian_product() {
        if m.iter().all(|&v| v == 0) {
            continue;
        }
        let nu: Vec<i64> = (0..n).map(|i| (0..k).map(|j| m[j] * t.b()[j][i]).sum()).collect();
        let exists = (0..n).all(|i| (pt.z()[i].is_zero() || nu[i] >= 0) && (pt.w()[i].is_zero() || nu[i] <= 0));
        if !exists {
            continue;
        }
        let f = pt.field();
        let z = (0..n).map(|i| if nu[i] == 0 { pt.z()[i].clone() } else { f.zero() }).collect();
        let w = (0..n).map(|i| if nu[i] == 0 { pt.w()[i].clone() } else { f.zero() }).collect();
        let limit = PhasePoint::new(z, w)?;
        if zeros(&limit) > base_zeros && is_semistable(data, &limit)? {
            return Ok(OrbitTest {
                closed: false,
                destabilizer: Some(m),
                limit: Some(limit),
            });
        }
    }
    Ok(OrbitTest {
        closed: true,
        destabilizer: None,
        limit: None,
    })
}

/// Certificate for `D_nu^{K[p]} -> End(D_eta^{K[p]})`.
#[derive(Clone, Debug)]
pub struct HypertoricCertificate {
    pub data: HypertoricData,
    pub point: PointTriple,
    pub lambda: Vec<FieldElement>,
    pub dims: InvariantDims,
    pub rank: usize,
    /// Every `a g_j`, `a` invariant, acts as zero on `D_eta^{K[p]}`.
    pub phi_acts_as_zero: bool,
    pub mode: ClosedOrbitMode,
    pub orbit: Option<OrbitTest>,
}

impl HypertoricCertificate {
    pub fn expected_rank(&self) -> usize {
        self.dims.expected.1
    }

    pub fn pass(&self) -> bool {
        self.dims.pass() && self.phi_acts_as_zero && self.rank == self.expected_rank()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "data": serde_json::to_value(self.data.to_json()).unwrap(),
            "point": serde_json::to_value(self.point.to_json()).unwrap(),
            "lambda": self.lambda.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "as_lambda": artin_schreier_lambda(&self.lambda).iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "dims": [self.dims.zeta, self.dims.nu, self.dims.eta],
            "expected_dims": [self.dims.expected.0, self.dims.expected.1, self.dims.expected.2],
            "rank": self.rank,
            "expected_rank": self.expected_rank(),
            "phi_acts_as_zero": self.phi_acts_as_zero,
            "closed_orbit_mode": self.mode.as_str(),
            "orbit_test": self.orbit.as_ref().map(|o| o.to_json()),
            "pass": self.pass(),
        })
    }
}

/// Orbit-test bound used in [`ClosedOrbitMode::OnePsChecked`].
pub const ORBIT_TEST_BOUND: i64 = 3;

/// Builds both reductions at `lambda` (default `B c`), checks that the
/// image of `Phi` acts as zero, and records the rank of the action map.
pub fn azumaya_hypertoric_check(
    data: &HypertoricData,
    pt: &PointTriple,
    lambda: Option<&[FieldElement]>,
    mode: ClosedOrbitMode,
) -> Result<HypertoricCertificate> {
    check_point(data, pt)?;
    let orbit = match mode {
        ClosedOrbitMode::Asserted => None,
        ClosedOrbitMode::OnePsChecked => {
            let phase = PhasePoint::new(pt.b().to_vec(), pt.omega_p().to_vec())?;
            let test = one_ps_orbit_test(data, &phase, ORBIT_TEST_BOUND)?;
            if !test.closed {
                return Err(Error::OrbitNotClosed(format!(
                    "subgroup {:?} has a semistable limit with more zeros",
                    test.destabilizer.unwrap_or_default()
                )));
            }
            Some(test)
        }
    };
    let nu = build_nu_reduction(data, pt, lambda)?;
    let point = nu.point().clone();
    let eta = build_eta_invariants(data, &point)?;
    let alg = nu.algebra();
    let weights = invariant_weights(data, point.p(), point.n());

    let mut phi_acts_as_zero = true;
    'outer: for &w in &weights {
        for label in alg.weight_block(w) {
            let unit = alg.unit(label);
            for g in nu.generators() {
                if !eta.action(&alg.mul(&unit, g))?.is_zero() {
                    phi_acts_as_zero = false;
                    break 'outer;
                }
            }
        }
    }

    let d = eta.dim();
    let mut data_flat = vec![0u32; nu.dim() * d * d];
    for (r, &label) in nu.quotient().basis().iter().enumerate() {
        eta.quotient.label_action_flat(alg, label, &mut data_flat[r * d * d..(r + 1) * d * d])?;
    }
    let rank = FieldMatrix::from_raw(alg.field(), nu.dim(), d * d, data_flat).rank();
    let dims = InvariantDims {
        zeta: nu.invariant_dim(),
        nu: nu.dim(),
        eta: d,
        expected: InvariantDims::expected_for(point.p(), point.n(), data.torus().h()),
    };
    Ok(HypertoricCertificate {
        data: data.clone(),
        lambda: nu.lambda().to_vec(),
        point,
        dims,
        rank,
        phi_acts_as_zero,
        mode,
        orbit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::make_field;
    use crate::hypertoric::build_torus_data;
    use crate::linalg::IntMatrix;

    fn diag_data(n: usize, p: u64) -> HypertoricData {
        diag_alpha(n, p, 1)
    }

    fn diag_alpha(n: usize, p: u64, alpha: i64) -> HypertoricData {
        let f = make_field(p, 1).unwrap();
        let torus = build_torus_data(&IntMatrix::new(&[vec![1; n]]), n).unwrap();
        HypertoricData::new(torus, vec![alpha], &f, vec![f.zero()], None).unwrap()
    }

    fn trivial_data(n: usize, p: u64) -> HypertoricData {
        let f = make_field(p, 1).unwrap();
        let torus = build_torus_data(&IntMatrix::zeros(0, n), n).unwrap();
        HypertoricData::new(torus, vec![], &f, vec![], None).unwrap()
    }

    #[test]
    fn diag_p3_zero_point() {
        let f = make_field(3, 1).unwrap();
        let pt = PointTriple::over_base(&[f.zero(), f.zero()], &[f.zero(), f.zero()], None).unwrap();
        let d = diag_data(2, 3);
        let dims = kp_invariant_dims(&d, &pt).unwrap();
        assert_eq!((dims.zeta, dims.nu, dims.eta), (27, 9, 3));
        let cert = azumaya_hypertoric_check(&d, &pt, Some(&[f.zero()]), ClosedOrbitMode::Asserted).unwrap();
        assert_eq!(cert.rank, 9);
        assert!(cert.pass());
    }

    #[test]
    fn diag_n3_p2() {
        let f4 = make_field(2, 2).unwrap();
        let g = f4.generator();
        let pt = PointTriple::over_base(&[g.clone(), f4.one(), g.clone()], &[f4.one(), g.clone(), g.clone()], None).unwrap();
        let dims = kp_invariant_dims(&diag_data(3, 2), &pt).unwrap();
        assert_eq!((dims.zeta, dims.nu, dims.eta), (32, 16, 4));
    }

    #[test]
    fn trivial_k_matches_point_check() {
        let f = make_field(3, 1).unwrap();
        let pt = PointTriple::over_base(&[f.one(), f.zero()], &[f.zero(), f.from_int(2)], None).unwrap();
        let d = trivial_data(2, 3);
        let dims = kp_invariant_dims(&d, &pt).unwrap();
        assert_eq!((dims.zeta, dims.nu, dims.eta), (81, 81, 9));
        let cert = azumaya_hypertoric_check(&d, &pt, None, ClosedOrbitMode::OnePsChecked).unwrap();
        assert_eq!(cert.rank, 81);
        assert!(cert.pass());
    }

    #[test]
    fn lambda_alignment() {
        let f = make_field(3, 1).unwrap();
        let pt = PointTriple::over_base(&[f.zero(), f.zero()], &[f.zero(), f.zero()], None).unwrap();
        let d = diag_data(2, 3);
        let aligned = align_point(&d, &pt, &[f.from_int(2)]).unwrap();
        assert_eq!(point_lambda(&d, &aligned), vec![f.from_int(2)]);
        let f9 = make_field(3, 2).unwrap();
        let pt9 = PointTriple::over_base(&[f9.zero(), f9.zero()], &[f9.zero(), f9.zero()], None).unwrap();
        assert!(matches!(
            align_point(&d, &pt9, &[f9.generator()]),
            Err(Error::InconsistentLambda(_))
        ));
    }

    #[test]
    fn orbit_test_detects_unstable_limit() {
        let f = make_field(3, 1).unwrap();
        let d = diag_alpha(2, 3, 0);
        let open = PhasePoint::from_ints(&f, &[1, 1], &[0, 0]).unwrap();
        let test = one_ps_orbit_test(&d, &open, 3).unwrap();
        assert!(!test.closed);
        assert_eq!(test.destabilizer, Some(vec![1]));
        assert!(one_ps_orbit_test(&diag_data(2, 3), &open, 3).unwrap().closed);
        let full = PhasePoint::from_ints(&f, &[1, 1], &[1, 2]).unwrap();
        assert!(one_ps_orbit_test(&d, &full, 3).unwrap().closed);
    }
}
