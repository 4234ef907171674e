use serde_json::json;

use super::point::{lex_index, lex_label};
use super::{delta_rep, reorder_1d, represent, PointTriple, WeylElement};
use crate::error::{Error, Result};
use crate::fq::{embed, Field, FieldElement};
use crate::linalg::FieldMatrix;

/// The fiber `D_zeta = A_n / (x_i^p - b_i, d_i^p - omega_i)` in the PBW basis
/// `x^I d^J`, `I, J in {0..p-1}^n`. Label of `x^I d^J` is
/// `lex(I) * p^n + lex(J)`.
#[derive(Clone, Debug)]
pub struct FiberAlgebra {
    field: Field,
    n: usize,
    p: u32,
    side: usize,
    b: Vec<u32>,
    omega: Vec<u32>,
    /// Per variable, indexed by `((i p + j) p + k) p + l`: the reduced
    /// expansion of `x^i d^j x^k d^l` as `(i', j', coefficient)`.
    table: Vec<Vec<Vec<(u32, u32, u32)>>>,
}

impl FiberAlgebra {
    pub fn new(field: &Field, b: &[FieldElement], omega_p: &[FieldElement]) -> Result<FiberAlgebra> {
        let n = b.len();
        if omega_p.len() != n {
            return Err(Error::Dimension("b and omega_p differ in length".into()));
        }
        let b: Vec<u32> = b.iter().map(|x| embed(x, field).map(|y| y.value())).collect::<Result<_>>()?;
        let omega: Vec<u32> = omega_p.iter().map(|x| embed(x, field).map(|y| y.value())).collect::<Result<_>>()?;
        let p = field.p();
        let pu = p as usize;
        let mut table = Vec::with_capacity(n);
        for v in 0..n {
            let mut t = vec![Vec::new(); pu.pow(4)];
            for i in 0..p {
                for j in 0..p {
                    for k in 0..p {
                        for l in 0..p {
                            let idx = (((i * p + j) * p + k) * p + l) as usize;
                            t[idx] = reorder_1d(j, k, p)
                                .into_iter()
                                .map(|(m, c)| {
                                    let (mut xi, mut dj, mut c) = (i + k - m, j - m + l, c);
                                    if xi >= p {
                                        xi -= p;
                                        c = field.mul_raw(c, b[v]);
                                    }
                                    if dj >= p {
                                        dj -= p;
                                        c = field.mul_raw(c, omega[v]);
                                    }
                                    (xi, dj, c)
                                })
                                .filter(|t| t.2 != 0)
                                .collect();
                        }
                    }
                }
            }
            table.push(t);
        }
        Ok(FiberAlgebra {
            field: field.clone(),
            n,
            p,
            side: pu.pow(n as u32),
            b,
            omega,
            table,
        })
    }

    pub fn at_point(pt: &PointTriple) -> Result<FiberAlgebra> {
        FiberAlgebra::new(pt.field(), pt.b(), pt.omega_p())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `p^n`, the number of `I` (or `J`) labels.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.side * self.side
    }

    pub fn label(&self, x: &[u32], d: &[u32]) -> usize {
        lex_index(x, self.p) * self.side + lex_index(d, self.p)
    }

    /// `(I, J)` of a label.
    pub fn exponents(&self, label: usize) -> (Vec<u32>, Vec<u32>) {
        (
            lex_label(label / self.side, self.n, self.p),
            lex_label(label % self.side, self.n, self.p),
        )
    }

    /// Index of the torus weight `(I - J) mod p` in lexicographic order.
    pub fn weight(&self, label: usize) -> usize {
        let (x, d) = self.exponents(label);
        let w: Vec<u32> = x.iter().zip(&d).map(|(&i, &j)| (i + self.p - j) % self.p).collect();
        lex_index(&w, self.p)
    }

    /// Labels of weight `w`, ascending.
    pub fn weight_block(&self, w: usize) -> Vec<usize> {
        let wv = lex_label(w, self.n, self.p);
        let mut out: Vec<usize> = (0..self.side)
            .map(|jd| {
                let d = lex_label(jd, self.n, self.p);
                let x: Vec<u32> = d.iter().zip(&wv).map(|(&j, &w)| (j + w) % self.p).collect();
                self.label(&x, &d)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Product of two basis monomials as `(label, coefficient)` pairs.
    pub fn mul_labels(&self, l1: usize, l2: usize) -> Vec<(usize, u32)> {
        let f = &self.field;
        let (x1, d1) = self.exponents(l1);
        let (x2, d2) = self.exponents(l2);
        let p = self.p;
        let mut acc: Vec<(Vec<u32>, Vec<u32>, u32)> = vec![(Vec::new(), Vec::new(), 1)];
        for v in 0..self.n {
            let idx = (((x1[v] * p + d1[v]) * p + x2[v]) * p + d2[v]) as usize;
            let terms = &self.table[v][idx];
            let mut next = Vec::with_capacity(acc.len() * terms.len());
            for (xs, ds, c) in &acc {
                for &(xi, dj, c2) in terms {
                    let mut xs = xs.clone();
                    let mut ds = ds.clone();
                    xs.push(xi);
                    ds.push(dj);
                    next.push((xs, ds, f.mul_raw(*c, c2)));
                }
            }
            acc = next;
        }
        acc.into_iter().map(|(x, d, c)| (self.label(&x, &d), c)).collect()
    }

    /// Product of dense elements.
    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let mut out = vec![0u32; self.dim()];
        for (l1, &ca) in a.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (l2, &cb) in b.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let c = f.mul_raw(ca, cb);
                for (l, t) in self.mul_labels(l1, l2) {
                    out[l] = f.add_raw(out[l], f.mul_raw(c, t));
                }
            }
        }
        out
    }

    /// Image of a Weyl algebra element, reducing `x_i^p -> b_i`, `d_i^p -> omega_i`.
    pub fn reduce(&self, u: &WeylElement) -> Result<Vec<u32>> {
        if u.n() != self.n {
            return Err(Error::Dimension(format!("A_{} into a fiber with n = {}", u.n(), self.n)));
        }
        let f = &self.field;
        let mut out = vec![0u32; self.dim()];
        for (x, d, c) in u.terms() {
            let mut coef = embed(&c, f)?.value();
            for v in 0..self.n {
                coef = f.mul_raw(coef, f.pow_raw(self.b[v], (x[v] / self.p) as u64));
                coef = f.mul_raw(coef, f.pow_raw(self.omega[v], (d[v] / self.p) as u64));
            }
            let xr: Vec<u32> = x.iter().map(|&e| e % self.p).collect();
            let dr: Vec<u32> = d.iter().map(|&e| e % self.p).collect();
            let l = self.label(&xr, &dr);
            out[l] = f.add_raw(out[l], coef);
        }
        Ok(out)
    }

    /// Dense element of a single label.
    pub fn unit(&self, label: usize) -> Vec<u32> {
        let mut v = vec![0u32; self.dim()];
        v[label] = 1;
        v
    }
}

/// Weight-graded left quotient `D_zeta / sum_g D_zeta g` restricted to a set
/// of weights, for right-multiplying generators `g` of weight zero.
#[derive(Clone, Debug)]
pub struct Quotient {
    weights: Vec<usize>,
    blocks: Vec<Option<Block>>,
    basis: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Block {
    labels: Vec<usize>,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
    free: Vec<usize>,
    offset: usize,
}

impl Quotient {
    /// `weights` lists the weight indices kept; every generator must be of
    /// weight zero.
    pub fn build(alg: &FiberAlgebra, weights: &[usize], gens: &[Vec<u32>]) -> Result<Quotient> {
        let f = alg.field();
        for g in gens {
            if let Some(l) = (0..alg.dim()).find(|&l| g[l] != 0 && alg.weight(l) != 0) {
                return Err(Error::Internal(format!("generator has a term of nonzero weight at label {l}")));
            }
        }
        let mut weights = weights.to_vec();
        weights.sort_unstable();
        weights.dedup();
        let mut blocks: Vec<Option<Block>> = vec![None; alg.side()];
        let mut basis = Vec::new();
        for &w in &weights {
            let labels = alg.weight_block(w);
            let local = |l: usize| labels.binary_search(&l).ok();
            let mut data = Vec::with_capacity(labels.len() * gens.len() * labels.len());
            for &l in &labels {
                for g in gens {
                    let mut row = vec![0u32; labels.len()];
                    for (l2, &c) in g.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for (prod, t) in alg.mul_labels(l, l2) {
                            let pos = local(prod).ok_or_else(|| {
                                Error::Internal(format!("product label {prod} left weight block {w}"))
                            })?;
                            row[pos] = f.add_raw(row[pos], f.mul_raw(c, t));
                        }
                    }
                    data.extend(row);
                }
            }
            let nrows = data.len() / labels.len().max(1);
            let mut m = FieldMatrix::from_raw(f, nrows, labels.len(), data);
            let pivots = m.rref_in_place();
            let rows: Vec<Vec<u32>> = (0..pivots.len()).map(|i| m.row_raw(i).to_vec()).collect();
            let free: Vec<usize> = (0..labels.len()).filter(|j| !pivots.contains(j)).collect();
            let offset = basis.len();
            basis.extend(free.iter().map(|&j| labels[j]));
            blocks[w] = Some(Block {
                labels,
                rows,
                pivots,
                free,
                offset,
            });
        }
        Ok(Quotient { weights, blocks, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Representative labels of the basis, ordered by weight then label.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn weights(&self) -> &[usize] {
        &self.weights
    }

    /// Dimension contributed by each kept weight.
    pub fn block_dims(&self) -> Vec<(usize, usize)> {
        self.weights
            .iter()
            .map(|&w| (w, self.blocks[w].as_ref().map_or(0, |b| b.free.len())))
            .collect()
    }

    /// Coordinates of a weight-homogeneous sparse vector of weight `w`.
    fn project_block(&self, f: &Field, w: usize, terms: &[(usize, u32)], out: &mut [u32]) -> Result<()> {
        let block = self.blocks[w]
            .as_ref()
            .ok_or_else(|| Error::Internal(format!("weight {w} is not part of the quotient")))?;
        let mut v = vec![0u32; block.labels.len()];
        for &(l, c) in terms {
            let pos = block
                .labels
                .binary_search(&l)
                .map_err(|_| Error::Internal(format!("label {l} not of weight {w}")))?;
            v[pos] = f.add_raw(v[pos], c);
        }
        for (row, &pc) in block.rows.iter().zip(&block.pivots) {
            let factor = v[pc];
            if factor != 0 {
                f.axpy(&mut v, factor, row);
            }
        }
        for (i, &j) in block.free.iter().enumerate() {
            out[block.offset + i] = f.add_raw(out[block.offset + i], v[j]);
        }
        Ok(())
    }

    /// Matrix of left multiplication by the dense element `a` (columns are
    /// images of basis vectors).
    pub fn action(&self, alg: &FiberAlgebra, a: &[u32]) -> Result<FieldMatrix> {
        let f = alg.field();
        let d = self.dim();
        let mut m = FieldMatrix::zeros(f, d, d);
        let mut col = vec![0u32; d];
        for (j, &r) in self.basis.iter().enumerate() {
            col.iter_mut().for_each(|x| *x = 0);
            let mut by_weight: Vec<Vec<(usize, u32)>> = vec![Vec::new(); alg.side()];
            for (l, &c) in a.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (prod, t) in alg.mul_labels(l, r) {
                    by_weight[alg.weight(prod)].push((prod, f.mul_raw(c, t)));
                }
            }
            for (w, terms) in by_weight.iter().enumerate() {
                if !terms.is_empty() {
                    self.project_block(f, w, terms, &mut col)?;
                }
            }
            for (i, &v) in col.iter().enumerate() {
                m.set_raw(i, j, v);
            }
        }
        Ok(m)
    }

    /// Left multiplication by a single label, flattened column-major.
    pub(crate) fn label_action_flat(&self, alg: &FiberAlgebra, label: usize, out: &mut [u32]) -> Result<()> {
        let f = alg.field();
        let d = self.dim();
        out.iter_mut().for_each(|x| *x = 0);
        for (j, &r) in self.basis.iter().enumerate() {
            let prods = alg.mul_labels(label, r);
            if prods.is_empty() {
                continue;
            }
            let w = alg.weight(prods[0].0);
            self.project_block(f, w, &prods, &mut out[j * d..(j + 1) * d])?;
        }
        Ok(())
    }
}

/// `D_eta = D_zeta / sum_k D_zeta (E_k - c_k)` with its left `D_zeta` action.
#[derive(Clone, Debug)]
pub struct EtaModule {
    point: PointTriple,
    algebra: FiberAlgebra,
    quotient: Quotient,
    joint_kernel_dim: usize,
}

impl EtaModule {
    pub fn point(&self) -> &PointTriple {
        &self.point
    }

    pub fn algebra(&self) -> &FiberAlgebra {
        &self.algebra
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    /// Dimension of the joint kernel of `E_k - c_k` on `delta^xi`.
    pub fn joint_kernel_dim(&self) -> usize {
        self.joint_kernel_dim
    }

    /// Left action matrix of a Weyl algebra element on `D_eta`.
    pub fn action(&self, u: &WeylElement) -> Result<FieldMatrix> {
        let a = self.algebra.reduce(u)?;
        self.quotient.action(&self.algebra, &a)
    }

    /// Basis labels as `(I, J)` exponent pairs.
    pub fn basis_exponents(&self) -> Vec<(Vec<u32>, Vec<u32>)> {
        self.quotient.basis().iter().map(|&l| self.algebra.exponents(l)).collect()
    }
}

/// Dense `E_k - c_k` in `D_zeta`.
pub(crate) fn euler_shift(alg: &FiberAlgebra, k: usize, c: &FieldElement) -> Vec<u32> {
    let mut e = vec![0u32; alg.n()];
    e[k] = 1;
    let mut v = vec![0u32; alg.dim()];
    v[alg.label(&e, &e)] = 1;
    let zero = vec![0u32; alg.n()];
    let l0 = alg.label(&zero, &zero);
    v[l0] = alg.field().neg_raw(c.value());
    v
}

pub fn d_eta_build(pt: &PointTriple) -> Result<EtaModule> {
    let alg = FiberAlgebra::at_point(pt)?;
    let gens: Vec<Vec<u32>> = (0..pt.n()).map(|k| euler_shift(&alg, k, &pt.c()[k])).collect();
    let all: Vec<usize> = (0..alg.side()).collect();
    let quotient = Quotient::build(&alg, &all, &gens)?;

    let rep = delta_rep(pt)?;
    let f = pt.field();
    let mut parts = Vec::with_capacity(pt.n());
    for k in 0..pt.n() {
        let op = WeylElement::euler(f, pt.n(), k).sub(&WeylElement::scalar(&pt.c()[k], pt.n()))?;
        parts.push(represent(&op, &rep)?);
    }
    let (_, ker) = FieldMatrix::vstack(&parts)?.rank_kernel_raw();
    Ok(EtaModule {
        point: pt.clone(),
        algebra: alg,
        quotient,
        joint_kernel_dim: ker.len(),
    })
}

/// Machine-readable outcome of the point-level Azumaya check.
#[derive(Clone, Debug)]
pub struct AzumayaCertificate {
    pub point: PointTriple,
    pub dim_d_zeta: usize,
    pub dim_d_eta: usize,
    pub joint_kernel_dim: usize,
    pub action_rank: usize,
    pub d_eta_basis: Vec<(Vec<u32>, Vec<u32>)>,
}

impl AzumayaCertificate {
    pub fn expected_dim_d_eta(&self) -> usize {
        (self.point.p() as usize).pow(self.point.n() as u32)
    }

    pub fn pass(&self) -> bool {
        let q = self.expected_dim_d_eta();
        self.dim_d_eta == q && self.joint_kernel_dim == 1 && self.action_rank == q * q && self.dim_d_zeta == q * q
    }

    pub fn to_json(&self) -> serde_json::Value {
        let q = self.expected_dim_d_eta();
        json!({
            "point": serde_json::to_value(self.point.to_json()).unwrap(),
            "dims": {
                "d_zeta": self.dim_d_zeta,
                "d_eta": self.dim_d_eta,
                "expected_d_eta": q,
                "joint_kernel": self.joint_kernel_dim,
            },
            "ranks": { "action_map": self.action_rank, "expected": q * q },
            "d_eta_basis": self.d_eta_basis.iter().map(|(x, d)| json!({"x": x, "d": d})).collect::<Vec<_>>(),
            "pass": self.pass(),
        })
    }
}

/// Builds `D_eta` and the action map `D_zeta -> End(D_eta)`, and records its
/// rank. The map is bijective exactly when the rank is `p^{2n}`.
pub fn azumaya_point_check(pt: &PointTriple) -> Result<AzumayaCertificate> {
    let eta = d_eta_build(pt)?;
    let alg = eta.algebra();
    let q = eta.quotient();
    let d = q.dim();
    let mut data = vec![0u32; alg.dim() * d * d];
    for label in 0..alg.dim() {
        q.label_action_flat(alg, label, &mut data[label * d * d..(label + 1) * d * d])?;
    }
    let m = FieldMatrix::from_raw(alg.field(), alg.dim(), d * d, data);
    Ok(AzumayaCertificate {
        point: pt.clone(),
        dim_d_zeta: alg.dim(),
        dim_d_eta: d,
        joint_kernel_dim: eta.joint_kernel_dim(),
        action_rank: m.rank(),
        d_eta_basis: eta.basis_exponents(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::make_field;

    #[test]
    fn f2_example() {
        let f2 = make_field(2, 1).unwrap();
        let pt = PointTriple::over_base(&[f2.one()], &[f2.one()], None).unwrap();
        let eta = d_eta_build(&pt).unwrap();
        assert_eq!(eta.dim(), 2);
        assert_eq!(eta.joint_kernel_dim(), 1);
        let cert = azumaya_point_check(&pt).unwrap();
        assert_eq!(cert.action_rank, 4);
        assert!(cert.pass());
    }

    #[test]
    fn algebra_matches_weyl_product() {
        let f9 = make_field(3, 2).unwrap();
        let b = vec![f9.generator(), f9.from_int(2)];
        let w = vec![f9.from_int(1), &f9.generator() + &f9.one()];
        let alg = FiberAlgebra::new(&f9, &b, &w).unwrap();
        for l1 in (0..alg.dim()).step_by(7) {
            for l2 in (0..alg.dim()).step_by(5) {
                let (x1, d1) = alg.exponents(l1);
                let (x2, d2) = alg.exponents(l2);
                let u = WeylElement::monomial(&f9.one(), &x1, &d1).unwrap();
                let v = WeylElement::monomial(&f9.one(), &x2, &d2).unwrap();
                let expect = alg.reduce(&u.mul(&v).unwrap()).unwrap();
                let got = alg.mul(&alg.unit(l1), &alg.unit(l2));
                assert_eq!(got, expect);
            }
        }
    }

    #[test]
    fn zero_point_every_root_choice() {
        let f3 = make_field(3, 1).unwrap();
        for c0 in 0..3 {
            for c1 in 0..3 {
                let pt = PointTriple::over_base(&vec![f3.zero(); 2], &vec![f3.zero(); 2], Some(&[c0, c1])).unwrap();
                let eta = d_eta_build(&pt).unwrap();
                assert_eq!(eta.dim(), 9);
                assert_eq!(eta.joint_kernel_dim(), 1);
            }
        }
    }
}
