//! Dense exact linear algebra over finite fields and over the integers.

mod int;

use std::fmt;

use crate::error::{Error, Result};
use crate::fq::{Field, FieldElement, FieldPoly};

pub use int::IntMatrix;

/// Row-major dense matrix over a single [`Field`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FieldMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> FieldMatrix {
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> FieldMatrix {
        let mut m = FieldMatrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub(crate) fn from_raw(field: &Field, rows: usize, cols: usize, data: Vec<u32>) -> FieldMatrix {
        assert_eq!(data.len(), rows * cols);
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Builds from rows of elements; every entry must belong to `field`.
    pub fn from_rows(field: &Field, rows: &[Vec<FieldElement>]) -> Result<FieldMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for x in row {
                field.ensure_same(x.field())?;
                data.push(x.value());
            }
        }
        Ok(FieldMatrix::from_raw(field, rows.len(), cols, data))
    }

    /// Integer entries reduced into the prime subfield.
    pub fn from_ints(field: &Field, rows: &[Vec<i64>]) -> FieldMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| field.from_int(v).value())
            })
            .collect();
        FieldMatrix::from_raw(field, rows.len(), cols, data)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.element_raw(self.data[i * self.cols + j])
    }

    pub fn set(&mut self, i: usize, j: usize, x: &FieldElement) {
        assert!(self.field.same(x.field()), "entry from a different field");
        self.data[i * self.cols + j] = x.value();
    }

    pub(crate) fn get_raw(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub(crate) fn set_raw(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub(crate) fn row_raw(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row(&self, i: usize) -> Vec<FieldElement> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.field.ensure_same(&other.field)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = FieldMatrix::zeros(f, self.rows, other.cols);
        let n = other.cols;
        for i in 0..self.rows {
            let dst = &mut out.data[i * n..(i + 1) * n];
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                if a != 0 {
                    f.axpy(dst, f.neg_raw(a), other.row_raw(l));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("{} columns, vector of length {}", self.cols, v.len())));
        }
        for x in v {
            self.field.ensure_same(x.field())?;
        }
        let raw: Vec<u32> = v.iter().map(|x| x.value()).collect();
        Ok(self
            .mul_vec_raw(&raw)
            .into_iter()
            .map(|x| self.field.element_raw(x))
            .collect())
    }

    pub(crate) fn mul_vec_raw(&self, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row_raw(i)
                    .iter()
                    .zip(v)
                    .fold(0u32, |acc, (&a, &b)| f.add_raw(acc, f.mul_raw(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.zip_with(other, |f, a, b| f.add_raw(a, b))
    }

    pub fn sub(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.zip_with(other, |f, a, b| f.sub_raw(a, b))
    }

    fn zip_with(&self, other: &FieldMatrix, op: impl Fn(&Field, u32, u32) -> u32) -> Result<FieldMatrix> {
        self.field.ensure_same(&other.field)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shapes differ".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| op(&self.field, a, b))
            .collect();
        Ok(FieldMatrix::from_raw(&self.field, self.rows, self.cols, data))
    }

    pub fn scale(&self, c: &FieldElement) -> FieldMatrix {
        let mut out = self.clone();
        out.field.scale_slice(&mut out.data, c.value());
        out
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.field.ensure_same(&other.field)?;
        let f = &self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = FieldMatrix::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get_raw(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let v = f.mul_raw(a, other.get_raw(k, l));
                        out.set_raw(i * other.rows + k, j * other.cols + l, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[FieldMatrix]) -> Result<FieldMatrix> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Dimension("nothing to stack".into()))?;
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            first.field.ensure_same(&m.field)?;
            if m.cols != first.cols {
                return Err(Error::Dimension("column counts differ".into()));
            }
            data.extend_from_slice(&m.data);
            rows += m.rows;
        }
        Ok(FieldMatrix::from_raw(&first.field, rows, first.cols, data))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (FieldMatrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (r, c) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut row = 0;
        let mut pivot_row = vec![0u32; c];
        for col in 0..c {
            if row == r {
                break;
            }
            let Some(piv) = (row..r).find(|&i| self.data[i * c + col] != 0) else {
                continue;
            };
            if piv != row {
                for j in col..c {
                    self.data.swap(piv * c + j, row * c + j);
                }
            }
            let inv = f.inv_raw(self.data[row * c + col]).unwrap();
            f.scale_slice(&mut self.data[row * c + col..(row + 1) * c], inv);
            pivot_row[col..].copy_from_slice(&self.data[row * c + col..(row + 1) * c]);
            for i in 0..r {
                if i == row {
                    continue;
                }
                let factor = self.data[i * c + col];
                if factor != 0 {
                    f.axpy(&mut self.data[i * c + col..(i + 1) * c], factor, &pivot_row[col..]);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Rank and a kernel basis. Kernel vectors come from the reduced echelon
    /// form: each has a 1 at its own free column and 0 at the others.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<FieldElement>>) {
        let (rank, ker) = self.rank_kernel_raw();
        let ker = ker
            .into_iter()
            .map(|v| v.into_iter().map(|x| self.field.element_raw(x)).collect())
            .collect();
        (rank, ker)
    }

    pub(crate) fn rank_kernel_raw(&self) -> (usize, Vec<Vec<u32>>) {
        let (m, pivots) = self.rref();
        let f = &self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut ker = Vec::new();
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg_raw(m.get_raw(i, free));
            }
            ker.push(v);
        }
        (pivots.len(), ker)
    }

    /// A solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension("right-hand side length".into()));
        }
        let mut aug = FieldMatrix::zeros(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            self.field.ensure_same(b[i].field())?;
            aug.data[i * (self.cols + 1)..i * (self.cols + 1) + self.cols].copy_from_slice(self.row_raw(i));
            aug.data[i * (self.cols + 1) + self.cols] = b[i].value();
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(i, self.cols);
        }
        Ok(Some(x))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// `det(self - lambda I)`, through reduction to upper Hessenberg form.
    pub fn char_poly(&self) -> Result<FieldPoly> {
        self.require_square()?;
        let f = self.field.clone();
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(i) = (j + 1..n).find(|&i| h.get_raw(i, j) != 0) else {
                continue;
            };
            if i != j + 1 {
                for col in 0..n {
                    h.data.swap(i * n + col, (j + 1) * n + col);
                }
                for row in 0..n {
                    h.data.swap(row * n + i, row * n + j + 1);
                }
            }
            let inv = f.inv_raw(h.get_raw(j + 1, j)).unwrap();
            for r in j + 2..n {
                let u = f.mul_raw(h.get_raw(r, j), inv);
                if u == 0 {
                    continue;
                }
                for col in 0..n {
                    let v = f.sub_raw(h.get_raw(r, col), f.mul_raw(u, h.get_raw(j + 1, col)));
                    h.set_raw(r, col, v);
                }
                for row in 0..n {
                    let v = f.add_raw(h.get_raw(row, j + 1), f.mul_raw(u, h.get_raw(row, r)));
                    h.set_raw(row, j + 1, v);
                }
            }
        }
        // polys[m] = det(lambda I - H[..m, ..m])
        let lambda = FieldPoly::x(&f);
        let mut polys = vec![FieldPoly::one(&f)];
        for m in 0..n {
            let diag = FieldPoly::new(&f, vec![h.get_raw(m, m)]);
            let mut next = &(&lambda - &diag) * &polys[m];
            let mut prod = 1u32;
            for i in (0..m).rev() {
                prod = f.mul_raw(prod, h.get_raw(i + 1, i));
                if prod == 0 {
                    break;
                }
                let coef = f.mul_raw(h.get_raw(i, m), prod);
                if coef != 0 {
                    next = &next - &polys[i].scale(&f.element_raw(coef));
                }
            }
            polys.push(next);
        }
        let p = polys.pop().unwrap();
        Ok(if n % 2 == 1 { -&p } else { p })
    }

    /// Monic minimal polynomial: the lcm of the minimal polynomials of the
    /// standard basis vectors, each found by Krylov iteration.
    pub fn min_poly(&self) -> Result<FieldPoly> {
        self.require_square()?;
        let f = &self.field;
        let n = self.rows;
        let mut acc = FieldPoly::one(f);
        for seed in 0..n {
            let mut v = vec![0u32; n];
            v[seed] = 1;
            // (vector with leading 1 at pivot, polynomial combination)
            let mut basis: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new();
            for d in 0..=n {
                let mut w = v.clone();
                let mut combo = vec![0u32; d + 1];
                combo[d] = 1;
                for (piv, bv, bc) in &basis {
                    let factor = w[*piv];
                    if factor != 0 {
                        f.axpy(&mut w, factor, bv);
                        f.axpy(&mut combo[..bc.len()], factor, bc);
                    }
                }
                match w.iter().position(|&x| x != 0) {
                    None => {
                        acc = acc.lcm(&FieldPoly::new(f, combo));
                        break;
                    }
                    Some(piv) => {
                        let inv = f.inv_raw(w[piv]).unwrap();
                        f.scale_slice(&mut w, inv);
                        f.scale_slice(&mut combo, inv);
                        basis.push((piv, w, combo));
                    }
                }
                v = self.mul_vec_raw(&v);
            }
        }
        Ok(acc)
    }

    /// `poly(self)` by Horner's rule.
    pub fn eval_poly(&self, poly: &FieldPoly) -> Result<FieldMatrix> {
        self.require_square()?;
        self.field.ensure_same(poly.field())?;
        let n = self.rows;
        let mut acc = FieldMatrix::zeros(&self.field, n, n);
        for c in poly.coefficients().iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                let v = self.field.add_raw(acc.get_raw(i, i), c.value());
                acc.set_raw(i, i, v);
            }
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.to_rows()
                .iter()
                .map(|r| serde_json::Value::Array(r.iter().map(|x| serde_json::to_value(x.to_json()).unwrap()).collect()))
                .collect(),
        )
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::make_field;

    #[test]
    fn rank_kernel_examples() {
        let f2 = make_field(2, 1).unwrap();
        let m = FieldMatrix::from_ints(&f2, &[vec![0, 1], vec![0, 0]]);
        let (r, k) = m.rank_kernel();
        assert_eq!(r, 1);
        assert_eq!(k, vec![vec![f2.one(), f2.zero()]]);

        let f3 = make_field(3, 1).unwrap();
        let (r, k) = FieldMatrix::identity(&f3, 3).rank_kernel();
        assert_eq!((r, k.len()), (3, 0));

        let m = FieldMatrix::from_ints(&f3, &[vec![1, 1], vec![2, 2]]);
        let (r, k) = m.rank_kernel();
        assert_eq!(r, 1);
        assert_eq!(k, vec![vec![f3.from_int(-1), f3.one()]]);
    }

    #[test]
    fn char_poly_examples() {
        let f2 = make_field(2, 1).unwrap();
        let nil = FieldMatrix::from_ints(&f2, &[vec![0, 1], vec![0, 0]]);
        assert_eq!(nil.char_poly().unwrap(), FieldPoly::new(&f2, vec![0, 0, 1]));
        assert_eq!(nil.min_poly().unwrap(), FieldPoly::new(&f2, vec![0, 0, 1]));

        let f4 = make_field(2, 2).unwrap();
        let tau = f4.generator();
        let t1 = FieldMatrix::from_rows(
            &f4,
            &[vec![&f4.one() + &tau, f4.one()], vec![f4.one(), tau.clone()]],
        )
        .unwrap();
        let expect = FieldPoly::new(&f4, vec![0, 1, 1]);
        assert_eq!(t1.char_poly().unwrap(), expect);
        let mut block = FieldMatrix::zeros(&f4, 4, 4);
        for i in 0..2 {
            for j in 0..2 {
                block.set(i, j, &t1.get(i, j));
                block.set(i + 2, j + 2, &t1.get(i, j));
            }
        }
        assert_eq!(block.min_poly().unwrap(), expect);

        let f5 = make_field(5, 1).unwrap();
        let id = FieldMatrix::identity(&f5, 3);
        // (1 - lambda)^3 = 1 - 3l + 3l^2 - l^3
        assert_eq!(id.char_poly().unwrap(), FieldPoly::new(&f5, vec![1, 2, 3, 4]));
        assert_eq!(id.min_poly().unwrap(), FieldPoly::new(&f5, vec![4, 1]));
    }

    #[test]
    fn non_square_rejected() {
        let f2 = make_field(2, 1).unwrap();
        let m = FieldMatrix::zeros(&f2, 2, 3);
        assert!(matches!(m.char_poly(), Err(Error::NotSquare { .. })));
        assert!(matches!(m.min_poly(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f3 = make_field(3, 1).unwrap();
        let m = FieldMatrix::from_ints(&f3, &[vec![1, 1], vec![2, 2]]);
        let x = m.solve(&[f3.one(), f3.from_int(2)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![f3.one(), f3.from_int(2)]);
        assert!(m.solve(&[f3.one(), f3.one()]).unwrap().is_none());
    }
}
