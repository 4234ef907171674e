use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds from `rows`; `cols` fixes the width when there are no rows.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<IntMatrix> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row of length {} in a {cols}-column matrix", r.len())));
            }
            data.extend(r.iter().map(|&v| BigInt::from(v)));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn new(rows: &[Vec<i64>]) -> IntMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMatrix::from_rows(rows, cols).expect("ragged rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(l, j);
                }
            }
        }
        Ok(out)
    }

    /// Columns selected by `idx`, in order.
    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (c, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + c] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            out.data[r * self.cols..(r + 1) * self.cols].clone_from_slice(self.row(i));
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(piv) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
                return Ok(BigInt::zero());
            };
            if piv != k {
                a.swap_rows(piv, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * prev)
    }

    /// Smith normal form: `(U, D, V)` with `U * self * V = D`, `D` diagonal
    /// with nonnegative entries `d_1 | d_2 | ...`, and `U`, `V` unimodular.
    pub fn smith_normal_form(&self) -> Result<(IntMatrix, IntMatrix, IntMatrix)> {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut u = IntMatrix::identity(r);
        let mut v = IntMatrix::identity(c);
        for t in 0..r.min(c) {
            loop {
                let mut best: Option<(usize, usize)> = None;
                for i in t..r {
                    for j in t..c {
                        let x = a.get(i, j);
                        if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((bi, bj)) = best else {
                    break;
                };
                a.swap_rows(t, bi);
                u.swap_rows(t, bi);
                a.swap_cols(t, bj);
                v.swap_cols(t, bj);
                let mut clean = true;
                for i in t + 1..r {
                    let q = a.get(i, t) / a.get(t, t);
                    if !q.is_zero() {
                        a.add_row(i, t, &-&q);
                        u.add_row(i, t, &-&q);
                    }
                    clean &= a.get(i, t).is_zero();
                }
                for j in t + 1..c {
                    let q = a.get(t, j) / a.get(t, t);
                    if !q.is_zero() {
                        a.add_col(j, t, &-&q);
                        v.add_col(j, t, &-&q);
                    }
                    clean &= a.get(t, j).is_zero();
                }
                if !clean {
                    continue;
                }
                let pivot = a.get(t, t).clone();
                let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
                match bad {
                    Some(i) => {
                        a.add_row(t, i, &BigInt::one());
                        u.add_row(t, i, &BigInt::one());
                    }
                    None => break,
                }
            }
            if a.get(t, t).is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }
        }
        for m in [&u, &v] {
            let d = m.det()?;
            if d.abs() != BigInt::one() {
                return Err(Error::Internal(format!("Smith transform has determinant {d}")));
            }
        }
        Ok((u, a, v))
    }

    /// Diagonal of the Smith normal form, including trailing zeros.
    pub fn elementary_divisors(&self) -> Result<Vec<BigInt>> {
        let (_, d, _) = self.smith_normal_form()?;
        Ok((0..self.rows.min(self.cols)).map(|i| d.get(i, i).clone()).collect())
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let Some(piv) = (rank..a.rows).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            a.swap_rows(rank, piv);
            for i in rank + 1..a.rows {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let (x, y) = (a.get(rank, col).clone(), a.get(i, col).clone());
                for j in 0..a.cols {
                    let v = a.get(i, j) * &x - a.get(rank, j) * &y;
                    a.set(i, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Row-style Hermite normal form with zero rows removed: positive
    /// pivots, entries above each pivot reduced into `[0, pivot)`.
    pub fn hermite_normal_form(&self) -> IntMatrix {
        let mut a = self.clone();
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            loop {
                let mut best: Option<usize> = None;
                for i in row..a.rows {
                    let x = a.get(i, col);
                    if !x.is_zero() && best.map_or(true, |b| x.abs() < a.get(b, col).abs()) {
                        best = Some(i);
                    }
                }
                let Some(b) = best else {
                    break;
                };
                a.swap_rows(row, b);
                let mut clean = true;
                for i in row + 1..a.rows {
                    let q = a.get(i, col).div_floor(a.get(row, col));
                    if !q.is_zero() {
                        a.add_row(i, row, &-q);
                    }
                    clean &= a.get(i, col).is_zero();
                }
                if clean {
                    break;
                }
            }
            if a.get(row, col).is_zero() {
                continue;
            }
            if a.get(row, col).is_negative() {
                a.negate_row(row);
            }
            for i in 0..row {
                let q = a.get(i, col).div_floor(a.get(row, col));
                if !q.is_zero() {
                    a.add_row(i, row, &-q);
                }
            }
            row += 1;
        }
        a.select_rows(&(0..row).collect::<Vec<_>>())
    }

    /// Basis of `{x in Z^cols : self * x = 0}`, as the rows of a matrix in
    /// Hermite normal form.
    pub fn integer_kernel(&self) -> Result<IntMatrix> {
        let (_, d, v) = self.smith_normal_form()?;
        let rank = (0..self.rows.min(self.cols))
            .take_while(|&i| !d.get(i, i).is_zero())
            .count();
        let free: Vec<usize> = (rank..self.cols).collect();
        let basis = v.select_cols(&free).transpose();
        if basis.rows == 0 {
            return Ok(IntMatrix::zeros(0, self.cols));
        }
        Ok(basis.hermite_normal_form())
    }

    /// Whether the rows extend to a basis of `Z^cols`: rank equal to the row
    /// count and every elementary divisor equal to 1.
    pub fn extends_to_z_basis(&self) -> bool {
        if self.rows > self.cols {
            return false;
        }
        if self.rows == 0 {
            return true;
        }
        match self.elementary_divisors() {
            Ok(d) => d.iter().all(|x| x.is_one()),
            Err(_) => false,
        }
    }

    /// Human-readable reason when [`IntMatrix::extends_to_z_basis`] fails.
    pub fn z_basis_diagnostic(&self) -> Option<String> {
        if self.rows > self.cols {
            return Some(format!("{} rows cannot be part of a basis of Z^{}", self.rows, self.cols));
        }
        let d = self.elementary_divisors().ok()?;
        if d.iter().all(|x| x.is_one()) {
            None
        } else {
            let ds: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            Some(format!("elementary divisors [{}]", ds.join(", ")))
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| {
                    serde_json::Value::Array(
                        self.row(i)
                            .iter()
                            .map(|v| match v.to_i64() {
                                Some(x) => serde_json::Value::from(x),
                                None => serde_json::Value::from(v.to_string()),
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}[{}]", if i > 0 { ", " } else { "" }, row.join(", "))?;
        }
        write!(f, "]")
    }
}
