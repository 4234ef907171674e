use azumaya_core::fq::make_field;
use azumaya_core::linalg::{FieldMatrix, IntMatrix};
use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn cofactor_det(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Rows extend to a basis of `Z^c` iff the maximal minors have gcd 1.
fn minors_gcd_is_one(rows: &[Vec<i64>], cols: usize) -> bool {
    let r = rows.len();
    if r > cols {
        return false;
    }
    (0..cols)
        .combinations(r)
        .map(|sel| {
            let sub: Vec<Vec<i64>> = rows.iter().map(|row| sel.iter().map(|&c| row[c]).collect()).collect();
            cofactor_det(&sub)
        })
        .fold(0, gcd)
        == 1
}

fn int_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| (Just(c), prop::collection::vec(prop::collection::vec(-4i64..=4, c), r)))
}

fn field_matrix(p: u64, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max).prop_flat_map(move |n| prop::collection::vec(prop::collection::vec(0..p as i64, n), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cayley_hamilton_f2(rows in field_matrix(2, 30)) {
        let f = make_field(2, 1).unwrap();
        let m = FieldMatrix::from_ints(&f, &rows);
        prop_assert!(m.eval_poly(&m.char_poly().unwrap()).unwrap().is_zero());
    }

    #[test]
    fn cayley_hamilton_f3(rows in field_matrix(3, 30)) {
        let f = make_field(3, 1).unwrap();
        let m = FieldMatrix::from_ints(&f, &rows);
        let cp = m.char_poly().unwrap();
        prop_assert_eq!(cp.degree(), Some(rows.len()));
        prop_assert!(m.eval_poly(&cp).unwrap().is_zero());
    }

    #[test]
    fn cayley_hamilton_f5(rows in field_matrix(5, 30)) {
        let f = make_field(5, 1).unwrap();
        let m = FieldMatrix::from_ints(&f, &rows);
        let cp = m.char_poly().unwrap();
        let mp = m.min_poly().unwrap();
        prop_assert!(m.eval_poly(&cp).unwrap().is_zero());
        prop_assert!(m.eval_poly(&mp).unwrap().is_zero());
        prop_assert!(cp.rem(&mp).is_zero());
    }

    #[test]
    fn rank_plus_nullity(rows in field_matrix(7, 12)) {
        let f = make_field(7, 1).unwrap();
        let m = FieldMatrix::from_ints(&f, &rows);
        let (rank, kernel) = m.rank_kernel();
        prop_assert_eq!(rank + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn smith_round_trip((cols, rows) in int_matrix(4, 5)) {
        let a = IntMatrix::from_rows(&rows, cols).unwrap();
        let (u, d, v) = a.smith_normal_form().unwrap();
        prop_assert_eq!(u.mul(&a).unwrap().mul(&v).unwrap(), d.clone());
        prop_assert!(u.det().unwrap().abs() == BigInt::from(1));
        prop_assert!(v.det().unwrap().abs() == BigInt::from(1));
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j {
                    prop_assert!(d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn z_basis_matches_minors((cols, rows) in int_matrix(3, 4)) {
        let a = IntMatrix::from_rows(&rows, cols).unwrap();
        prop_assert_eq!(a.extends_to_z_basis(), minors_gcd_is_one(&rows, cols));
    }

    #[test]
    fn integer_kernel_is_saturated((cols, rows) in int_matrix(3, 5)) {
        let a = IntMatrix::from_rows(&rows, cols).unwrap();
        let k = a.integer_kernel().unwrap();
        prop_assert_eq!(k.rows() + a.rank(), cols);
        if k.rows() > 0 {
            prop_assert!(a.mul(&k.transpose()).unwrap().to_i64().unwrap().iter().flatten().all(|&x| x == 0));
            prop_assert!(minors_gcd_is_one(&k.to_i64().unwrap(), cols));
        }
    }

    #[test]
    fn hermite_is_row_equivalent((cols, rows) in int_matrix(3, 4)) {
        let a = IntMatrix::from_rows(&rows, cols).unwrap();
        let h = a.hermite_normal_form();
        prop_assert_eq!(h.rank(), a.rank());
        prop_assert_eq!(h.hermite_normal_form(), h.clone());
    }
}

#[test]
fn char_poly_of_companion() {
    let f = make_field(5, 1).unwrap();
    // Companion matrix of t^3 - 2t + 3.
    let m = FieldMatrix::from_ints(&f, &[vec![0, 0, -3], vec![1, 0, 2], vec![0, 1, 0]]);
    let cp = m.char_poly().unwrap().monic();
    let want: Vec<u32> = vec![3, 3, 0, 1];
    assert_eq!(cp.raw_coeffs(), &want[..]);
    assert_eq!(m.min_poly().unwrap().monic().raw_coeffs(), &want[..]);
}

#[test]
fn extension_field_matrices() {
    let f = make_field(5, 2).unwrap();
    let g = f.generator();
    let rows = vec![vec![g.clone(), f.one()], vec![f.zero(), &g * &g]];
    let m = FieldMatrix::from_rows(&f, &rows).unwrap();
    assert_eq!(m.rank(), 2);
    assert!(m.eval_poly(&m.char_poly().unwrap()).unwrap().is_zero());
}
