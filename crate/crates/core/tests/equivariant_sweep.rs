mod common;

use azumaya_core::equivariant::{
    azumaya_hypertoric_check, build_nu_reduction, invariant_weights, kp_invariant_dims, point_lambda, ClosedOrbitMode,
};
use azumaya_core::fq::make_field;
use azumaya_core::hypertoric::{build_torus_data, HypertoricData};
use azumaya_core::linalg::IntMatrix;
use azumaya_core::sample::Sampler;
use proptest::prelude::*;

use common::invariant_label_count;

fn data(b: &[Vec<i64>], p: u32) -> HypertoricData {
    let f = make_field(p as u64, 1).unwrap();
    let torus = build_torus_data(&IntMatrix::new(b), b[0].len()).unwrap();
    let alpha = vec![1; b.len()];
    HypertoricData::new(torus, alpha, &f, vec![f.zero(); b.len()], None).unwrap()
}

const TORI: &[&[&[i64]]] = &[
    &[&[1, 1, 1]],
    &[&[1, 2, 0]],
    &[&[1, -1, 0]],
    &[&[1, 0, 1], &[0, 1, 1]],
    &[&[1, 1, 0], &[0, 1, 1]],
];

fn tori() -> Vec<Vec<Vec<i64>>> {
    TORI.iter().map(|b| b.iter().map(|r| r.to_vec()).collect()).collect()
}

#[test]
fn invariant_weights_brute_force() {
    for b in tori() {
        for p in [2u32, 3, 5] {
            let d = data(&b, p);
            let n = b[0].len();
            let got = invariant_weights(&d, p, n);
            let brute = (0..(p as usize).pow(n as u32))
                .filter(|&w| {
                    let digits: Vec<i64> =
                        (0..n).map(|v| (w / (p as usize).pow((n - 1 - v) as u32) % p as usize) as i64).collect();
                    b.iter().all(|r| r.iter().zip(&digits).map(|(a, x)| a * x).sum::<i64>().rem_euclid(p as i64) == 0)
                })
                .count();
            assert_eq!(got.len(), brute, "B={b:?} p={p}");
        }
    }
}

#[test]
fn invariant_dimensions_across_tori() {
    for b in tori() {
        for p in [2u32, 3] {
            let d = data(&b, p);
            let (n, h) = (b[0].len(), d.torus().h());
            let f = make_field(p as u64, 2).unwrap();
            let mut s = Sampler::new(31 * p as u64 + n as u64);
            for _ in 0..4 {
                let pt = s.split_point(&f, n).unwrap();
                let dims = kp_invariant_dims(&d, &pt).unwrap();
                let pu = p as usize;
                // Rank of B mod p may drop; the label count oracle still applies.
                assert_eq!(dims.zeta, invariant_label_count(&b, p, n), "B={b:?} p={p}");
                if dims.expected.0 == dims.zeta {
                    assert_eq!((dims.nu, dims.eta), (pu.pow(2 * h as u32), pu.pow(h as u32)), "B={b:?} p={p}");
                }
            }
        }
    }
}

#[test]
fn hypertoric_check_across_tori() {
    for b in tori() {
        for p in [2u32, 3] {
            let d = data(&b, p);
            if b.iter().flatten().any(|&x| x.rem_euclid(p as i64) == 0 && x != 0) {
                continue;
            }
            let n = b[0].len();
            let f = make_field(p as u64, 2).unwrap();
            let mut s = Sampler::new(17 + p as u64);
            for _ in 0..3 {
                let pt = s.split_point_nonzero(&f, n).unwrap();
                let cert = azumaya_hypertoric_check(&d, &pt, None, ClosedOrbitMode::Asserted).unwrap();
                assert!(cert.phi_acts_as_zero, "B={b:?} p={p}");
                assert_eq!(cert.rank, cert.expected_rank(), "B={b:?} p={p}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn nu_reduction_is_taken_at_b_c(seed in 0u64..10_000, p in prop::sample::select(vec![2u32, 3])) {
        let d = data(&[vec![1, 1]], p);
        let f = make_field(p as u64, 2).unwrap();
        let pt = Sampler::new(seed).split_point(&f, 2).unwrap();
        let nu = build_nu_reduction(&d, &pt, None).unwrap();
        prop_assert_eq!(nu.lambda().to_vec(), point_lambda(&d, &pt));
        prop_assert_eq!(nu.dim(), (p as usize).pow(2));
    }

    #[test]
    fn explicit_lambda_aligns_the_point(seed in 0u64..10_000) {
        let d = data(&[vec![1, 1]], 3);
        let f = make_field(3, 2).unwrap();
        let pt = Sampler::new(seed).split_point(&f, 2).unwrap();
        let shifted = vec![&point_lambda(&d, &pt)[0] + &f.one()];
        let nu = build_nu_reduction(&d, &pt, Some(&shifted)).unwrap();
        prop_assert_eq!(point_lambda(&d, nu.point()), shifted);
    }
}
