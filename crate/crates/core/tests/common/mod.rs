//! Brute-force oracles shared by the integration tests. None of them call
//! into the library's own algorithms.
#![allow(dead_code)]

use std::collections::BTreeMap;

use azumaya_core::fq::{Field, FieldElement};

/// One-variable Weyl algebra over `F_p`: `(i, j) -> coefficient of x^i d^j`.
pub type Weyl1 = BTreeMap<(u32, u32), u64>;

fn binomial(n: u32, r: u32, p: u64) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = (row[i - 1] + row[i]) % p;
        }
        row = next;
    }
    row.get(r as usize).copied().unwrap_or(0)
}

fn falling(c: u32, r: u32, p: u64) -> u64 {
    (0..r).fold(1u64, |acc, i| acc * ((c - i) as u64 % p) % p)
}

/// `x^a d^b . x^c d^e = sum_r C(b, r) c!/(c - r)! x^{a + c - r} d^{b + e - r}`.
pub fn weyl1_mul(u: &Weyl1, v: &Weyl1, p: u64) -> Weyl1 {
    let mut out = Weyl1::new();
    for (&(a, b), &s) in u {
        for (&(c, e), &t) in v {
            for r in 0..=b.min(c) {
                let k = binomial(b, r, p) * falling(c, r, p) % p * s % p * t % p;
                if k != 0 {
                    let slot = out.entry((a + c - r, b + e - r)).or_insert(0);
                    *slot = (*slot + k) % p;
                }
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

pub fn weyl1_sub(u: &Weyl1, v: &Weyl1, p: u64) -> Weyl1 {
    let mut out = u.clone();
    for (&k, &c) in v {
        let slot = out.entry(k).or_insert(0);
        *slot = (*slot + p - c) % p;
    }
    out.retain(|_, v| *v != 0);
    out
}

pub fn weyl1_pow(u: &Weyl1, e: u32, p: u64) -> Weyl1 {
    let mut acc = Weyl1::from([((0, 0), 1)]);
    for _ in 0..e {
        acc = weyl1_mul(&acc, u, p);
    }
    acc
}

/// `t^e` for a possibly negative exponent.
pub fn signed_pow(t: &FieldElement, e: i64) -> FieldElement {
    let base = if e < 0 { t.inv().expect("nonzero") } else { t.clone() };
    base.pow(e.unsigned_abs())
}

/// `#{t in (F_q^*)^k : prod_j t_j^{B_ji} = 1 for i in fixed}`.
pub fn stabilizer_count(field: &Field, b: &[Vec<i64>], fixed: &[usize]) -> usize {
    let units: Vec<FieldElement> = field.elements().filter(|x| !x.is_zero()).collect();
    let k = b.len();
    let mut count = 0;
    let mut idx = vec![0usize; k];
    loop {
        let ok = fixed.iter().all(|&i| {
            let mut prod = field.one();
            for j in 0..k {
                prod = &prod * &signed_pow(&units[idx[j]], b[j][i]);
            }
            prod.is_one()
        });
        count += usize::from(ok);
        let mut pos = 0;
        loop {
            if pos == k {
                return count;
            }
            idx[pos] += 1;
            if idx[pos] < units.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// A monomial `z^a w^b` of total degree `<= max_deg` with weight `m alpha`,
/// `1 <= m <= max_m`, not vanishing at `(z, w)`.
pub fn semi_invariant_monomial(
    b: &[Vec<i64>],
    alpha: &[i64],
    z: &[FieldElement],
    w: &[FieldElement],
    max_deg: u32,
    max_m: i64,
) -> Option<(i64, Vec<u32>, Vec<u32>)> {
    let n = z.len();
    let mut exps = vec![0u32; 2 * n];
    loop {
        let total: u32 = exps.iter().sum();
        if total <= max_deg {
            let weight: Vec<i64> = b
                .iter()
                .map(|row| (0..n).map(|i| row[i] * (exps[i] as i64 - exps[n + i] as i64)).sum())
                .collect();
            for m in 1..=max_m {
                if weight.iter().zip(alpha).all(|(x, a)| *x == m * a) {
                    let mut value = z[0].field().one();
                    for i in 0..n {
                        value = &value * &z[i].pow(exps[i] as u64);
                        value = &value * &w[i].pow(exps[n + i] as u64);
                    }
                    if !value.is_zero() {
                        return Some((m, exps[..n].to_vec(), exps[n..].to_vec()));
                    }
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == exps.len() {
                return None;
            }
            exps[pos] += 1;
            if exps[pos] <= max_deg {
                break;
            }
            exps[pos] = 0;
            pos += 1;
        }
    }
}

/// `#{(I, J) in [0, p)^{2n} : B (I - J) = 0 mod p}`.
pub fn invariant_label_count(b: &[Vec<i64>], p: u32, n: usize) -> usize {
    let p = p as i64;
    let total = (p as usize).pow(2 * n as u32);
    (0..total)
        .filter(|&idx| {
            let digits: Vec<i64> = (0..2 * n).map(|v| (idx / (p as usize).pow(v as u32)) as i64 % p).collect();
            b.iter()
                .all(|row| (0..n).map(|i| row[i] * (digits[i] - digits[n + i])).sum::<i64>().rem_euclid(p) == 0)
        })
        .count()
}

/// All tuples in `F^n` as a lexicographic odometer.
pub fn grid(field: &Field, n: usize) -> Vec<Vec<FieldElement>> {
    let elems: Vec<FieldElement> = field.elements().collect();
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                elems.iter().map(move |x| {
                    let mut v = v.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect();
    }
    out
}
