//! Congruence solution counts A_i(S, T) = #{X mod p^i : S[X] = T mod p^i}.
//!
//! Congruences are taken modulo p^i times the half-integral lattice: the
//! diagonal entries of S[X] - T as values of the quadratic form and the
//! off-diagonal entries of 2(S[X] - T) modulo p^i.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::is_prime;
use crate::localform::HalfIntMat;

fn modulus(p: u64, i: u32) -> Result<i64> {
    (p as i64)
        .checked_pow(i)
        .filter(|&m| m < 1 << 40)
        .ok_or(Error::Budget {
            estimate: u128::MAX,
            cap: 0,
        })
}

fn check_args(s: &HalfIntMat, t: &HalfIntMat, p: u64, i: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::BadPrime(p, "not a prime"));
    }
    if i == 0 {
        return Err(Error::InvalidArgument("congruence level i must be positive".into()));
    }
    if s.size() == 0 || t.size() == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    Ok(())
}

/// A_i(S, T), using the split fast path when S is a sum of hyperbolic planes
/// and T has at most two columns.
pub fn count_solutions(
    s: &HalfIntMat,
    t: &HalfIntMat,
    p: u64,
    i: u32,
    max_ops: u128,
) -> Result<BigInt> {
    check_args(s, t, p, i)?;
    let m = s.size();
    if m % 2 == 0 && t.size() <= 2 && *s == HalfIntMat::hyperbolic(m / 2) {
        count_split(m / 2, t, p, i, max_ops)
    } else {
        count_generic(s, t, p, i, max_ops)
    }
}

/// Column-by-column count for arbitrary S.
pub fn count_generic(
    s: &HalfIntMat,
    t: &HalfIntMat,
    p: u64,
    i: u32,
    max_ops: u128,
) -> Result<BigInt> {
    check_args(s, t, p, i)?;
    let m = s.size();
    let n = t.size();
    let md = modulus(p, i)?;
    let total = (md as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if total > max_ops {
        return Err(Error::Budget {
            estimate: total,
            cap: max_ops,
        });
    }
    let bs = s.twice();
    let bt = t.twice();
    let vectors: Vec<Vec<i64>> = (0..total as u64)
        .map(|idx| {
            let mut r = idx as i64;
            (0..m)
                .map(|_| {
                    let c = r % md;
                    r /= md;
                    c
                })
                .collect()
        })
        .collect();
    let cov = |x: &[i64]| -> Vec<i64> {
        (0..m)
            .map(|a| {
                let v: i128 = (0..m).map(|b| bs[a][b] as i128 * x[b] as i128).sum();
                v.rem_euclid(md as i128) as i64
            })
            .collect()
    };
    let norm = |x: &[i64]| -> i64 {
        // x^t (2S) x is even; halve before reducing
        let full: i128 = (0..m)
            .map(|a| {
                (0..m)
                    .map(|b| x[a] as i128 * bs[a][b] as i128 * x[b] as i128)
                    .sum::<i128>()
            })
            .sum();
        (full / 2).rem_euclid(md as i128) as i64
    };
    // per column: vectors of the right norm, with their covectors
    let mut lists: Vec<Vec<(Vec<i64>, Vec<i64>)>> = Vec::with_capacity(n);
    let mut by_norm: HashMap<i64, usize> = HashMap::new();
    for j in 0..n {
        let target = (bt[j][j] / 2).rem_euclid(md);
        if let Some(&k) = by_norm.get(&target) {
            let l = lists[k].clone();
            lists.push(l);
            continue;
        }
        let l: Vec<(Vec<i64>, Vec<i64>)> = vectors
            .par_iter()
            .filter_map(|x| {
                (norm(x) == target).then(|| (x.clone(), cov(x)))
            })
            .collect();
        by_norm.insert(target, j);
        lists.push(l);
    }
    // expected scan cost: nodes at level j-1 times |L_j|
    let mut est = total as f64;
    let mut nodes = 1f64;
    for (j, l) in lists.iter().enumerate() {
        est += nodes * l.len() as f64;
        nodes = nodes * l.len() as f64 / (md as f64).powi(j as i32);
    }
    if est > max_ops as f64 {
        return Err(Error::Budget {
            estimate: est as u128,
            cap: max_ops,
        });
    }
    // group first columns by covector: the completion count only depends on it
    let mut groups: HashMap<Vec<i64>, u64> = HashMap::new();
    for (_, c) in &lists[0] {
        *groups.entry(c.clone()).or_insert(0) += 1;
    }
    let mut keys: Vec<(Vec<i64>, u64)> = groups.into_iter().collect();
    keys.sort();
    let walker = Walker {
        lists: &lists,
        bt: &bt,
        md,
    };
    let total: BigInt = keys
        .par_iter()
        .map(|(c, mult)| {
            let mut memo = HashMap::new();
            BigInt::from(*mult) * walker.complete(&mut vec![c.clone()], &mut memo)
        })
        .reduce(BigInt::zero, |a, b| a + b);
    Ok(total)
}

struct Walker<'a> {
    lists: &'a [Vec<(Vec<i64>, Vec<i64>)>],
    bt: &'a [Vec<i64>],
    md: i64,
}

impl Walker<'_> {
    fn complete(&self, covs: &mut Vec<Vec<i64>>, memo: &mut HashMap<Vec<Vec<i64>>, BigInt>) -> BigInt {
        let j = covs.len();
        if j == self.lists.len() {
            return BigInt::from(1);
        }
        if let Some(v) = memo.get(covs.as_slice()) {
            return v.clone();
        }
        let mut acc = BigInt::zero();
        for (x, c) in &self.lists[j] {
            let ok = covs.iter().enumerate().all(|(k, ck)| {
                let v: i128 = ck.iter().zip(x).map(|(a, b)| *a as i128 * *b as i128).sum();
                (v - self.bt[k][j] as i128).rem_euclid(self.md as i128) == 0
            });
            if ok {
                covs.push(c.clone());
                acc += self.complete(covs, memo);
                covs.pop();
            }
        }
        memo.insert(covs.clone(), acc.clone());
        acc
    }
}

/// Norm counts for H^k modulo p^N: entry v is #{y mod p^N : Q(y) = v}.
pub(crate) fn split_norm_table(k: usize, p: u64, nn: u32) -> Vec<BigInt> {
    let md = (p as usize).pow(nn);
    let mut h = vec![0u64; md];
    for y in 0..md {
        for z in 0..md {
            h[(y * z) % md] += 1;
        }
    }
    let mut cur: Vec<BigInt> = vec![BigInt::zero(); md];
    cur[0] = BigInt::from(1);
    for _ in 0..k {
        let mut next = vec![BigInt::zero(); md];
        for (a, ca) in cur.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, hb) in h.iter().enumerate() {
                if *hb != 0 {
                    next[(a + b) % md] += ca * *hb;
                }
            }
        }
        cur = next;
    }
    cur
}

/// The table modulo p^N derived from the table modulo p^i, N <= i.
fn reduce_table(t: &[BigInt], p: u64, k: usize, i: u32, nn: u32) -> Vec<BigInt> {
    let small = (p as usize).pow(nn);
    let mut out = vec![BigInt::zero(); small];
    for (v, c) in t.iter().enumerate() {
        out[v % small] += c;
    }
    let lift = num_traits::pow(BigInt::from(p), 2 * k * (i - nn) as usize);
    out.into_iter().map(|c| c / &lift).collect()
}

/// Primitive y mod p^N in H^k with Q(y) = v mod p^N.
fn primitive_count(tables: &[Vec<BigInt>], p: u64, k: usize, nn: u32, v: i64) -> BigInt {
    let md = (p as i64).pow(nn);
    let v = v.rem_euclid(md);
    let all = tables[nn as usize][v as usize].clone();
    let nonprim = if nn == 1 {
        BigInt::from((v == 0) as u8)
    } else if v % (p as i64 * p as i64) != 0 && nn >= 2 {
        BigInt::zero()
    } else {
        let lower = (p as i64).pow(nn - 2);
        let w = (v / (p as i64 * p as i64)).rem_euclid(lower);
        &tables[(nn - 2) as usize][w as usize] * num_traits::pow(BigInt::from(p), 2 * k)
    };
    all - nonprim
}

/// A_i(H^k, T) for T with one or two columns, by orbits of first columns.
pub fn count_split(k: usize, t: &HalfIntMat, p: u64, i: u32, max_ops: u128) -> Result<BigInt> {
    let n = t.size();
    if k == 0 || n == 0 || n > 2 {
        return Err(Error::InvalidArgument(
            "split fast path needs k >= 1 and T with one or two columns".into(),
        ));
    }
    let md = modulus(p, i)?;
    let est = (k as u128 + 2) * (md as u128) * (md as u128);
    if est > max_ops {
        return Err(Error::Budget {
            estimate: est,
            cap: max_ops,
        });
    }
    let bt = t.twice();
    let t11 = (bt[0][0] / 2).rem_euclid(md);
    let top = split_norm_table(k, p, i);
    if n == 1 {
        return Ok(top[t11 as usize].clone());
    }
    let t22 = (bt[1][1] / 2).rem_euclid(md);
    let t12 = bt[0][1].rem_euclid(md);
    let tables: Vec<Vec<BigInt>> = (0..=i).map(|nn| reduce_table(&top, p, k, i, nn)).collect();
    let rest = if k == 1 {
        let mut r = vec![BigInt::zero(); md as usize];
        r[0] = BigInt::from(1);
        r
    } else {
        split_norm_table(k - 1, p, i)
    };
    let pi = p as i64;
    let mut total = BigInt::zero();
    // x_1 = 0
    if t11 == 0 && t12 == 0 {
        total += &top[t22 as usize];
    }
    for c in 0..i {
        let pc = pi.pow(c);
        if t12 % pc != 0 {
            continue;
        }
        let nn = i - c;
        let small = pi.pow(nn);
        // x_1 = p^c y, y primitive mod p^{i-c} with p^{2c} Q(y) = t11 mod p^i
        let vs: Vec<i64> = (0..small)
            .filter(|&v| ((pc as i128 * pc as i128 * v as i128 - t11 as i128) % md as i128) == 0)
            .collect();
        let terms: Vec<BigInt> = vs
            .par_iter()
            .map(|&v| {
                let mult = primitive_count(&tables, p, k, nn, v);
                if mult.is_zero() {
                    return BigInt::zero();
                }
                // representative p^c (1, v, 0, ...): 2B(x_1, x_2) = p^c (z_1 + v y_1)
                let mut acc = BigInt::zero();
                let base = t12 / pc;
                for y1 in 0..md {
                    let z0 = (base - v * y1).rem_euclid(small);
                    let mut z1 = z0;
                    while z1 < md {
                        let r = (t22 as i128 - y1 as i128 * z1 as i128).rem_euclid(md as i128);
                        acc += &rest[r as usize];
                        z1 += small;
                    }
                }
                mult * acc
            })
            .collect();
        for x in terms {
            total += x;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    const OPS: u128 = 1_000_000_000;

    #[test]
    fn unary_examples() {
        let one = HalfIntMat::diag(&[1]);
        assert_eq!(count_generic(&one, &one, 5, 1, OPS).unwrap(), BigInt::from(2));
        // x^2 = 1 mod 125 by direct enumeration
        let naive = (0..125i64).filter(|x| (x * x - 1) % 125 == 0).count();
        assert_eq!(naive, 2);
        assert_eq!(count_generic(&one, &one, 5, 3, OPS).unwrap(), BigInt::from(naive));
    }

    #[test]
    fn hyperbolic_plane_by_naive_loop() {
        let h = HalfIntMat::hyperbolic(1);
        for t in [1i64, 2] {
            let tt = HalfIntMat::diag(&[t]);
            let mut naive = 0;
            for y in 0..9 {
                for z in 0..9 {
                    if (y * z - t) % 9 == 0 {
                        naive += 1;
                    }
                }
            }
            assert_eq!(count_generic(&h, &tt, 3, 2, OPS).unwrap(), BigInt::from(naive));
            assert_eq!(count_split(1, &tt, 3, 2, OPS).unwrap(), BigInt::from(naive));
        }
    }

    #[test]
    fn split_fast_path_matches_generic() {
        let ts = [
            HalfIntMat::diag(&[1, 1]),
            HalfIntMat::diag(&[1, 3]),
            HalfIntMat::diag(&[3, 3]),
            HalfIntMat::diag(&[1, 9]),
            HalfIntMat::from_twice(vec![vec![2, 1], vec![1, 2]]).unwrap(),
            HalfIntMat::from_twice(vec![vec![2, 1], vec![1, 4]]).unwrap(),
            HalfIntMat::from_twice(vec![vec![0, 1], vec![1, 0]]).unwrap(),
            HalfIntMat::from_twice(vec![vec![4, 2], vec![2, 6]]).unwrap(),
        ];
        for (p, i, k) in [(3u64, 1u32, 1usize), (3, 2, 1), (3, 2, 2), (2, 2, 1), (2, 3, 2), (2, 2, 2), (5, 1, 2)] {
            let h = HalfIntMat::hyperbolic(k);
            for t in &ts {
                assert_eq!(
                    count_split(k, t, p, i, OPS).unwrap(),
                    count_generic(&h, t, p, i, OPS).unwrap(),
                    "{t} p={p} i={i} k={k}"
                );
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let s = HalfIntMat::diag(&[1, 1, 1, 1]);
        match count_generic(&s, &s, 7, 4, 1000) {
            Err(Error::Budget { estimate, cap }) => assert!(estimate > cap),
            r => panic!("expected a budget error, got {r:?}"),
        }
    }
}
