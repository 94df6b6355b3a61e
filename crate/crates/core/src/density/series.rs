//! Truncated Siegel series b(T, X) = sum over z in Sym_g(Q_p)/Sym_g(Z_p) of
//! psi(tr(Tz)) nu(z)^{-s}, X = p^{-s}.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::is_prime;
use crate::localform::HalfIntMat;

fn ord_capped(x: i64, p: i64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut x = x;
    let mut k = 0;
    while x % p == 0 && k < cap {
        x /= p;
        k += 1;
    }
    k
}

fn inv_mod(a: i64, m: i64) -> i64 {
    // extended Euclid; a is a unit mod m
    let (mut r0, mut r1) = (a.rem_euclid(m), m);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let qt = r0 / r1;
        (r0, r1) = (r1, r0 - qt * r1);
        (s0, s1) = (s1, s0 - qt * s1);
    }
    debug_assert_eq!(r0, 1);
    s0.rem_euclid(m)
}

/// Elementary divisor exponents of an integer matrix taken modulo p^cap,
/// each capped at cap.
pub fn smith_ords(mut a: Vec<Vec<i64>>, p: u64, cap: u32) -> Vec<u32> {
    let pi = p as i64;
    let md = pi.pow(cap);
    let n = a.len();
    for row in a.iter_mut() {
        for x in row.iter_mut() {
            *x = x.rem_euclid(md);
        }
    }
    let mut out = Vec::with_capacity(n);
    for r in 0..n {
        let mut best = (cap, r, r);
        for i in r..n {
            for j in r..n {
                let o = ord_capped(a[i][j], pi, cap);
                if o < best.0 {
                    best = (o, i, j);
                }
            }
        }
        let (d, bi, bj) = best;
        if d == cap {
            out.extend(std::iter::repeat(cap).take(n - r));
            break;
        }
        a.swap(r, bi);
        for row in a.iter_mut() {
            row.swap(r, bj);
        }
        let pd = pi.pow(d);
        let u = inv_mod(a[r][r] / pd, md);
        for i in r + 1..n {
            let f = ((a[i][r] / pd) as i128 * u as i128).rem_euclid(md as i128) as i64;
            if f != 0 {
                for j in r..n {
                    a[i][j] = (a[i][j] as i128 - f as i128 * a[r][j] as i128).rem_euclid(md as i128) as i64;
                }
            }
        }
        for j in r + 1..n {
            let f = ((a[r][j] / pd) as i128 * u as i128).rem_euclid(md as i128) as i64;
            if f != 0 {
                for i in r..n {
                    a[i][j] = (a[i][j] as i128 - f as i128 * a[i][r] as i128).rem_euclid(md as i128) as i64;
                }
            }
        }
        out.push(d);
    }
    out
}

/// Coefficients c_0..c_K of the Siegel series of T at p. The character sums
/// are exact: unit scaling of z permutes each fiber, so only the classes
/// tr(Tz) = 0 and tr(Tz) = p^{-1} (mod 1) contribute, with weights 1 and -1.
pub fn series_truncated(t: &HalfIntMat, p: u64, kk: u32, max_ops: u128) -> Result<Vec<BigInt>> {
    if !is_prime(p) {
        return Err(Error::BadPrime(p, "not a prime"));
    }
    let g = t.size();
    let slots = g * (g + 1) / 2;
    let md = (p as u128)
        .checked_pow(kk)
        .filter(|&m| m < 1 << 40)
        .ok_or(Error::Budget {
            estimate: u128::MAX,
            cap: max_ops,
        })? as i64;
    let total = (md as u128).checked_pow(slots as u32).unwrap_or(u128::MAX);
    if total > max_ops {
        return Err(Error::Budget {
            estimate: total,
            cap: max_ops,
        });
    }
    if kk == 0 {
        return Ok(vec![BigInt::from(1)]);
    }
    let b = t.twice();
    let mut weights = Vec::with_capacity(slots);
    let mut pos = Vec::with_capacity(slots);
    for i in 0..g {
        for j in i..g {
            weights.push(if i == j { b[i][i] / 2 } else { b[i][j] });
            pos.push((i, j));
        }
    }
    let hit = md / p as i64;
    let k_len = kk as usize + 1;
    // split the enumeration on the first slot for the worker pool
    let rest_total = (md as u128).pow(slots as u32 - 1) as u64;
    let counts: Vec<(Vec<i64>, Vec<i64>)> = (0..md)
        .into_par_iter()
        .map(|first| {
            let mut zero = vec![0i64; k_len];
            let mut unit = vec![0i64; k_len];
            let mut zz = vec![vec![0i64; g]; g];
            let mut vals = vec![0i64; slots];
            for idx in 0..rest_total {
                vals[0] = first;
                let mut r = idx as i64;
                for v in vals.iter_mut().skip(1) {
                    *v = r % md;
                    r /= md;
                }
                for (s, &(i, j)) in pos.iter().enumerate() {
                    zz[i][j] = vals[s];
                    zz[j][i] = vals[s];
                }
                let ords = smith_ords(zz.clone(), p, kk);
                let nu: u32 = ords.iter().map(|d| kk - d).sum();
                if nu > kk {
                    continue;
                }
                let tr: i128 = vals
                    .iter()
                    .zip(&weights)
                    .map(|(z, w)| *z as i128 * *w as i128)
                    .sum::<i128>()
                    .rem_euclid(md as i128);
                if tr == 0 {
                    zero[nu as usize] += 1;
                } else if tr == hit as i128 {
                    unit[nu as usize] += 1;
                }
            }
            (zero, unit)
        })
        .collect();
    let mut c = vec![BigInt::zero(); k_len];
    for (zero, unit) in counts {
        for k in 0..k_len {
            c[k] += zero[k] - unit[k];
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q, Q};
    use crate::gksiegel::gamma_factor;

    #[test]
    fn smith_examples() {
        assert_eq!(smith_ords(vec![vec![3, 0], vec![0, 9]], 3, 3), vec![1, 2]);
        assert_eq!(smith_ords(vec![vec![0, 0], vec![0, 0]], 3, 2), vec![2, 2]);
        assert_eq!(smith_ords(vec![vec![2, 1], vec![1, 2]], 3, 3), vec![0, 1]);
        assert_eq!(smith_ords(vec![vec![4, 2], vec![2, 4]], 2, 4), vec![1, 1]);
        assert_eq!(smith_ords(vec![vec![1]], 5, 1), vec![0]);
    }

    fn gamma_series(g: usize, p: u64, xi: i8, n: usize) -> Vec<Q> {
        let (num, den) = gamma_factor(g, p, xi);
        num.series_div(&den, n)
    }

    #[test]
    fn constant_term_is_one() {
        for p in [2u64, 3] {
            let t = HalfIntMat::diag(&[1, p as i64]);
            assert_eq!(series_truncated(&t, p, 2, 1 << 30).unwrap()[0], BigInt::from(1));
        }
    }

    #[test]
    fn unimodular_binary_is_gamma() {
        // T = diag[1,1]: xi = (-1/p)
        for (p, xi) in [(3u64, -1i8), (5, 1), (7, -1)] {
            let t = HalfIntMat::diag(&[1, 1]);
            let c = series_truncated(&t, p, 3, 1 << 30).unwrap();
            let expect = gamma_series(2, p, xi, 3);
            for k in 0..=3 {
                assert_eq!(Q::from_integer(c[k].clone()), expect[k], "p={p} k={k}");
            }
        }
        // the hyperbolic plane at p = 2
        let h = HalfIntMat::hyperbolic(1);
        let c = series_truncated(&h, 2, 4, 1 << 30).unwrap();
        let expect = gamma_series(2, 2, 1, 4);
        assert_eq!(c.iter().map(|x| Q::from_integer(x.clone())).collect::<Vec<_>>(), expect);
        assert_eq!(expect[0], q(1));
    }
}
