//! Brute-force lattice oracles: short vectors, isometry counts and
//! representation numbers N(S, T) = #{X : X^t S X = T}.

use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Q;
use crate::localform::HalfIntMat;

fn inverse_diagonal(b: &[Vec<i64>]) -> Result<Vec<Q>> {
    let n = b.len();
    let mut m: Vec<Vec<Q>> = (0..n)
        .map(|r| {
            let mut row: Vec<Q> = b[r].iter().map(|&x| Q::from_integer(x.into())).collect();
            row.extend((0..n).map(|c| Q::from_integer(((r == c) as i64).into())));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::Singular)?;
        m.swap(col, piv);
        let inv = Q::from_integer(1.into()) / &m[col][col];
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..2 * n {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
            }
        }
    }
    Ok((0..n).map(|i| m[i][n + i].clone()).collect())
}

/// All x with x^t B x = 2 norm for B = 2S, ordered lexicographically.
pub fn vectors_of_norm(s: &HalfIntMat, norm: i64, max_ops: u128) -> Result<Vec<Vec<i64>>> {
    if !s.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let b = s.twice();
    let n = b.len();
    // |x_i| <= sqrt(2 norm (B^{-1})_ii)
    let inv = inverse_diagonal(b)?;
    let bounds: Vec<i64> = inv
        .iter()
        .map(|d| {
            let v = (d * Q::from_integer((2 * norm).into())).floor().to_integer();
            v.to_i64().unwrap_or(i64::MAX).sqrt()
        })
        .collect();
    let total: u128 = bounds.iter().map(|&r| 2 * r as u128 + 1).product();
    if total > max_ops {
        return Err(Error::Budget { estimate: total, cap: max_ops });
    }
    let mut out = Vec::new();
    let mut x: Vec<i64> = bounds.iter().map(|r| -r).collect();
    loop {
        let mut val = 0i64;
        for i in 0..n {
            for j in 0..n {
                val += x[i] * b[i][j] * x[j];
            }
        }
        if val == 2 * norm {
            out.push(x.clone());
        }
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if x[k] < bounds[k] {
                x[k] += 1;
                break;
            }
            x[k] = -bounds[k];
        }
    }
}

fn pair(b: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let n = b.len();
    let mut s = 0;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            s += x[i] * b[i][j] * y[j];
        }
    }
    s
}

/// N(S, T): the number of integral X with X^t S X = T.
pub fn representation_count(s: &HalfIntMat, t: &HalfIntMat, max_ops: u128) -> Result<u64> {
    let bs = s.twice();
    let bt = t.twice();
    let n = bt.len();
    let mut cands = Vec::with_capacity(n);
    for i in 0..n {
        cands.push(vectors_of_norm(s, bt[i][i] / 2, max_ops)?);
    }
    let mut chosen: Vec<Vec<i64>> = Vec::with_capacity(n);
    fn go(
        bs: &[Vec<i64>],
        bt: &[Vec<i64>],
        cands: &[Vec<Vec<i64>>],
        chosen: &mut Vec<Vec<i64>>,
    ) -> u64 {
        let k = chosen.len();
        if k == cands.len() {
            return 1;
        }
        let mut total = 0;
        for v in &cands[k] {
            if (0..k).all(|j| pair(bs, &chosen[j], v) == bt[j][k]) {
                chosen.push(v.clone());
                total += go(bs, bt, cands, chosen);
                chosen.pop();
            }
        }
        total
    }
    Ok(go(bs, bt, &cands, &mut chosen))
}

/// |O(S)|, the number of integral isometries of a positive definite lattice.
pub fn automorphism_count(s: &HalfIntMat, max_ops: u128) -> Result<u64> {
    representation_count(s, s, max_ops)
}
