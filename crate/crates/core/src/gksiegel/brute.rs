//! GK(T) by search over bases, for g <= 3.

use super::datum::GkDatum;
use crate::error::{Error, Result};
use crate::exactnum::{is_prime, ord_int};
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

fn bil(b: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let g = x.len();
    let mut s = 0;
    for i in 0..g {
        for j in 0..g {
            s += x[i] * b[i][j] * y[j];
        }
    }
    s
}

/// Row-reduces `v` against an echelon basis mod p; pushes it if independent.
fn extend_basis(basis: &mut Vec<(usize, Vec<i64>)>, v: &[i64], p: i64) -> bool {
    let mut v: Vec<i64> = v.iter().map(|x| x.rem_euclid(p)).collect();
    for (col, row) in basis.iter() {
        let f = v[*col];
        if f != 0 {
            for c in 0..v.len() {
                v[c] = (v[c] - f * row[c]).rem_euclid(p);
            }
        }
    }
    let Some(col) = v.iter().position(|&x| x != 0) else {
        return false;
    };
    let inv = (1..p).find(|&u| u * v[col] % p == 1).unwrap();
    for x in v.iter_mut() {
        *x = *x * inv % p;
    }
    basis.push((col, v));
    true
}

struct Feasibility<'a> {
    b: &'a [Vec<i64>],
    p: i64,
    a: &'a [u32],
    cands: Vec<Vec<i64>>,
    visits: u128,
    max_ops: u128,
}

impl Feasibility<'_> {
    fn dfs(&mut self, chosen: &mut Vec<usize>, basis: &mut Vec<(usize, Vec<i64>)>) -> Result<bool> {
        let i = chosen.len();
        if i == self.a.len() {
            return Ok(true);
        }
        let cap = *self.a.last().unwrap();
        for c in 0..self.cands.len() {
            self.visits += 1;
            if self.visits > self.max_ops {
                return Err(Error::Budget {
                    estimate: self.visits,
                    cap: self.max_ops,
                });
            }
            let x = &self.cands[c];
            if ord_capped(bil(self.b, x, x) / 2, self.p, cap) < self.a[i] {
                continue;
            }
            let pairs_ok = chosen.iter().enumerate().all(|(k, &y)| {
                let need = (self.a[k] + self.a[i]).div_ceil(2);
                ord_capped(bil(self.b, &self.cands[y], x), self.p, cap) >= need
            });
            if !pairs_ok {
                continue;
            }
            let mut nb = basis.clone();
            if !extend_basis(&mut nb, x, self.p) {
                continue;
            }
            chosen.push(c);
            let found = self.dfs(chosen, &mut nb)?;
            chosen.pop();
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Whether some basis x_1..x_g of Z_p^g has ord Q(x_i) >= a_i and
/// ord 2B(x_i, x_j) >= (a_i + a_j)/2. All conditions are congruences modulo
/// p^{max a}, so vectors are taken modulo that power.
fn feasible(b: &[Vec<i64>], p: i64, a: &[u32], budget: &mut u128) -> Result<bool> {
    let g = a.len();
    let m = p.pow((*a.last().unwrap()).max(1));
    let total = (m as u128).pow(g as u32);
    if total > *budget {
        return Err(Error::Budget {
            estimate: total,
            cap: *budget,
        });
    }
    // primitive vectors scaled so the first unit coordinate is 1
    let mut cands = Vec::new();
    let mut x = vec![0i64; g];
    for idx in 0..total as u64 {
        let mut r = idx as i64;
        for c in x.iter_mut() {
            *c = r % m;
            r /= m;
        }
        if x.iter().find(|&&c| c % p != 0) == Some(&1) {
            cands.push(x.clone());
        }
    }
    let mut s = Feasibility {
        b,
        p,
        a,
        cands,
        visits: total,
        max_ops: *budget,
    };
    let r = s.dfs(&mut Vec::new(), &mut Vec::new());
    *budget -= s.visits.min(*budget);
    r
}

fn nondecreasing_tuples(g: usize, first: u32, max_sum: u32) -> Vec<Vec<u32>> {
    fn rec(g: usize, prefix: &mut Vec<u32>, left: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == g {
            out.push(prefix.clone());
            return;
        }
        let lo = *prefix.last().unwrap();
        for v in lo..=left {
            prefix.push(v);
            rec(g, prefix, left - v, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if first <= max_sum {
        rec(g, &mut vec![first], max_sum - first, &mut out);
    }
    out
}

/// GK(T) as the lexicographic maximum of S(T[U]) over U in GL_g(Z_p). The
/// candidates are the nondecreasing tuples with a_1 = min ord of the entries
/// and sum at most ord det(2T), tried from the top. Any prime, g <= 3.
pub fn gk_bruteforce(t: &HalfIntMat, p: u64, max_ops: u128) -> Result<GkDatum> {
    let g = t.size();
    if g > 3 {
        return Err(Error::InvalidArgument(format!(
            "gk_bruteforce supports g <= 3, got {g}"
        )));
    }
    if !is_prime(p) {
        return Err(Error::BadPrime(p, "not a prime"));
    }
    let det = t.det2();
    if num_traits::Zero::is_zero(&det) {
        return Err(Error::Singular);
    }
    let d = ord_int(&det, p);
    let pi = p as i64;
    let b = t.twice();
    let mut n1 = u32::MAX;
    for i in 0..g {
        n1 = n1.min(ord_capped(b[i][i] / 2, pi, d + 1));
        for j in i + 1..g {
            n1 = n1.min(ord_capped(b[i][j], pi, d + 1));
        }
    }
    let mut tuples = nondecreasing_tuples(g, n1, d);
    tuples.sort_by(|x, y| y.cmp(x));
    let mut budget = max_ops;
    for a in tuples {
        if feasible(b, pi, &a, &mut budget)? {
            return GkDatum::new(a);
        }
    }
    Err(Error::Inconsistent(format!("no Gross-Keating tuple found for {t}")))
}
