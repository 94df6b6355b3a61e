//! Sublattices of S_p of p-power index, one LLL-reduced representative for
//! each extended GK datum at p.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{q, qf, Q};
use crate::gksiegel::{egk_odd, EgkDatum};
use crate::localform::HalfIntMat;

fn gram_schmidt(b: &[Vec<i64>]) -> (Vec<Vec<Q>>, Vec<Q>) {
    let n = b.len();
    let mut mu = vec![vec![Q::zero(); n]; n];
    let mut bs = vec![Q::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut v = q(b[i][j]);
            for k in 0..j {
                v -= &mu[j][k] * &mu[i][k] * &bs[k];
            }
            mu[i][j] = v / &bs[j];
        }
        let mut v = q(b[i][i]);
        for k in 0..i {
            v -= &mu[i][k] * &mu[i][k] * &bs[k];
        }
        bs[i] = v;
    }
    (mu, bs)
}

fn round_q(x: &Q) -> i64 {
    let r = (x + qf(1, 2)).floor().to_integer();
    i64::try_from(r).expect("LLL coefficient overflow")
}

/// LLL reduction (δ = 3/4) of a positive definite form, returning the
/// reduced form and the unimodular change of basis (columns).
pub fn lll_reduce(t: &HalfIntMat) -> Result<(HalfIntMat, Vec<Vec<i64>>)> {
    if !t.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let n = t.size();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut cur = t.clone();
    let delta = qf(3, 4);
    let mut k = 1;
    let col_op = |u: &mut Vec<Vec<i64>>, dst: usize, src: usize, r: i64| {
        for row in u.iter_mut() {
            row[dst] -= r * row[src];
        }
    };
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(cur.twice());
            let r = round_q(&mu[k][j]);
            if r != 0 {
                col_op(&mut u, k, j, r);
                cur = t.transform(&u);
            }
        }
        let (mu, bs) = gram_schmidt(cur.twice());
        if bs[k] >= (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bs[k - 1] {
            k += 1;
        } else {
            for row in u.iter_mut() {
                row.swap(k, k - 1);
            }
            cur = t.transform(&u);
            k = (k - 1).max(1);
        }
    }
    Ok((cur, u))
}

/// The p^3 + p^2 + p + 1 sublattices of index p, as kernels of the nonzero
/// functionals on L/pL up to scaling.
pub fn index_p_sublattices(t: &HalfIntMat, p: u64) -> Vec<HalfIntMat> {
    let n = t.size();
    let pi = p as i64;
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        for idx in 0..pi.pow(free as u32) {
            let mut lambda = vec![0i64; n];
            lambda[lead] = 1;
            let mut r = idx;
            for c in lambda.iter_mut().skip(lead + 1) {
                *c = r % pi;
                r /= pi;
            }
            // kernel basis: p e_lead and e_i - λ_i e_lead
            let mut u = vec![vec![0i64; n]; n];
            for i in 0..n {
                if i == lead {
                    u[lead][i] = pi;
                } else {
                    u[i][i] = 1;
                    u[lead][i] = -lambda[i];
                }
            }
            out.push(t.transform(&u));
        }
    }
    out
}

/// Breadth-first search over index-p sublattices starting from `root`,
/// keeping the data with a_g <= max_a and one reduced form per datum.
pub fn sublattice_family(root: &HalfIntMat, p: u64, max_a: u32) -> Result<BTreeMap<EgkDatum, HalfIntMat>> {
    if p == 2 {
        return Err(Error::BadPrime(2, "the family is indexed by odd-p extended GK data"));
    }
    let mut seen: BTreeMap<EgkDatum, HalfIntMat> = BTreeMap::new();
    let h0 = egk_odd(root, p)?;
    let mut frontier = vec![lll_reduce(root)?.0];
    seen.insert(h0, frontier[0].clone());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for t in &frontier {
            for m in index_p_sublattices(t, p) {
                let h = egk_odd(&m, p)?;
                if *h.exps().last().unwrap() > max_a || seen.contains_key(&h) {
                    continue;
                }
                let (red, _) = lll_reduce(&m)?;
                seen.insert(h, red.clone());
                next.push(red);
            }
        }
        frontier = next;
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localform::diff_set;
    use crate::siegelmass::build_maximal_order;

    #[test]
    fn lll_preserves_the_form() {
        let t = HalfIntMat::from_twice(vec![
            vec![2, 7, 0, 0],
            vec![7, 26, 0, 0],
            vec![0, 0, 4, 11],
            vec![0, 0, 11, 32],
        ])
        .unwrap();
        let (red, u) = lll_reduce(&t).unwrap();
        assert_eq!(red.det2(), t.det2());
        assert_eq!(t.transform(&u), red);
        assert!(red.twice().iter().enumerate().all(|(i, r)| r[i] <= 8));
    }

    #[test]
    fn index_p_count() {
        let t = HalfIntMat::diag(&[1, 1, 1, 1]);
        let subs = index_p_sublattices(&t, 3);
        assert_eq!(subs.len(), 40);
        assert!(subs.iter().all(|m| m.det2() == t.det2() * 9));
    }

    #[test]
    fn family_keeps_the_genus() {
        let s = build_maximal_order(3).unwrap().gram;
        let fam = sublattice_family(&s, 3, 3).unwrap();
        assert!(fam.len() > 5);
        for (h, t) in &fam {
            assert_eq!(&egk_odd(t, 3).unwrap(), h);
            assert_eq!(diff_set(t).unwrap(), vec![3]);
        }
    }
}
