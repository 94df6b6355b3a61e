//! The sum of deg Z(B) over ternary B with a fixed diagonal.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::deg_z;
use crate::error::{Error, Result};
use crate::exactnum::{ser_q, ExactScalar, Q};
use crate::localform::{diff_set, HalfIntMat};
use crate::siegelmass::TernaryTarget;

/// deg Z(B), zero unless Diff(B) is a singleton.
pub fn deg_z_matrix(b: &HalfIntMat, max_ops: u128) -> Result<(Vec<u64>, ExactScalar)> {
    let diff = diff_set(b)?;
    if diff.len() != 1 {
        return Ok((diff, ExactScalar::zero()));
    }
    let target = TernaryTarget::from_matrix(b, diff[0], max_ops)?;
    Ok((diff, deg_z(&target)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleEntry {
    pub b: HalfIntMat,
    pub diff: Vec<u64>,
    pub deg_z: ExactScalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleTotal {
    pub p: u64,
    #[serde(serialize_with = "ser_q")]
    pub log_coefficient: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleReport {
    pub m: [i64; 3],
    pub table: Vec<TripleEntry>,
    pub totals: Vec<TripleTotal>,
}

/// All positive definite B with diagonal (m_1, m_2, m_3), in lexicographic
/// order of (2b_12, 2b_13, 2b_23), with deg Z(B) and the total per prime.
pub fn triple_intersection(m: [i64; 3], max_ops: u128) -> Result<TripleReport> {
    if m.iter().any(|&x| x < 1) {
        return Err(Error::InvalidArgument("m_i must be positive".into()));
    }
    let bound = |i: usize, j: usize| {
        let lim = 4 * m[i] * m[j];
        let r = (lim as f64).sqrt() as i64 + 1;
        (-r..=r).filter(move |x| x * x <= lim)
    };
    let mut cands = Vec::new();
    for x in bound(0, 1) {
        for y in bound(0, 2) {
            for z in bound(1, 2) {
                let b = HalfIntMat::from_twice(vec![
                    vec![2 * m[0], x, y],
                    vec![x, 2 * m[1], z],
                    vec![y, z, 2 * m[2]],
                ])?;
                if b.is_positive_definite() && !b.det2().is_zero() {
                    cands.push(b);
                }
            }
        }
    }
    let table: Vec<TripleEntry> = cands
        .into_par_iter()
        .map(|b| {
            let (diff, dz) = deg_z_matrix(&b, max_ops)?;
            Ok(TripleEntry { b, diff, deg_z: dz })
        })
        .collect::<Result<_>>()?;
    let mut totals: BTreeMap<u64, Q> = BTreeMap::new();
    for e in &table {
        if e.diff.len() == 1 {
            let p = e.diff[0];
            *totals.entry(p).or_insert_with(Q::zero) += e.deg_z.log_coefficient(p).unwrap_or_default();
        }
    }
    Ok(TripleReport {
        m,
        table,
        totals: totals.into_iter().map(|(p, c)| TripleTotal { p, log_coefficient: c }).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_diagonal() {
        let r = triple_intersection([1, 1, 1], 1 << 26).unwrap();
        assert!(!r.table.is_empty());
        for e in &r.table {
            if let Some(c) = e.deg_z.log_coefficient(e.diff.first().copied().unwrap_or(0)) {
                if !c.is_zero() {
                    assert!(c > Q::zero(), "{}", e.b);
                }
            }
        }
        let again = triple_intersection([1, 1, 1], 1 << 26).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn permutation_invariance() {
        let a = triple_intersection([1, 2, 2], 1 << 26).unwrap();
        let b = triple_intersection([2, 1, 2], 1 << 26).unwrap();
        assert_eq!(a.totals, b.totals);
    }
}
