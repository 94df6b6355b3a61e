//! Brute-force local densities and the Siegel series, used as ground truth.

mod count;
mod interp;
mod series;

pub use count::{count_generic, count_solutions, count_split};
pub use interp::{gamma_value, interpolate_f, series_f, series_f_at};
pub use series::{series_truncated, smith_ords};

use num_bigint::BigInt;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{fmt_q, ord_int, q, qi, qpow, Q};
use crate::localform::HalfIntMat;

pub const DEFAULT_MAX_OPS: u128 = 1_000_000_000;

/// Levels tried past the start before giving up on stabilization.
const MAX_EXTRA_LEVELS: u32 = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub s: HalfIntMat,
    pub t: HalfIntMat,
    pub p: u64,
    pub counts: Vec<(u32, BigInt)>,
    pub normalized: Vec<Q>,
    pub stable: bool,
}

impl DensityReport {
    pub fn value(&self) -> Result<Q> {
        match (self.stable, self.normalized.last()) {
            (true, Some(v)) => Ok(v.clone()),
            _ => Err(Error::Unstable(self.counts.last().map_or(0, |c| c.0))),
        }
    }
}

impl Serialize for DensityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let counts: Vec<(u32, String)> = self
            .counts
            .iter()
            .map(|(i, c)| (*i, c.to_string()))
            .collect();
        let normalized: Vec<String> = self.normalized.iter().map(fmt_q).collect();
        let mut st = s.serialize_struct("DensityReport", 6)?;
        st.serialize_field("S", &self.s)?;
        st.serialize_field("T", &self.t)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("counts", &counts)?;
        st.serialize_field("normalized", &normalized)?;
        st.serialize_field("stable", &self.stable)?;
        st.end()
    }
}

/// p^{i(n(n+1)/2 - mn)} A_i.
pub fn normalize(count: &BigInt, p: u64, i: u32, m: usize, n: usize) -> Q {
    let ex = i as i64 * (n as i64 * (n as i64 + 1) / 2 - (m * n) as i64);
    qi(count) * qpow(&q(p as i64), ex)
}

/// Counts A_i for i = ord det(2T) + 1, ... until two consecutive normalized
/// values agree.
pub fn density_report(s: &HalfIntMat, t: &HalfIntMat, p: u64, max_ops: u128) -> Result<DensityReport> {
    if s.det2() == BigInt::from(0) || t.det2() == BigInt::from(0) {
        return Err(Error::Singular);
    }
    let start = ord_int(&t.det2(), p) + 1;
    let mut rep = DensityReport {
        s: s.clone(),
        t: t.clone(),
        p,
        counts: Vec::new(),
        normalized: Vec::new(),
        stable: false,
    };
    for i in start..=start + MAX_EXTRA_LEVELS {
        let c = count_solutions(s, t, p, i, max_ops)?;
        let v = normalize(&c, p, i, s.size(), t.size());
        rep.counts.push((i, c));
        let done = rep.normalized.last() == Some(&v);
        rep.normalized.push(v);
        if done {
            rep.stable = true;
            break;
        }
    }
    Ok(rep)
}

/// α_p(S, T).
pub fn local_density(s: &HalfIntMat, t: &HalfIntMat, p: u64, max_ops: u128) -> Result<Q> {
    density_report(s, t, p, max_ops)?.value()
}
