//! Local polynomials F_q^T for ternary and quaternary targets.

use serde::Serialize;

use crate::density::series_f;
use crate::error::{Error, Result};
use crate::exactnum::{qf, qpow, ser_q, Q};
use crate::gksiegel::{egk_odd, egk_truncate, quaternary_f_onestep, ternary_f, SiegelPoly, ThirdSumLimit};
use crate::localform::{local_invariants, HalfIntMat};

/// Where a local polynomial came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FSource {
    /// e_q = 0, so F = 1
    Unit,
    /// closed formula from the extended GK datum
    Closed,
    /// truncated Siegel series
    Series,
    /// F^{T'}(q^{-2}) = q^{-e/2} F^T(q^{-2}) from the quaternary factor
    ValueRelation,
}

/// F_q(q^{-2}) together with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalFactor {
    pub q: u64,
    pub e: u32,
    pub source: FSource,
    #[serde(serialize_with = "ser_q")]
    pub value: Q,
}

/// F_q^T for T of size 3 or 4.
pub fn local_f(t: &HalfIntMat, q: u64, max_ops: u128) -> Result<(SiegelPoly, FSource)> {
    let g = t.size();
    if g != 3 && g != 4 {
        return Err(Error::InvalidArgument(format!("local factor for size {g}")));
    }
    let inv = local_invariants(t, q)?;
    if inv.e == 0 {
        return Ok((SiegelPoly::one(q, g), FSource::Unit));
    }
    if q != 2 {
        let h = egk_odd(t, q)?;
        let f = if g == 3 {
            ternary_f(&h, q, ThirdSumLimit::Display)?
        } else if inv.xi != 0 {
            quaternary_f_onestep(&h, q, ThirdSumLimit::Display)?
        } else {
            return Err(Error::unsupported("quaternary factor with ramified character", q));
        };
        return Ok((f, FSource::Closed));
    }
    match series_f(t, 2, max_ops) {
        Ok(f) => Ok((f, FSource::Series)),
        Err(Error::Budget { estimate, cap }) => Err(Error::unsupported(
            format!("2-adic factor with e_2 = {} (series needs {estimate} steps, budget {cap})", inv.e),
            2,
        )),
        Err(e) => Err(e),
    }
}

/// F_q^T(q^{-2}).
pub fn local_factor(t: &HalfIntMat, q: u64, max_ops: u128) -> Result<LocalFactor> {
    let (f, source) = local_f(t, q, max_ops)?;
    Ok(LocalFactor {
        q,
        e: f.e,
        source,
        value: f.eval(&qf(1, (q * q) as i64))?,
    })
}

/// The factor of a ternary companion of the quaternary T at q != p:
/// the truncated datum at odd q, the value relation at q = 2.
pub fn companion_factor(t: &HalfIntMat, q: u64, max_ops: u128) -> Result<LocalFactor> {
    let x = qf(1, (q * q) as i64);
    let inv = local_invariants(t, q)?;
    if inv.e == 0 {
        return Ok(LocalFactor { q, e: 0, source: FSource::Unit, value: Q::from_integer(1.into()) });
    }
    if q != 2 {
        let h = egk_truncate(&egk_odd(t, q)?)?;
        let f = ternary_f(&h, q, ThirdSumLimit::Display)?;
        return Ok(LocalFactor { q, e: f.e, source: FSource::Closed, value: f.eval(&x)? });
    }
    let quat = local_factor(t, 2, max_ops)?;
    if inv.e % 2 != 0 {
        return Err(Error::unsupported("companion factor with odd e_2", 2));
    }
    Ok(LocalFactor {
        q,
        e: inv.e,
        source: FSource::ValueRelation,
        value: quat.value * qpow(&Q::from_integer(2.into()), -(inv.e as i64 / 2)),
    })
}
