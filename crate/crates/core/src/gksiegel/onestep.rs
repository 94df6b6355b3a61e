//! F^H for even g from F^{H'} by the one-step recursion at Y = sqrt q.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::datum::{egk_truncate, EgkDatum};
use super::siegelpoly::SiegelPoly;
use super::ternary::{ternary_f, ThirdSumLimit};
use crate::error::{Error, Result};
use crate::exactnum::{q, qpow, Q};
use crate::poly::QSqrt;

type Laurent = BTreeMap<i64, QSqrt>;

fn add_term(l: &mut Laurent, k: i64, v: QSqrt) {
    let e = l.entry(k).or_insert_with(QSqrt::zero);
    *e = e.add(&v);
}

/// F^H from H (even length, ξ = ±1) and F^{H'}.
pub fn onestep_from(h: &EgkDatum, fh1: &SiegelPoly, p: u64) -> Result<SiegelPoly> {
    let g = h.len();
    if g % 2 != 0 {
        return Err(Error::InvalidDatum("one-step recursion needs even length".into()));
    }
    let xi = h.last_eps();
    if xi == 0 {
        return Err(Error::InvalidDatum("ξ = 0: the character is ramified".into()));
    }
    let e = h.a.sum() as i64;
    debug_assert!(e % 2 == 0);
    let shift = -(e + 2) / 2;
    // A(W) = W^{-(e+2)/2} (1 - ξ q^{-1/2} W) F^{H'}(q^{(1-g)/2} W)
    let mut base: Laurent = BTreeMap::new();
    for (k, c) in fh1.coeffs().iter().enumerate() {
        let k = k as i64;
        let v = c.mul(&QSqrt::sqrt_pow(p, (1 - g as i64) * k), p);
        add_term(&mut base, k, v.clone());
        let w = v
            .mul(&QSqrt::sqrt_pow(p, -1), p)
            .scale(&q(-(xi as i64)));
        add_term(&mut base, k + 1, w);
    }
    // N(Z) = A(Z) - A(1/Z)
    let mut n: Laurent = BTreeMap::new();
    for (k, v) in &base {
        add_term(&mut n, k + shift, v.clone());
        add_term(&mut n, -(k + shift), v.scale(&q(-1)));
    }
    n.retain(|_, v| !v.is_zero());
    // 𝓕 = N / (Z^{-1} - Z): f_{j-1} = f_{j+1} - n_j from the top
    let mut f: Laurent = BTreeMap::new();
    if let Some((&top, _)) = n.iter().next_back() {
        let zero = QSqrt::zero();
        let get = |m: &Laurent, k: i64| m.get(&k).cloned().unwrap_or_else(|| zero.clone());
        let mut j = top;
        while j > -top {
            let v = get(&f, j + 1).sub(&get(&n, j));
            if !v.is_zero() {
                f.insert(j - 1, v);
            }
            j -= 1;
        }
        for k in -top..=top {
            let lhs = get(&f, k + 1).sub(&get(&f, k - 1));
            if lhs != get(&n, k) {
                return Err(Error::Inconsistent(format!(
                    "recursion for {h} does not divide by Z^-1 - Z"
                )));
            }
        }
    }
    // F(X) = (sX)^{e/2} 𝓕(sX), s = q^{(g+1)/2}
    let half = e / 2;
    let mut coeffs: Vec<Q> = Vec::new();
    for (&k, v) in &f {
        let deg = half + k;
        if deg < 0 {
            return Err(Error::Inconsistent(format!(
                "negative power X^{deg} in F for {h}"
            )));
        }
        let c = v.mul(&QSqrt::sqrt_pow(p, (g as i64 + 1) * deg), p);
        if !c.b.is_zero() {
            return Err(Error::Inconsistent(format!(
                "half-integral powers of q do not cancel for {h}"
            )));
        }
        let d = deg as usize;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, Q::zero());
        }
        coeffs[d] = c.a;
    }
    let out = SiegelPoly::from_rational(
        p,
        g,
        e as u32,
        &crate::poly::RatPoly::new(coeffs),
    );
    if !out.constant_is_one() || !out.is_integral() {
        return Err(Error::Inconsistent(format!(
            "F for {h} is not an integral polynomial with constant term 1"
        )));
    }
    Ok(out)
}

/// F^H for a quaternary datum via the ternary polynomial of H'.
pub fn quaternary_f_onestep(h: &EgkDatum, p: u64, limit: ThirdSumLimit) -> Result<SiegelPoly> {
    if h.len() != 4 {
        return Err(Error::InvalidDatum(format!(
            "quaternary datum expected, got length {}",
            h.len()
        )));
    }
    let h1 = egk_truncate(h)?;
    let f1 = ternary_f(&h1, p, limit)?;
    onestep_from(h, &f1, p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Theorem41Report {
    pub value_identity: bool,
    /// None when the derivative identity does not apply (η = +1).
    pub derivative_identity: Option<bool>,
    pub eta_inferred: i8,
}

/// Value and derivative identities at ξ q^{-g/2} as exact checks. η is not
/// part of the datum; it is -1 exactly when F^{H'}(ξ q^{-g/2}) = 0.
pub fn theorem41_check(h: &EgkDatum, p: u64, limit: ThirdSumLimit) -> Result<Theorem41Report> {
    let g = h.len() as i64;
    let xi = h.last_eps();
    if xi == 0 {
        return Err(Error::InvalidDatum("ξ = 0: the identities need a trivial conductor".into()));
    }
    let fh = quaternary_f_onestep(h, p, limit)?;
    let f1 = ternary_f(&egk_truncate(h)?, p, limit)?;
    let pq = q(p as i64);
    let e = h.a.sum() as i64;
    let x0 = q(xi as i64) * qpow(&pq, -g / 2);
    let qe = qpow(&pq, e / 2);
    let f1x0 = f1.eval(&x0)?;
    let value_identity = fh.eval(&x0)? == &qe * &f1x0;
    let eta_inferred = if f1x0.is_zero() { -1 } else { 1 };
    let derivative_identity = if eta_inferred == -1 {
        let lhs = &x0 * fh.deriv_eval(&x0)?;
        let x1 = q(xi as i64) * qpow(&pq, (2 - g) / 2);
        let rhs = f1.eval(&x1)? / (&pq - q(1)) - &qe * &x0 * f1.deriv_eval(&x0)?;
        Some(lhs == rhs)
    } else {
        None
    };
    Ok(Theorem41Report {
        value_identity,
        derivative_identity,
        eta_inferred,
    })
}
