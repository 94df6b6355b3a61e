//! The ternary Siegel series polynomial from its explicit double-sum expression.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::datum::EgkDatum;
use super::siegelpoly::SiegelPoly;
use crate::error::{Error, Result};
use crate::exactnum::{ipow, is_prime, q, qi, qpow, Q};
use crate::poly::RatPoly;

/// Upper limit of the third double sum: a_3 - a_2 + 2σ - 4 (`Display`) or
/// a_1 - a_2 + 2σ - 4 (`ClosedForm`, the exponent used by the simplified sum).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum ThirdSumLimit {
    #[default]
    Display,
    ClosedForm,
}

pub fn sigma(a1: u32, a2: u32) -> u32 {
    if (a1 + a2) % 2 == 1 {
        1
    } else {
        2
    }
}

fn check_ternary(h: &EgkDatum) -> Result<(u32, u32, u32, i8, i8)> {
    if h.len() != 3 {
        return Err(Error::InvalidDatum(format!(
            "ternary datum expected, got length {}",
            h.len()
        )));
    }
    let a = h.exps();
    Ok((a[0], a[1], a[2], h.eps[1], h.eps[2]))
}

/// Integer coefficients of G(X) = F^{H'}(p^{-2} X).
fn g_coeffs(h: &EgkDatum, p: u64, limit: ThirdSumLimit) -> Result<BTreeMap<i64, BigInt>> {
    let (a1, a2, a3, e2, e3) = check_ternary(h)?;
    let (a1, a2, a3) = (a1 as i64, a2 as i64, a3 as i64);
    let s = sigma(a1 as u32, a2 as u32) as i64;
    let top = (a1 + a2 - s) / 2;
    let pw = |k: i64| ipow(p, k as u32);
    let mut c: BTreeMap<i64, BigInt> = BTreeMap::new();
    let mut add = |k: i64, v: BigInt| {
        *c.entry(k).or_insert_with(BigInt::zero) += v;
    };
    for i in 0..=a1 {
        for j in 0..=(top - i) {
            add(i + 2 * j, pw(i + j));
        }
    }
    for i in 0..=a1 {
        for j in 0..=(top - i) {
            add(a3 + s + i + 2 * j, BigInt::from(e3) * pw(top - j));
        }
    }
    let hi = match limit {
        ThirdSumLimit::Display => a3,
        ThirdSumLimit::ClosedForm => a1,
    } - a2
        + 2 * s
        - 4;
    if e2 != 0 {
        let base = pw((a1 + a2 - s + 2) / 2);
        for i in 0..=a1 {
            for j in 0..=hi {
                let sign = if e2 == -1 && j % 2 == 1 { -1 } else { 1 };
                add(a2 - s + 2 + i + j, &base * sign);
            }
        }
    }
    c.retain(|_, v| !v.is_zero());
    Ok(c)
}

/// F^{H'}(X) for a ternary datum (a_1,a_2,a_3; 1,ε_2,ε_3) at an odd prime p.
pub fn ternary_f(h: &EgkDatum, p: u64, limit: ThirdSumLimit) -> Result<SiegelPoly> {
    if p == 2 || !is_prime(p) {
        return Err(Error::BadPrime(p, "ternary_F needs an odd prime"));
    }
    let c = g_coeffs(h, p, limit)?;
    let deg = c.keys().next_back().copied().unwrap_or(0).max(0) as usize;
    let mut f = vec![Q::zero(); deg + 1];
    for (k, v) in c {
        // F(X) = G(p^2 X)
        f[k as usize] = qi(&(v * ipow(p, 2 * k as u32)));
    }
    let e = h.a.sum();
    Ok(SiegelPoly::from_rational(p, 3, e, &RatPoly::new(f)))
}

/// The closed value of F^{H'}(p^{-1}) taken literally, by the
/// parity of a_1 - a_2.
pub fn lemma53_value(a1: u32, a2: u32, a3: u32, p: u64) -> Result<Q> {
    if !(a1 <= a2 && a2 <= a3) {
        return Err(Error::InvalidDatum(format!(
            "({a1},{a2},{a3}) is not nondecreasing"
        )));
    }
    let pq = q(p as i64);
    let pp = |k: i64| -> Q {
        assert!(k % 2 == 0, "half-integral exponent in closed form");
        qpow(&pq, k / 2)
    };
    let (a1, a2, a3) = (a1 as i64, a2 as i64, a3 as i64);
    let one = Q::one();
    let pa = qpow(&pq, a1 + 1);
    let lead = (&pa - &one) / ((&pq - &one) * (qpow(&pq, 3) - &one));
    let tail = (&pa + &one) / (&pq + &one);
    let geo = (&pa - &one) / (&pq - &one);
    let m = q(a1 + 1);
    Ok(if (a1 - a2) % 2 != 0 {
        lead * (pp(a1 + 3 * (a2 + 1)) - tail)
            - pp(a1 + a2 + 2 * a3 + 1) / (&pq - &one) * (m * pp(a1 + a2 + 1) - geo)
    } else {
        lead * (pp(a1 + 3 * a2) - tail)
            - pp(a1 + a2 + 2 * a3 + 2) / (&pq - &one) * (m * pp(a1 + a2) - geo)
            + pp(a1 + 3 * a2) * (&pa - &one) / (qpow(&pq, 2) - &one)
                * (qpow(&pq, a1 - a2 + 1) + &one)
    })
}

/// F^{H'}(p^{-1}) from the display reading, for the anisotropic sign pattern
/// ε_2 = 0 or -1, ε_3 = -1.
pub fn lemma53_value_corrected(a1: u32, a2: u32, a3: u32, p: u64) -> Result<Q> {
    let h = anisotropic_ternary(a1, a2, a3)?;
    ternary_f(&h, p, ThirdSumLimit::Display)?.eval(&Q::new(BigInt::one(), BigInt::from(p)))
}

/// (a_1,a_2,a_3; 1, ε_2, -1) with ε_2 = 0 for a_1 + a_2 odd and -1 otherwise.
pub fn anisotropic_ternary(a1: u32, a2: u32, a3: u32) -> Result<EgkDatum> {
    let e2 = if (a1 + a2) % 2 == 1 { 0 } else { -1 };
    EgkDatum::new(vec![a1, a2, a3], vec![1, e2, -1])
}
