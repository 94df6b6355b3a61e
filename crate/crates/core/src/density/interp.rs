//! F_p^T from local densities against split forms and from the truncated series.

use num_traits::{One, Zero};

use super::series::series_truncated;
use super::local_density;
use crate::error::{Error, Result};
use crate::exactnum::{q, qi, qpow, Q};
use crate::gksiegel::{gamma_factor, SiegelPoly};
use crate::localform::{local_invariants, HalfIntMat};
use crate::poly::RatPoly;

/// γ^T(x) with the common factor of numerator and denominator cancelled.
pub fn gamma_value(g: usize, p: u64, xi: i8, x: &Q) -> Q {
    let (num, den) = gamma_factor(g, p, xi);
    let (quo, rem) = num.div_rem(&den);
    if rem.is_zero() {
        quo.eval(x)
    } else {
        num.eval(x) / den.eval(x)
    }
}

fn finish(p: u64, g: usize, e: u32, f: RatPoly, what: &str) -> Result<SiegelPoly> {
    let out = SiegelPoly::from_rational(p, g, e, &f);
    if !out.is_integral() || !out.constant_is_one() {
        return Err(Error::Inconsistent(format!(
            "{what}: F is not an integral polynomial with constant term 1"
        )));
    }
    if out.degree() > e as usize {
        return Err(Error::Inconsistent(format!(
            "{what}: degree {} exceeds e = {e}",
            out.degree()
        )));
    }
    Ok(out)
}

/// F from the samples β(T, p^{-k}) = α_p(H^k, T), k = g/2, g/2 + 1, ...,
/// skipping points where γ vanishes, then Lagrange interpolation.
pub fn interpolate_f(t: &HalfIntMat, p: u64, max_ops: u128) -> Result<SiegelPoly> {
    let g = t.size();
    if g % 2 != 0 {
        return Err(Error::InvalidArgument("interpolate_F needs even size".into()));
    }
    let inv = local_invariants(t, p)?;
    let e = inv.e;
    let pq = q(p as i64);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut k = g / 2;
    while xs.len() < e as usize + 1 {
        let x = qpow(&pq, -(k as i64));
        let gam = gamma_value(g, p, inv.xi, &x);
        if !gam.is_zero() {
            let s = HalfIntMat::hyperbolic(k);
            let beta = local_density(&s, t, p, max_ops)?;
            ys.push(beta / gam);
            xs.push(x);
        }
        k += 1;
    }
    let f = RatPoly::interpolate(&xs, &ys);
    finish(p, g, e, f, "interpolation")
}

/// Sign of the functional equation of 𝓕 when it is known without computing F:
/// +1 for even g with ξ != 0, η_p(T) for odd g.
fn known_fe_sign(g: usize, xi: i8, eta: i8) -> Option<i8> {
    if g % 2 == 0 {
        (xi != 0).then_some(1)
    } else {
        Some(eta)
    }
}

/// F from the truncated series b(T, X) / γ(X) with K = kk. When kk < e the
/// remaining coefficients come from the functional equation of 𝓕, which needs
/// kk >= e/2 and a known sign.
pub fn series_f_at(t: &HalfIntMat, p: u64, kk: u32, max_ops: u128) -> Result<SiegelPoly> {
    let g = t.size();
    let inv = local_invariants(t, p)?;
    let e = inv.e;
    let sign = known_fe_sign(g, inv.xi, inv.eta);
    if kk < e && (sign.is_none() || 2 * kk < e) {
        return Err(Error::InvalidArgument(format!(
            "series truncation K = {kk} cannot determine F of degree {e}"
        )));
    }
    let (num, den) = gamma_factor(g, p, inv.xi);
    let c = series_truncated(t, p, kk, max_ops)?;
    let b = RatPoly::new(c.iter().map(qi).collect());
    let f = RatPoly::new(b.series_div(&num, kk as usize)).mul(&den);
    let mut coeffs: Vec<Q> = (0..=kk as usize).map(|j| f.coeff(j)).collect();
    if coeffs.len() > e as usize + 1 && coeffs[e as usize + 1..].iter().any(|x| !x.is_zero()) {
        return Err(Error::Inconsistent(format!(
            "series: coefficients beyond e = {e} are nonzero"
        )));
    }
    coeffs.truncate(e as usize + 1);
    if kk < e {
        complete_by_symmetry(&mut coeffs, p, g, e, kk as usize, sign.unwrap())?;
    }
    finish(p, g, e, RatPoly::new(coeffs), "series")
}

/// F from the truncated series with the smallest K that determines it.
pub fn series_f(t: &HalfIntMat, p: u64, max_ops: u128) -> Result<SiegelPoly> {
    let g = t.size();
    let inv = local_invariants(t, p)?;
    let kk = match known_fe_sign(g, inv.xi, inv.eta) {
        Some(_) => inv.e.div_ceil(2),
        None => inv.e,
    };
    series_f_at(t, p, kk, max_ops)
}

/// c_{e-k} = sign c_k q^{(g+1)(e-2k)/2} for the known coefficients k <= known.
fn complete_by_symmetry(
    c: &mut Vec<Q>,
    p: u64,
    g: usize,
    e: u32,
    known: usize,
    sign: i8,
) -> Result<()> {
    let e = e as usize;
    c.resize(e + 1, Q::zero());
    let pq = q(p as i64);
    for k in 0..=known.min(e) {
        let ex = (g as i64 + 1) * (e as i64 - 2 * k as i64);
        if ex % 2 != 0 {
            return Err(Error::Inconsistent("odd exponent in the functional equation".into()));
        }
        let mirrored = &c[k] * qpow(&pq, ex / 2) * q(sign as i64);
        if e - k <= known {
            if c[e - k] != mirrored {
                return Err(Error::Inconsistent(format!(
                    "series coefficients violate the functional equation at X^{k}"
                )));
            }
        } else {
            c[e - k] = mirrored;
        }
    }
    if c[0] != Q::one() {
        return Err(Error::Inconsistent("series constant term is not 1".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::DEFAULT_MAX_OPS;

    #[test]
    fn unimodular_binary_is_one() {
        for p in [3u64, 5] {
            let t = HalfIntMat::diag(&[1, 1]);
            let f = interpolate_f(&t, p, DEFAULT_MAX_OPS).unwrap();
            assert_eq!(f, SiegelPoly::one(p, 2));
        }
    }

    #[test]
    fn diag_one_p_is_palindromic() {
        let t = HalfIntMat::diag(&[1, 3]);
        let f = interpolate_f(&t, 3, DEFAULT_MAX_OPS).unwrap();
        assert_eq!(f.degree() as u32, f.e);
        assert!(f.functional_equation_check());
    }

    #[test]
    fn interpolation_matches_series() {
        let t = HalfIntMat::diag(&[1, 9]);
        let a = interpolate_f(&t, 3, DEFAULT_MAX_OPS).unwrap();
        let b = series_f(&t, 3, DEFAULT_MAX_OPS).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.degree(), 2);
        assert!(a.functional_equation_check());
    }

    #[test]
    fn completion_matches_full_series() {
        // binary at 2 (sign +1 needs ξ != 0) and ternaries at 2 and 3 (sign η)
        let cases = [
            (HalfIntMat::diag(&[1, 3]), 2u64),
            (HalfIntMat::diag(&[1, 12]), 2),
            (HalfIntMat::diag(&[1, 1, 1]), 2),
            (HalfIntMat::diag(&[1, 1, 2]), 2),
            (HalfIntMat::diag(&[1, 3, 2]), 2),
            (HalfIntMat::diag(&[1, 3, 6]), 2),
            (HalfIntMat::from_twice(vec![vec![2, 1, 0], vec![1, 2, 0], vec![0, 0, 4]]).unwrap(), 2),
            (HalfIntMat::diag(&[1, 1, 3]), 3),
            (HalfIntMat::diag(&[1, 2, 3]), 3),
            (HalfIntMat::diag(&[1, 3, 3]), 3),
        ];
        for (t, p) in cases {
            let e = local_invariants(&t, p).unwrap().e;
            if e < 2 {
                continue;
            }
            let full = series_f_at(&t, p, e, DEFAULT_MAX_OPS).unwrap();
            let half = series_f_at(&t, p, e.div_ceil(2), DEFAULT_MAX_OPS).unwrap();
            assert_eq!(full, half, "{t} p={p}");
        }
    }

    #[test]
    fn ternary_series_matches_closed_form() {
        use crate::gksiegel::{egk_odd, ternary_f, ThirdSumLimit};
        for d in [[1, 1, 3], [1, 2, 3], [1, 3, 3], [2, 3, 3], [1, 1, 9], [1, 3, 9]] {
            let t = HalfIntMat::diag(&d);
            let closed = ternary_f(&egk_odd(&t, 3).unwrap(), 3, ThirdSumLimit::Display).unwrap();
            assert_eq!(series_f(&t, 3, DEFAULT_MAX_OPS).unwrap(), closed, "{t}");
        }
    }

    #[test]
    fn gamma_cancellation() {
        // ξ = 1: (1-X)(1-p^2X^2)/(1-pX) = (1-X)(1+pX)
        assert_eq!(gamma_value(2, 3, 1, &Q::new(1.into(), 3.into())), q(2) * Q::new(2.into(), 3.into()));
        assert!(gamma_value(2, 3, -1, &Q::new(1.into(), 3.into())).is_zero());
    }
}
