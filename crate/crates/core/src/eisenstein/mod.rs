//! Fourier coefficients C_4(T) of the derivative of the Siegel Eisenstein
//! series, the arithmetic degrees deg Z and the identities relating them.

mod cor52;
mod triple;

pub use cor52::{admissible_data, cor52_bounds, cor52_datum, Cor52Report};
pub use triple::{deg_z_matrix, triple_intersection, TripleEntry, TripleReport};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{
    fundamental_discriminant, half_power, l_one, q, qf, qpow, zeta_negative_odd, ExactScalar, Q,
};
use crate::gksiegel::{egk_odd, egk_truncate, ternary_f, EgkDatum, ThirdSumLimit};
use crate::localform::{chi_trivial_global, diff_set, local_invariants, HalfIntMat};
use crate::siegelmass::{
    local_f, local_factor, rep_average, rep_average_ternary, TernaryTarget,
};

/// -2^{(g+2)/2} / (ζ(1 - g/2) prod_{i=1}^{(g-2)/2} ζ(1 - 2i)).
pub fn prop51_prefactor(g: usize) -> Result<Q> {
    if g == 0 || g % 4 != 0 {
        return Err(Error::InvalidArgument(format!("g = {g} is not a positive multiple of 4")));
    }
    let mut den = zeta_negative_odd((g / 4) as u32);
    for i in 1..=(g as u32 - 2) / 2 {
        den *= zeta_negative_odd(i);
    }
    Ok(-qpow(&q(2), (g as i64 + 2) / 2) / den)
}

/// -2^8 3^2: C_4(T) divided by this is compared with deg Z(T').
pub fn thm12_normalizer() -> Q {
    q(-2304)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum C4Case {
    ChiTrivialSingleton,
    ChiTrivialDegenerate,
    ChiNontrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedFactor {
    pub name: String,
    pub value: ExactScalar,
}

fn named(name: impl Into<String>, value: ExactScalar) -> NamedFactor {
    NamedFactor { name: name.into(), value }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientReport {
    pub t: HalfIntMat,
    pub case: C4Case,
    pub diff: Vec<u64>,
    pub c4: ExactScalar,
    pub factors: Vec<NamedFactor>,
    pub companion: Option<EgkDatum>,
    pub deg_z: Option<ExactScalar>,
    pub correction: Option<ExactScalar>,
    pub identity: Option<bool>,
}

/// Primes dividing det(2T) together with 2.
fn primes_of(t: &HalfIntMat) -> Vec<u64> {
    let mut ps = crate::exactnum::prime_divisors(&t.det2());
    if !ps.contains(&2) {
        ps.insert(0, 2);
    }
    ps
}

fn check_quaternary(t: &HalfIntMat) -> Result<()> {
    if t.size() != 4 {
        return Err(Error::InvalidArgument(format!("size 4 expected, got {}", t.size())));
    }
    if !t.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(())
}

/// C_4(T) by the three cases of the Euler product formula.
pub fn c4(t: &HalfIntMat, max_ops: u128) -> Result<CoefficientReport> {
    check_quaternary(t)?;
    let diff = diff_set(t)?;
    let pre = prop51_prefactor(4)?;
    let mut rep = CoefficientReport {
        t: t.clone(),
        case: C4Case::ChiTrivialDegenerate,
        diff: diff.clone(),
        c4: ExactScalar::zero(),
        factors: Vec::new(),
        companion: None,
        deg_z: None,
        correction: None,
        identity: None,
    };
    if chi_trivial_global(t) {
        if diff.len() != 1 {
            return Ok(rep);
        }
        let p = diff[0];
        rep.case = C4Case::ChiTrivialSingleton;
        let e = local_invariants(t, p)?.e as i64;
        let (fp, _) = local_f(t, p, max_ops)?;
        rep.factors.push(named("prefactor", ExactScalar::rational(pre)));
        rep.factors.push(named(format!("{p}^(-(4+e)/2)"), ExactScalar::rational(qpow(&q(p as i64), -(4 + e) / 2))));
        rep.factors.push(named(format!("log {p}"), ExactScalar::log_prime(p)));
        rep.factors.push(named(
            format!("F_{p}'({p}^-2)"),
            ExactScalar::rational(fp.deriv_eval(&qf(1, (p * p) as i64))?),
        ));
        for l in primes_of(t) {
            if l != p {
                let f = local_factor(t, l, max_ops)?;
                let v = qpow(&q(l as i64), -(f.e as i64) / 2) * &f.value;
                rep.factors.push(named(format!("{l}^(-e/2) F_{l}({l}^-2)"), ExactScalar::rational(v)));
            }
        }
    } else {
        rep.case = C4Case::ChiNontrivial;
        let d = fundamental_discriminant(&t.d_t());
        let d: u64 = d.try_into().map_err(|_| Error::InvalidArgument("discriminant out of range".into()))?;
        rep.factors.push(named("prefactor", ExactScalar::rational(pre)));
        rep.factors.push(named(format!("L(1, chi_{d})"), l_one(d)?));
        for l in primes_of(t) {
            let inv = local_invariants(t, l)?;
            let f = local_factor(t, l, max_ops)?;
            let v = qpow(&q(l as i64), -(inv.e as i64) / 2) * &f.value;
            rep.factors.push(named(format!("{l}^(-e/2) F_{l}({l}^-2)"), ExactScalar::rational(v)));
        }
    }
    rep.c4 = rep.factors.iter().fold(ExactScalar::one(), |acc, f| acc.mul(&f.value));
    Ok(rep)
}

fn single_diff(t: &HalfIntMat) -> Result<u64> {
    let diff = diff_set(t)?;
    if diff.len() != 1 {
        return Err(Error::InvalidArgument(format!("Diff(T) = {diff:?} is not a singleton")));
    }
    if !chi_trivial_global(t) {
        return Err(Error::InvalidArgument("χ_T is not trivial".into()));
    }
    Ok(diff[0])
}

/// 2^6 3^2 (p^{-2} F^{H'}'(p^{-2}) - F^{H'}(p^{-1}) / (sqrt(p)^e (p-1))) log p R(O_p, T).
pub fn thm51_value(t: &HalfIntMat, p: u64, max_ops: u128) -> Result<ExactScalar> {
    check_quaternary(t)?;
    if p == 2 {
        return Err(Error::BadPrime(2, "the ternary polynomial uses odd-p Jordan splittings"));
    }
    if single_diff(t)? != p {
        return Err(Error::InvalidArgument(format!("Diff(T) is not {{{p}}}")));
    }
    let h1 = egk_truncate(&egk_odd(t, p)?)?;
    let f = ternary_f(&h1, p, ThirdSumLimit::Display)?;
    let e = local_invariants(t, p)?.e as i64;
    let pq = q(p as i64);
    let x = qf(1, (p * p) as i64);
    let bracket = &x * f.deriv_eval(&x)? - f.eval(&qf(1, p as i64))? / (qpow(&pq, e / 2) * (&pq - q(1)));
    let r = rep_average(t, p, max_ops)?;
    Ok(ExactScalar::log_prime(p).scale(&(q(576) * bracket * r)))
}

/// deg Z(T') = -(log p)/(2p^2) F_p^{T'}'(p^{-2}) R(O_p, T').
pub fn deg_z(target: &TernaryTarget) -> Result<ExactScalar> {
    let p = target.p;
    let x = qf(1, (p * p) as i64);
    let d = target.f_p.deriv_eval(&x)?;
    let r = rep_average_ternary(target)?;
    Ok(ExactScalar::log_prime(p).scale(&(-d * r / q(2 * (p * p) as i64))))
}

/// F^{T'}(p^{-1}) / (2 sqrt(p)^e (p-1)) log p R(O_p, T').
fn thm12_correction(target: &TernaryTarget, e: u32) -> Result<ExactScalar> {
    let p = target.p;
    let f = target.f_p.eval(&qf(1, p as i64))?;
    let r = rep_average_ternary(target)?;
    let denom = half_power(p, e as i64).scale(&q(2 * (p as i64 - 1)));
    ExactScalar::log_prime(p).scale(&(f * r)).div(&denom)
}

/// C_4(T)/(-2^8 3^2) = deg Z(T') + correction, checked exactly.
pub fn thm12_decompose(t: &HalfIntMat, max_ops: u128) -> Result<CoefficientReport> {
    let p = single_diff(t)?;
    let mut rep = c4(t, max_ops)?;
    let companion = TernaryTarget::companion(t, p, max_ops)?;
    let e = local_invariants(t, p)?.e;
    let dz = deg_z(&companion)?;
    let corr = thm12_correction(&companion, e)?;
    let lhs = rep.c4.scale(&(Q::one() / thm12_normalizer()));
    let rhs = dz.add(&corr)?;
    rep.identity = Some(lhs == rhs);
    rep.companion = companion.datum.clone();
    rep.deg_z = Some(dz);
    rep.correction = Some(corr);
    Ok(rep)
}

/// R(O_p, T) = 2 R(O_p, T') for the companion ternary target.
pub fn conjecture51_check(t: &HalfIntMat, p: u64, max_ops: u128) -> Result<bool> {
    let companion = TernaryTarget::companion(t, p, max_ops)?;
    conjecture51_check_with(t, &companion, max_ops)
}

/// The same check against a caller-supplied ternary target.
pub fn conjecture51_check_with(t: &HalfIntMat, companion: &TernaryTarget, max_ops: u128) -> Result<bool> {
    let quat = rep_average(t, companion.p, max_ops)?;
    let tern = rep_average_ternary(companion)?;
    Ok(!quat.is_zero() && quat == q(2) * tern)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegelmass::build_maximal_order;

    const OPS: u128 = 1 << 26;

    #[test]
    fn prefactor_values() {
        assert_eq!(prop51_prefactor(4).unwrap(), q(-1152));
        // ζ(-3) = 1/120, ζ(-1) = -1/12, ζ(-5) = -1/252
        let expect = q(-32) / (qf(1, 120) * qf(-1, 12) * qf(1, 120) * qf(-1, 252));
        assert_eq!(prop51_prefactor(8).unwrap(), expect);
        assert!(prop51_prefactor(6).is_err());
    }

    #[test]
    fn degenerate_case_vanishes() {
        let mut found = false;
        for d in [[1, 1, 3, 3], [1, 1, 7, 7], [1, 3, 7, 21], [1, 1, 21, 21], [1, 3, 5, 15]] {
            let t = HalfIntMat::diag(&d);
            if chi_trivial_global(&t) && diff_set(&t).unwrap().len() != 1 {
                let r = c4(&t, OPS).unwrap();
                assert_eq!(r.case, C4Case::ChiTrivialDegenerate);
                assert!(r.c4.is_zero());
                found = true;
            }
        }
        assert!(found);
    }

    #[test]
    fn dual_paths_agree_on_s_p() {
        for p in [3u64, 5, 7, 11, 13] {
            let s = build_maximal_order(p).unwrap().gram;
            let r = c4(&s, OPS).unwrap();
            assert_eq!(r.case, C4Case::ChiTrivialSingleton);
            let v = thm51_value(&s, p, OPS).unwrap();
            assert_eq!(r.c4, v, "p={p}");
            assert!(v.log_coefficient(p).unwrap() < Q::zero());
            let d = thm12_decompose(&s, OPS).unwrap();
            assert_eq!(d.identity, Some(true));
            assert!(conjecture51_check(&s, p, OPS).unwrap());
        }
    }

    #[test]
    fn s_2_coefficient_uses_the_series() {
        let s = build_maximal_order(2).unwrap().gram;
        let r = c4(&s, OPS).unwrap();
        assert!(r.c4.log_coefficient(2).unwrap() < Q::zero());
        assert!(thm51_value(&s, 2, OPS).is_err());
    }

    #[test]
    fn nontrivial_character_carries_l_value() {
        let t = HalfIntMat::diag(&[1, 1, 1, 3]);
        let r = c4(&t, OPS).unwrap();
        assert_eq!(r.case, C4Case::ChiNontrivial);
        let js = serde_json::to_value(&r.c4).unwrap();
        assert!(js["factors"].get("classh:12").is_some());
        assert!(js["factors"].get("logunit:12").is_some());
    }

    #[test]
    fn corrupted_companion_is_detected() {
        let s = build_maximal_order(3).unwrap().gram;
        let mut comp = TernaryTarget::companion(&s, 3, OPS).unwrap();
        comp.local.push(crate::siegelmass::LocalFactor {
            q: 5,
            e: 2,
            source: crate::siegelmass::FSource::Closed,
            value: qf(26, 25),
        });
        assert!(!conjecture51_check_with(&s, &comp, OPS).unwrap());
    }
}
