use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{ExactScalar, Symbol};
use super::{factorize, kronecker_symbol, q};
use crate::error::{Error, Result};

/// Fundamental discriminant of Q(sqrt D); returns 1 when D is a square.
pub fn fundamental_discriminant(d: &BigInt) -> BigInt {
    assert!(!d.is_zero());
    let mut r = if d.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    for (p, k) in factorize(d) {
        if k % 2 == 1 {
            r *= BigInt::from(p);
        }
    }
    if r.is_one() {
        return r;
    }
    if r.mod_floor(&BigInt::from(4)) == BigInt::one() {
        r
    } else {
        r * 4
    }
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    d != 0 && d != 1 && fundamental_discriminant(&BigInt::from(d)) == BigInt::from(d)
}

fn check_real_fundamental(d: u64) -> Result<()> {
    if d < 2 || !is_fundamental_discriminant(d as i64) {
        return Err(Error::InvalidArgument(format!(
            "{d} is not a positive nonsquare fundamental discriminant"
        )));
    }
    Ok(())
}

/// Fundamental unit (t + u sqrt d)/2 > 1 together with its norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub t: BigInt,
    pub u: BigInt,
    pub norm: i8,
}

/// Fundamental unit via the continued fraction of (d mod 2 + sqrt d)/2.
pub fn fundamental_unit(d: u64) -> Result<FundamentalUnit> {
    check_real_fundamental(d)?;
    let db = BigInt::from(d);
    let s = db.sqrt();
    let p0 = BigInt::from(d % 2);
    let (mut pk, mut qk) = (p0.clone(), BigInt::from(2));
    let (mut h1, mut h2) = (BigInt::one(), BigInt::zero());
    let (mut k1, mut k2) = (BigInt::zero(), BigInt::one());
    for _ in 0..100_000 {
        let a = if qk.is_positive() {
            (&pk + &s).div_floor(&qk)
        } else {
            (&pk + &s + BigInt::one()).div_floor(&qk)
        };
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        let t = &h * 2 - &k * &p0;
        let n = &t * &t - &db * &k * &k;
        if n == BigInt::from(4) || n == BigInt::from(-4) {
            return Ok(FundamentalUnit {
                t,
                u: k,
                norm: if n.is_positive() { 1 } else { -1 },
            });
        }
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        pk = &a * &qk - &pk;
        qk = (&db - &pk * &pk) / &qk;
    }
    Err(Error::Inconsistent(format!("no unit found for d={d}")))
}

/// Smallest (t, u), u > 0, with t^2 - d u^2 = 4.
pub fn pell_fundamental(d: u64) -> Result<(BigInt, BigInt)> {
    let e = fundamental_unit(d)?;
    if e.norm == 1 {
        Ok((e.t, e.u))
    } else {
        let db = BigInt::from(d);
        let t = (&e.t * &e.t + &db * &e.u * &e.u) / 2;
        let u = &e.t * &e.u;
        Ok((t, u))
    }
}

/// Narrow class number: number of cycles of reduced indefinite forms.
pub fn narrow_class_number(d: u64) -> Result<u64> {
    check_real_fundamental(d)?;
    let di = d as i64;
    let s = (d as f64).sqrt() as i64;
    let s = (s - 2..=s + 2).filter(|x| x * x <= di).max().unwrap();
    let mut reduced = Vec::new();
    for b in 1..=s {
        if (b - di).rem_euclid(2) != 0 {
            continue;
        }
        let n = (b * b - di) / 4;
        let m = n.abs();
        for a0 in 1..=m {
            if m % a0 != 0 {
                continue;
            }
            for a in [a0, -a0] {
                let c = n / a;
                if 2 * a0 + b > s && 2 * a0 - b <= s {
                    reduced.push((a, b, c));
                }
            }
        }
    }
    let mut seen: HashSet<(i64, i64, i64)> = HashSet::new();
    let mut cycles = 0u64;
    for &f in &reduced {
        if seen.contains(&f) {
            continue;
        }
        cycles += 1;
        let mut g = f;
        loop {
            seen.insert(g);
            let (_, b, c) = g;
            let m = 2 * c.abs();
            let b2 = s - (s + b).rem_euclid(m);
            let c2 = (b2 * b2 - di) / (4 * c);
            g = (c, b2, c2);
            if g == f {
                break;
            }
            if seen.contains(&g) {
                return Err(Error::Inconsistent(format!(
                    "reduction cycle for d={d} re-entered a visited form"
                )));
            }
        }
    }
    Ok(cycles)
}

/// Class number of Q(sqrt d) for a real fundamental discriminant d.
pub fn class_number(d: u64) -> Result<u64> {
    let hp = narrow_class_number(d)?;
    let e = fundamental_unit(d)?;
    Ok(if e.norm == -1 { hp } else { hp / 2 })
}

/// L(1, χ_d) = 2 h log(ε)/sqrt(d) as a formal scalar.
pub fn l_one(d: u64) -> Result<ExactScalar> {
    check_real_fundamental(d)?;
    Ok(ExactScalar::rational(q(2))
        .mul(&ExactScalar::symbol(Symbol::ClassH(d), 1))
        .mul(&ExactScalar::symbol(Symbol::LogUnit(d), 1))
        .mul(&ExactScalar::sqrt_int(d, -1)))
}

pub fn l_one_numeric(d: u64) -> Result<f64> {
    Ok(l_one(d)?.to_f64())
}

/// Partial sums of Σ χ_d(n)/n up to about `terms`, averaged over the last
/// full period to damp the oscillation.
pub fn l_one_partial_sum(d: u64, terms: u64) -> f64 {
    let db = BigInt::from(d);
    let chi: Vec<i8> = (0..d)
        .map(|n| kronecker_symbol(&db, n as i64))
        .collect();
    let n_max = (terms / d).max(2) * d;
    let mut s = 0f64;
    let mut avg = 0f64;
    for n in 1..=n_max {
        s += chi[(n % d) as usize] as f64 / n as f64;
        if n > n_max - d {
            avg += s;
        }
    }
    avg / d as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn fundamental_discriminants() {
        let f = |n: i64| fundamental_discriminant(&BigInt::from(n));
        assert_eq!(f(48), BigInt::from(12));
        assert_eq!(f(144), BigInt::from(1));
        assert_eq!(f(-4), BigInt::from(-4));
        assert_eq!(f(-12), BigInt::from(-3));
        assert_eq!(f(20), BigInt::from(5));
        assert_eq!(f(8), BigInt::from(8));
        assert!(is_fundamental_discriminant(5));
        assert!(!is_fundamental_discriminant(20));
    }

    #[test]
    fn pell_examples() {
        let b = |n: i64| BigInt::from(n);
        assert_eq!(pell_fundamental(5).unwrap(), (b(3), b(1)));
        assert_eq!(pell_fundamental(8).unwrap(), (b(6), b(2)));
        assert_eq!(pell_fundamental(13).unwrap(), (b(11), b(3)));
        assert!(pell_fundamental(20).is_err());
        assert!(pell_fundamental(16).is_err());
        assert!(pell_fundamental(1).is_err());
    }

    #[test]
    fn pell_is_minimal() {
        for d in (5..300u64).filter(|&d| is_fundamental_discriminant(d as i64)) {
            let (t, u) = pell_fundamental(d).unwrap();
            let db = BigInt::from(d);
            assert_eq!(&t * &t - &db * &u * &u, BigInt::from(4));
            let ub = u.to_u64().unwrap();
            if ub > 2_000_000 {
                continue;
            }
            for v in 1..ub {
                let x: BigInt = BigInt::from(d) * v * v + 4;
                let r = x.sqrt();
                assert_ne!(&r * &r, x, "smaller solution u={v} for d={d}");
            }
        }
    }

    #[test]
    fn class_numbers() {
        for (d, h) in [
            (5, 1),
            (8, 1),
            (12, 1),
            (13, 1),
            (40, 2),
            (60, 2),
            (65, 2),
            (85, 2),
            (136, 2),
            (229, 3),
            (401, 5),
        ] {
            assert_eq!(class_number(d).unwrap(), h, "d={d}");
        }
        assert_eq!(narrow_class_number(12).unwrap(), 2);
        assert_eq!(narrow_class_number(5).unwrap(), 1);
    }

    #[test]
    fn l_one_symbolic_shape() {
        let l = l_one(5).unwrap();
        assert_eq!(l.factors().get(&Symbol::ClassH(5)), Some(&1));
        assert_eq!(l.factors().get(&Symbol::LogUnit(5)), Some(&1));
        // 1/sqrt(5) is stored as sqrt(5)/5
        assert_eq!(l.factors().get(&Symbol::SqrtDisc(5)), Some(&1));
        assert_eq!(l.coeff(), &crate::exactnum::qf(2, 5));
        assert!((l.to_f64() - 0.4304).abs() < 1e-4);
        let l8 = l_one(8).unwrap();
        let expect = 2.0 * (1.0 + 2f64.sqrt()).ln() / 8f64.sqrt();
        assert!((l8.to_f64() - expect).abs() < 1e-14);
        assert!(l_one(1).is_err());
    }

    #[test]
    fn l_one_matches_character_sums() {
        for d in (5..=100u64).filter(|&d| is_fundamental_discriminant(d as i64)) {
            let sym = l_one_numeric(d).unwrap();
            let partial = l_one_partial_sum(d, 1_000_000);
            assert!((sym - partial).abs() < 1e-4, "d={d}: {sym} vs {partial}");
        }
    }

    #[test]
    fn narrow_identity() {
        // h log(eps0^2) = h+ log(eps+) in both sign cases
        for d in (5..200u64).filter(|&d| is_fundamental_discriminant(d as i64)) {
            let (t, u) = pell_fundamental(d).unwrap();
            let eps_plus = (t.to_f64().unwrap() + u.to_f64().unwrap() * (d as f64).sqrt()) / 2.0;
            let via_narrow =
                narrow_class_number(d).unwrap() as f64 * eps_plus.ln() / (d as f64).sqrt();
            assert!((via_narrow - l_one_numeric(d).unwrap()).abs() < 1e-9, "d={d}");
        }
    }
}
