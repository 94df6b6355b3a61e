use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::numeric::Fixed;
use super::quadratic::{class_number, fundamental_unit};
use super::{fmt_q, parse_q, Q};
use crate::error::{Error, Result};

/// Formal transcendental or integer-valued symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// log p
    LogPrime(u64),
    /// square root of a positive squarefree integer
    SqrtDisc(u64),
    /// log of the fundamental unit of Q(sqrt d)
    LogUnit(u64),
    /// class number of Q(sqrt d)
    ClassH(u64),
}

impl Symbol {
    pub fn key(&self) -> String {
        match self {
            Symbol::LogPrime(p) => format!("logp:{p}"),
            Symbol::SqrtDisc(d) => format!("sqrtd:{d}"),
            Symbol::LogUnit(d) => format!("logunit:{d}"),
            Symbol::ClassH(d) => format!("classh:{d}"),
        }
    }

    pub fn parse(key: &str) -> Option<Symbol> {
        let (tag, n) = key.split_once(':')?;
        let n: u64 = n.parse().ok()?;
        match tag {
            "logp" => Some(Symbol::LogPrime(n)),
            "sqrtd" => Some(Symbol::SqrtDisc(n)),
            "logunit" => Some(Symbol::LogUnit(n)),
            "classh" => Some(Symbol::ClassH(n)),
            _ => None,
        }
    }

    fn numeric(&self) -> Fixed {
        match *self {
            Symbol::LogPrime(p) => Fixed::from_int(&BigInt::from(p)).ln(),
            Symbol::SqrtDisc(d) => Fixed::from_int(&BigInt::from(d)).sqrt(),
            Symbol::LogUnit(d) => {
                let u = fundamental_unit(d).expect("log_unit of a fundamental discriminant");
                let root = Fixed::from_int(&BigInt::from(d)).sqrt();
                let t = Fixed::from_int(&u.t);
                let uu = Fixed::from_int(&u.u);
                let two = Fixed::from_int(&BigInt::from(2));
                t.add(&uu.mul(&root)).div(&two).ln()
            }
            Symbol::ClassH(d) => {
                Fixed::from_int(&BigInt::from(class_number(d).expect("class number")))
            }
        }
    }
}

/// A rational coefficient times a monomial in π and formal symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    coeff: Q,
    pi_exp: i32,
    factors: BTreeMap<Symbol, i32>,
}

impl ExactScalar {
    pub fn rational(c: Q) -> Self {
        let mut s = ExactScalar {
            coeff: c,
            pi_exp: 0,
            factors: BTreeMap::new(),
        };
        s.normalize();
        s
    }

    pub fn zero() -> Self {
        Self::rational(Q::zero())
    }

    pub fn one() -> Self {
        Self::rational(Q::one())
    }

    pub fn pi_pow(n: i32) -> Self {
        ExactScalar {
            coeff: Q::one(),
            pi_exp: n,
            factors: BTreeMap::new(),
        }
    }

    pub fn symbol(sym: Symbol, exp: i32) -> Self {
        let mut s = Self::one();
        s.factors.insert(sym, exp);
        s.normalize();
        s
    }

    pub fn log_prime(p: u64) -> Self {
        Self::symbol(Symbol::LogPrime(p), 1)
    }

    /// sqrt(n)^exp for a positive integer n, with the square part pulled out.
    pub fn sqrt_int(n: u64, exp: i32) -> Self {
        assert!(n > 0);
        let (sq, free) = square_split(n);
        let mut s = Self::rational(super::qpow(&super::q(sq as i64), exp as i64));
        if free > 1 {
            s = s.mul(&Self::symbol(Symbol::SqrtDisc(free), exp));
        }
        s
    }

    pub fn coeff(&self) -> &Q {
        &self.coeff
    }

    pub fn pi_exp(&self) -> i32 {
        self.pi_exp
    }

    pub fn factors(&self) -> &BTreeMap<Symbol, i32> {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.pi_exp == 0 && self.factors.is_empty()
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.is_rational().then(|| self.coeff.clone())
    }

    /// Coefficient of `log p` when the monomial is exactly `log p`.
    pub fn log_coefficient(&self, p: u64) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        let mut expect = BTreeMap::new();
        expect.insert(Symbol::LogPrime(p), 1);
        (self.pi_exp == 0 && self.factors == expect).then(|| self.coeff.clone())
    }

    pub fn same_monomial(&self, o: &ExactScalar) -> bool {
        self.pi_exp == o.pi_exp && self.factors == o.factors
    }

    fn normalize(&mut self) {
        if self.coeff.is_zero() {
            self.pi_exp = 0;
            self.factors.clear();
            return;
        }
        let mut fold = Q::one();
        for (sym, e) in self.factors.iter_mut() {
            if let Symbol::SqrtDisc(d) = sym {
                let m = e.div_euclid(2);
                *e = e.rem_euclid(2);
                fold *= super::qpow(&super::q(*d as i64), m as i64);
            }
        }
        self.coeff *= fold;
        self.factors.retain(|_, e| *e != 0);
    }

    pub fn mul(&self, o: &ExactScalar) -> ExactScalar {
        let mut out = ExactScalar {
            coeff: &self.coeff * &o.coeff,
            pi_exp: self.pi_exp + o.pi_exp,
            factors: self.factors.clone(),
        };
        for (s, e) in &o.factors {
            *out.factors.entry(*s).or_insert(0) += e;
        }
        out.normalize();
        out
    }

    pub fn scale(&self, c: &Q) -> ExactScalar {
        self.mul(&ExactScalar::rational(c.clone()))
    }

    pub fn inv(&self) -> Result<ExactScalar> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("inverse of zero scalar".into()));
        }
        let mut out = ExactScalar {
            coeff: self.coeff.recip(),
            pi_exp: -self.pi_exp,
            factors: self.factors.iter().map(|(s, e)| (*s, -e)).collect(),
        };
        out.normalize();
        Ok(out)
    }

    pub fn div(&self, o: &ExactScalar) -> Result<ExactScalar> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn neg(&self) -> ExactScalar {
        self.scale(&-Q::one())
    }

    /// Sum of two scalars; the monomials must agree unless one side is zero.
    pub fn add(&self, o: &ExactScalar) -> Result<ExactScalar> {
        if self.is_zero() {
            return Ok(o.clone());
        }
        if o.is_zero() {
            return Ok(self.clone());
        }
        if !self.same_monomial(o) {
            return Err(Error::InvalidArgument(format!(
                "cannot add scalars with different monomials: {self} and {o}"
            )));
        }
        let mut out = self.clone();
        out.coeff += &o.coeff;
        out.normalize();
        Ok(out)
    }

    pub fn sub(&self, o: &ExactScalar) -> Result<ExactScalar> {
        self.add(&o.neg())
    }

    /// Value as a fixed-point real with 224 fractional bits.
    pub fn numeric(&self) -> Fixed {
        let mut acc = Fixed::from_q(&self.coeff);
        if self.pi_exp != 0 {
            acc = acc.mul(&Fixed::pi().powi(self.pi_exp));
        }
        for (s, e) in &self.factors {
            acc = acc.mul(&s.numeric().powi(*e));
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.numeric().to_f64()
    }

    pub fn from_json(v: &serde_json::Value) -> Option<ExactScalar> {
        let coeff = parse_q(v.get("coeff")?.as_str()?)?;
        let pi = v.get("pi")?.as_i64()? as i32;
        let mut s = ExactScalar::rational(coeff);
        s = s.mul(&ExactScalar::pi_pow(pi));
        for (k, e) in v.get("factors")?.as_object()? {
            s = s.mul(&ExactScalar::symbol(Symbol::parse(k)?, e.as_i64()? as i32));
        }
        Some(s)
    }
}

fn square_split(n: u64) -> (u64, u64) {
    let mut sq = 1u64;
    let mut free = 1u64;
    for (p, k) in super::factorize(&BigInt::from(n)) {
        sq *= p.pow(k / 2);
        if k % 2 == 1 {
            free *= p;
        }
    }
    (sq, free)
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            coeff: String,
            pi: i32,
            factors: Factors<'a>,
        }
        struct Factors<'a>(&'a BTreeMap<Symbol, i32>);
        impl Serialize for Factors<'_> {
            fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = ser.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    m.serialize_entry(&k.key(), v)?;
                }
                m.end()
            }
        }
        Repr {
            coeff: fmt_q(&self.coeff),
            pi: self.pi_exp,
            factors: Factors(&self.factors),
        }
        .serialize(ser)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_q(&self.coeff))?;
        if self.pi_exp != 0 {
            write!(f, " * pi^{}", self.pi_exp)?;
        }
        for (s, e) in &self.factors {
            let name = match s {
                Symbol::LogPrime(p) => format!("log({p})"),
                Symbol::SqrtDisc(d) => format!("sqrt({d})"),
                Symbol::LogUnit(d) => format!("log(eps_{d})"),
                Symbol::ClassH(d) => format!("h({d})"),
            };
            if *e == 1 {
                write!(f, " * {name}")?;
            } else {
                write!(f, " * {name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Convenience: p^(k/2) as a scalar (rational when k is even).
pub(crate) fn half_power(p: u64, k: i64) -> ExactScalar {
    let whole = ExactScalar::rational(super::qpow(&super::q(p as i64), k.div_euclid(2)));
    if k.rem_euclid(2) == 1 {
        whole.mul(&ExactScalar::sqrt_int(p, 1))
    } else {
        whole
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q, qf};
    use proptest::prelude::*;

    #[test]
    fn zero_is_canonical() {
        let z = ExactScalar::log_prime(3).scale(&q(0));
        assert_eq!(z, ExactScalar::zero());
        assert!(z.factors().is_empty());
        assert_eq!(z.pi_exp(), 0);
    }

    #[test]
    fn sqrt_normalizes() {
        let s = ExactScalar::sqrt_int(12, 1);
        assert_eq!(s.coeff(), &q(2));
        assert_eq!(s.factors().get(&Symbol::SqrtDisc(3)), Some(&1));
        let sq = s.mul(&s);
        assert_eq!(sq, ExactScalar::rational(q(12)));
        let inv = ExactScalar::sqrt_int(5, -1);
        assert_eq!(inv.mul(&ExactScalar::sqrt_int(5, 1)), ExactScalar::one());
    }

    #[test]
    fn sums_need_matching_monomials() {
        let a = ExactScalar::log_prime(3).scale(&qf(1, 2));
        let b = ExactScalar::log_prime(3).scale(&qf(3, 2));
        assert_eq!(a.add(&b).unwrap(), ExactScalar::log_prime(3).scale(&q(2)));
        assert!(a.add(&ExactScalar::log_prime(5)).is_err());
        assert_eq!(a.add(&ExactScalar::zero()).unwrap(), a);
        assert_eq!(a.sub(&a).unwrap(), ExactScalar::zero());
    }

    #[test]
    fn json_round_trip() {
        let s = ExactScalar::log_prime(3)
            .mul(&ExactScalar::pi_pow(-2))
            .scale(&qf(-7, 9));
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["coeff"], "-7/9");
        assert_eq!(v["pi"], -2);
        assert_eq!(v["factors"]["logp:3"], 1);
        assert_eq!(ExactScalar::from_json(&v).unwrap(), s);
    }

    #[test]
    fn numeric_accessor() {
        let s = ExactScalar::pi_pow(2).scale(&qf(1, 6));
        assert!((s.to_f64() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        let l = ExactScalar::log_prime(5).mul(&ExactScalar::sqrt_int(2, 1));
        assert!((l.to_f64() - 5f64.ln() * 2f64.sqrt()).abs() < 1e-14);
    }

    fn arb_scalar() -> impl Strategy<Value = ExactScalar> {
        (
            -50i64..50,
            1i64..20,
            -3i32..3,
            prop::sample::select(vec![2u64, 3, 5, 7]),
            -2i32..3,
            prop::sample::select(vec![2u64, 3, 5, 6]),
            -3i32..3,
        )
            .prop_map(|(n, d, pe, p, pk, r, rk)| {
                ExactScalar::rational(qf(n, d))
                    .mul(&ExactScalar::pi_pow(pe))
                    .mul(&ExactScalar::symbol(Symbol::LogPrime(p), pk))
                    .mul(&ExactScalar::sqrt_int(r, rk))
            })
    }

    proptest! {
        #[test]
        fn product_is_associative_and_commutative(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn sum_is_commutative_on_matching_monomials(a in arb_scalar(), n in -20i64..20) {
            let b = a.scale(&q(n));
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        }
    }
}
