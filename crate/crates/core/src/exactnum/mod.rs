//! Exact rationals, special values and real quadratic data.

mod numeric;
mod quadratic;
mod scalar;

pub use numeric::Fixed;
pub use quadratic::{
    class_number, fundamental_discriminant, fundamental_unit, is_fundamental_discriminant,
    l_one, l_one_numeric, l_one_partial_sum, narrow_class_number, pell_fundamental,
    FundamentalUnit,
};
pub use scalar::{ExactScalar, Symbol};
pub(crate) use scalar::half_power;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

/// `base^exp` for a possibly negative exponent.
pub fn qpow(base: &Q, exp: i64) -> Q {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

pub fn ipow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// p-adic valuation of a nonzero integer.
pub fn ord_int(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (quo, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return k;
        }
        n = quo;
        k += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn ord_q(x: &Q, p: u64) -> i64 {
    ord_int(x.numer(), p) as i64 - ord_int(x.denom(), p) as i64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Trial-division factorization of |n|, n != 0.
pub fn factorize(n: &BigInt) -> Vec<(u64, u32)> {
    let mut m = n.abs();
    assert!(!m.is_zero(), "factorize(0)");
    let mut out = Vec::new();
    let mut d = 2u64;
    loop {
        let db = BigInt::from(d);
        if &db * &db > m {
            break;
        }
        let mut k = 0;
        while (&m % &db).is_zero() {
            m /= &db;
            k += 1;
        }
        if k > 0 {
            out.push((d, k));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        out.push((m.to_u64().expect("prime factor exceeds u64"), 1));
    }
    out
}

pub fn prime_divisors(n: &BigInt) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Kronecker symbol (a/n).
pub fn kronecker_symbol(a: &BigInt, n: i64) -> i8 {
    if n == 0 {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut result: i8 = 1;
    let mut n = n;
    if n < 0 {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    let a_even = a.is_even();
    while n % 2 == 0 {
        if a_even {
            return 0;
        }
        let r8 = a.mod_floor(&BigInt::from(8)).to_u8().unwrap();
        if r8 == 3 || r8 == 5 {
            result = -result;
        }
        n /= 2;
    }
    let mut aa = a.mod_floor(&BigInt::from(n)).to_i64().unwrap();
    let mut nn = n;
    while aa != 0 {
        while aa % 2 == 0 {
            aa /= 2;
            let r = nn % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut aa, &mut nn);
        if aa % 4 == 3 && nn % 4 == 3 {
            result = -result;
        }
        aa %= nn;
    }
    if nn == 1 {
        result
    } else {
        0
    }
}

pub fn kronecker(a: i64, n: i64) -> i8 {
    kronecker_symbol(&BigInt::from(a), n)
}

/// Bernoulli numbers B_0..=B_n with B_1 = -1/2.
pub fn bernoulli_numbers(n: usize) -> Vec<Q> {
    let mut b: Vec<Q> = Vec::with_capacity(n + 1);
    b.push(Q::one());
    for m in 1..=n {
        let mut acc = Q::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += Q::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / Q::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// ζ(1-2i) = -B_{2i}/(2i).
pub fn zeta_negative_odd(i: u32) -> Q {
    assert!(i >= 1);
    let b = bernoulli_numbers(2 * i as usize);
    -b[2 * i as usize].clone() / q(2 * i as i64)
}

pub fn zeta_zero() -> Q {
    qf(-1, 2)
}

/// Print a rational as "a/b" with b > 0, always including the denominator.
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// serde helper writing a rational with [`fmt_q`].
pub fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Q::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_legendre(a: i64, p: i64) -> i8 {
        let a = a.rem_euclid(p);
        if a == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == a) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(2, 3), -1);
        assert_eq!(kronecker(1, 17), 1);
        assert_eq!(kronecker(5, 12), -1);
        assert_eq!(kronecker(5, 12), kronecker(5, 4) * kronecker(5, 3));
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(-4, 5), 1);
        assert_eq!(kronecker(7, 1), 1);
    }

    #[test]
    fn kronecker_matches_legendre_and_is_multiplicative() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23] {
            for a in -40..40 {
                assert_eq!(kronecker(a, p), brute_legendre(a, p), "a={a} p={p}");
            }
        }
        for a in -30i64..30 {
            for m in 1i64..25 {
                for n in 1i64..25 {
                    assert_eq!(kronecker(a, m * n), kronecker(a, m) * kronecker(a, n));
                }
            }
        }
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_negative_odd(1), qf(-1, 12));
        assert_eq!(zeta_negative_odd(2), qf(1, 120));
        assert_eq!(zeta_negative_odd(3), qf(-1, 252));
        assert_eq!(zeta_negative_odd(4), qf(1, 240));
        assert_eq!(zeta_zero(), qf(-1, 2));
        assert_eq!(zeta_zero() * zeta_zero(), qf(1, 4));
    }

    #[test]
    fn von_staudt_clausen_denominators() {
        // denominator of B_{2i} is the product of primes p with (p-1) | 2i
        let b = bernoulli_numbers(40);
        for i in 1..=20u64 {
            let expect: u64 = (2..=2 * i + 1)
                .filter(|&p| is_prime(p) && (2 * i) % (p - 1) == 0)
                .product();
            assert_eq!(b[2 * i as usize].denom(), &BigInt::from(expect));
        }
    }

    #[test]
    fn factorize_and_valuation() {
        assert_eq!(factorize(&BigInt::from(144)), vec![(2, 4), (3, 2)]);
        assert_eq!(factorize(&BigInt::from(-97)), vec![(97, 1)]);
        assert_eq!(ord_int(&BigInt::from(48), 2), 4);
        assert_eq!(ord_q(&qf(9, 8), 2), -3);
        assert!(is_square_int(&BigInt::from(144)));
        assert!(!is_square_int(&BigInt::from(-4)));
    }

    #[test]
    fn rational_printing_round_trips() {
        for x in [qf(-3, 4), q(7), q(0), qf(10, -4)] {
            let s = fmt_q(&x);
            assert!(s.contains('/'));
            assert_eq!(parse_q(&s).unwrap(), x);
        }
        assert_eq!(fmt_q(&q(-1152)), "-1152/1");
    }
}
