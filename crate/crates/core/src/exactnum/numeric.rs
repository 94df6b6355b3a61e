//! Binary fixed-point reals used only by the numeric accessors.
//!
//! Values carry `FRAC_BITS` fractional bits. Every primitive below is
//! accurate to a few units in the last place, so results printed with 34
//! significant digits (the precision of an IEEE binary128 float) are safe
//! for the magnitudes that occur here.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Q;

const FRAC_BITS: u32 = 224;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed(BigInt);

impl Fixed {
    fn unit() -> BigInt {
        BigInt::one() << FRAC_BITS
    }

    pub fn from_q(x: &Q) -> Fixed {
        Fixed((x.numer() << FRAC_BITS) / x.denom())
    }

    pub fn from_int(n: &BigInt) -> Fixed {
        Fixed(n << FRAC_BITS)
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> FRAC_BITS)
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        assert!(!o.0.is_zero(), "fixed-point division by zero");
        Fixed((&self.0 << FRAC_BITS) / &o.0)
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn powi(&self, n: i32) -> Fixed {
        let mut acc = Fixed(Self::unit());
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(self);
        }
        if n < 0 {
            Fixed(Self::unit()).div(&acc)
        } else {
            acc
        }
    }

    pub fn sqrt(&self) -> Fixed {
        assert!(!self.0.is_negative());
        Fixed((&self.0 << FRAC_BITS).sqrt())
    }

    /// atanh(1/k) for an integer k >= 2.
    fn atanh_inv(k: u64) -> Fixed {
        let k2 = BigInt::from(k) * BigInt::from(k);
        let mut term = Self::unit() / BigInt::from(k);
        let mut sum = BigInt::zero();
        let mut n = 1u64;
        while !term.is_zero() {
            sum += &term / BigInt::from(n);
            term /= &k2;
            n += 2;
        }
        Fixed(sum)
    }

    /// atan(1/k) for an integer k >= 2.
    fn atan_inv(k: u64) -> Fixed {
        let k2 = BigInt::from(k) * BigInt::from(k);
        let mut term = Self::unit() / BigInt::from(k);
        let mut sum = BigInt::zero();
        let mut n = 1u64;
        let mut sign = true;
        while !term.is_zero() {
            let t = &term / BigInt::from(n);
            if sign {
                sum += t;
            } else {
                sum -= t;
            }
            term /= &k2;
            n += 2;
            sign = !sign;
        }
        Fixed(sum)
    }

    pub fn pi() -> Fixed {
        let a = Self::atan_inv(5);
        let b = Self::atan_inv(239);
        Fixed(a.0 * 16 - b.0 * 4)
    }

    pub fn ln2() -> Fixed {
        Fixed(Self::atanh_inv(3).0 * 2)
    }

    /// Natural logarithm of a positive fixed-point value.
    pub fn ln(&self) -> Fixed {
        assert!(self.is_positive(), "log of nonpositive value");
        // write self = 2^k * m with m in [1, 2)
        let bits = self.0.bits() as i64;
        let k = bits - 1 - FRAC_BITS as i64;
        let m = if k >= 0 {
            Fixed(&self.0 >> (k as u32))
        } else {
            Fixed(&self.0 << ((-k) as u32))
        };
        let one = Fixed(Self::unit());
        let y = m.sub(&one).div(&m.add(&one));
        // 2 atanh(y), |y| <= 1/3
        let y2 = y.mul(&y);
        let mut term = y.clone();
        let mut sum = BigInt::zero();
        let mut n = 1u64;
        while !term.0.is_zero() {
            sum += &term.0 / BigInt::from(n);
            term = term.mul(&y2);
            n += 2;
        }
        Fixed(sum * 2).add(&Fixed(Self::ln2().0 * BigInt::from(k)))
    }

    pub fn to_f64(&self) -> f64 {
        let shift = FRAC_BITS as i32 - 60;
        let top: BigInt = &self.0 >> (shift as u32);
        let v: f64 = num_traits::ToPrimitive::to_f64(&top).unwrap_or(f64::NAN);
        v / 2f64.powi(60)
    }

    /// Decimal rendering with `digits` significant digits (truncated).
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.0.is_zero() {
            return "0".to_string();
        }
        let neg = self.0.is_negative();
        let a = self.0.abs();
        let int_part: BigInt = &a >> FRAC_BITS;
        let frac_mask = Self::unit() - 1;
        let mut frac = &a & &frac_mask;
        let mut s = int_part.to_string();
        let int_digits = if int_part.is_zero() { 0 } else { s.len() };
        s.push('.');
        let mut produced = int_digits;
        let mut leading = int_part.is_zero();
        let mut guard = 0;
        while produced < digits && guard < 400 {
            frac *= 10;
            let d: BigInt = &frac >> FRAC_BITS;
            frac = &frac & &frac_mask;
            let ds = d.to_string();
            if !(leading && ds == "0") {
                leading = false;
                produced += 1;
            }
            s.push_str(&ds);
            guard += 1;
        }
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{q, qf};

    #[test]
    fn constants() {
        assert!(Fixed::pi()
            .to_decimal(34)
            .starts_with("3.141592653589793238462643383279502"));
        assert!(Fixed::ln2()
            .to_decimal(34)
            .starts_with("0.6931471805599453094172321214581765"));
    }

    #[test]
    fn logs_and_roots() {
        let l3 = Fixed::from_q(&q(3)).ln();
        assert!(l3.to_decimal(30).starts_with("1.09861228866810969139524523692"));
        let s2 = Fixed::from_q(&q(2)).sqrt();
        assert!(s2.to_decimal(30).starts_with("1.41421356237309504880168872420"));
        let small = Fixed::from_q(&qf(1, 7)).ln();
        assert!((small.to_f64() + 7f64.ln()).abs() < 1e-15);
        let x = Fixed::from_q(&qf(22, 7));
        assert!((x.powi(-2).to_f64() - (7.0f64 / 22.0).powi(2)).abs() < 1e-15);
    }
}
