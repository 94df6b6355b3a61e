use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{fmt_q, parse_q, q, qpow, Q};
use crate::poly::{QSqrt, RatPoly};

/// F_q^T as a polynomial with coefficients in Q(sqrt q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiegelPoly {
    pub q: u64,
    pub g: usize,
    pub e: u32,
    coeffs: Vec<QSqrt>,
}

impl SiegelPoly {
    pub fn new(q: u64, g: usize, e: u32, mut coeffs: Vec<QSqrt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(QSqrt::zero());
        }
        SiegelPoly { q, g, e, coeffs }
    }

    pub fn from_rational(q: u64, g: usize, e: u32, p: &RatPoly) -> Self {
        Self::new(
            q,
            g,
            e,
            p.coeffs().iter().map(|c| QSqrt::rat(c.clone())).collect(),
        )
    }

    pub fn one(q: u64, g: usize) -> Self {
        Self::from_rational(q, g, 0, &RatPoly::one())
    }

    pub fn coeffs(&self) -> &[QSqrt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.b.is_zero())
    }

    pub fn to_rat(&self) -> Result<RatPoly> {
        if !self.is_rational() {
            return Err(Error::Inconsistent(
                "polynomial has irrational coefficients".into(),
            ));
        }
        Ok(RatPoly::new(self.coeffs.iter().map(|c| c.a.clone()).collect()))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.b.is_zero() && c.a.is_integer())
    }

    pub fn constant_is_one(&self) -> bool {
        self.coeffs[0] == QSqrt::rat(Q::one())
    }

    /// F(x) for rational x.
    pub fn eval(&self, x: &Q) -> Result<Q> {
        Ok(self.to_rat()?.eval(x))
    }

    /// F'(x) for rational x.
    pub fn deriv_eval(&self, x: &Q) -> Result<Q> {
        Ok(self.to_rat()?.deriv().eval(x))
    }

    /// Coefficients of 𝓕(X) = X^{-e/2} F(q^{-(g+1)/2} X); entry k is the
    /// coefficient of X^{k - e/2}.
    pub fn calf_coeffs(&self) -> Vec<QSqrt> {
        let n = (self.e as usize).max(self.degree());
        (0..=n)
            .map(|k| {
                let c = self.coeffs.get(k).cloned().unwrap_or_else(QSqrt::zero);
                c.mul(
                    &QSqrt::sqrt_pow(self.q, -((self.g as i64 + 1) * k as i64)),
                    self.q,
                )
            })
            .collect()
    }

    /// The sign s with 𝓕(X^{-1}) = s 𝓕(X), if any.
    pub fn functional_equation_sign(&self) -> Option<i8> {
        if self.degree() > self.e as usize {
            return None;
        }
        let c = self.calf_coeffs();
        let n = c.len() - 1;
        for s in [1i8, -1] {
            let ok = (0..=n).all(|k| c[n - k] == c[k].scale(&q(s as i64)));
            if ok {
                return Some(s);
            }
        }
        None
    }

    /// Even g: 𝓕 is symmetric under X -> X^{-1}.
    pub fn functional_equation_check(&self) -> bool {
        self.g % 2 == 0 && self.functional_equation_sign() == Some(1)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let bad = || Error::InvalidArgument("malformed SiegelPoly JSON".into());
        let qq = v["q"].as_u64().ok_or_else(bad)?;
        let g = v["g"].as_u64().ok_or_else(bad)? as usize;
        let e = v["e"].as_u64().ok_or_else(bad)? as u32;
        let mut coeffs = Vec::new();
        for c in v["coeffs"].as_array().ok_or_else(bad)? {
            let pair = c.as_array().ok_or_else(bad)?;
            if pair.len() != 2 {
                return Err(bad());
            }
            let a = parse_q(pair[0].as_str().ok_or_else(bad)?).ok_or_else(bad)?;
            let b = parse_q(pair[1].as_str().ok_or_else(bad)?).ok_or_else(bad)?;
            coeffs.push(QSqrt { a, b });
        }
        Ok(Self::new(qq, g, e, coeffs))
    }
}

impl Serialize for SiegelPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<[String; 2]> = self
            .coeffs
            .iter()
            .map(|c| [fmt_q(&c.a), fmt_q(&c.b)])
            .collect();
        let mut st = s.serialize_struct("SiegelPoly", 4)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("g", &self.g)?;
        st.serialize_field("e", &self.e)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// γ-factor (numerator, denominator) for size g at q:
/// (1-X) ∏_{j=1}^{[g/2]} (1-q^{2j}X^2), over (1-ξ q^{g/2} X) when g is even.
pub fn gamma_factor(g: usize, qq: u64, xi: i8) -> (RatPoly, RatPoly) {
    let qb = q(qq as i64);
    let mut num = RatPoly::from_ints(&[1, -1]);
    for j in 1..=(g / 2) as i64 {
        num = num.mul(&RatPoly::new(vec![q(1), q(0), -qpow(&qb, 2 * j)]));
    }
    let den = if g % 2 == 0 && xi != 0 {
        RatPoly::new(vec![q(1), -q(xi as i64) * qpow(&qb, g as i64 / 2)])
    } else {
        RatPoly::one()
    };
    (num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::qf;

    #[test]
    fn gamma_examples() {
        let (n, d) = gamma_factor(4, 3, 1);
        let expect = RatPoly::from_ints(&[1, -1])
            .mul(&RatPoly::from_ints(&[1, 0, -9]))
            .mul(&RatPoly::from_ints(&[1, 0, -81]));
        assert_eq!(n, expect);
        assert_eq!(d, RatPoly::from_ints(&[1, -9]));
        let (n, d) = gamma_factor(3, 5, 0);
        assert_eq!(n, RatPoly::from_ints(&[1, -1]).mul(&RatPoly::from_ints(&[1, 0, -25])));
        assert_eq!(d, RatPoly::one());
        let (n, d) = gamma_factor(2, 2, 0);
        assert_eq!(n, RatPoly::from_ints(&[1, -1]).mul(&RatPoly::from_ints(&[1, 0, -4])));
        assert_eq!(d, RatPoly::one());
    }

    #[test]
    fn evaluation_and_json() {
        let one = SiegelPoly::one(3, 2);
        assert_eq!(one.eval(&qf(1, 4)).unwrap(), q(1));
        assert_eq!(one.deriv_eval(&qf(1, 4)).unwrap(), q(0));
        let f = SiegelPoly::from_rational(3, 2, 1, &RatPoly::from_ints(&[1, 3]));
        assert_eq!(f.deriv_eval(&qf(1, 4)).unwrap(), q(3));
        let js = f.to_json();
        assert_eq!(js, r#"{"q":3,"g":2,"e":1,"coeffs":[["1/1","0/1"],["3/1","0/1"]]}"#);
        assert_eq!(SiegelPoly::from_json(&js).unwrap(), f);
        let irr = SiegelPoly::new(3, 2, 0, vec![QSqrt { a: q(1), b: q(1) }]);
        assert!(irr.eval(&q(1)).is_err());
    }

    #[test]
    fn palindromy() {
        assert!(SiegelPoly::one(5, 4).functional_equation_check());
        // g = 2, e = 2: 1 + q^3 X^2 is symmetric
        let f = SiegelPoly::from_rational(3, 2, 2, &RatPoly::from_ints(&[1, 0, 27]));
        assert!(f.functional_equation_check());
        let bad = SiegelPoly::from_rational(3, 2, 2, &RatPoly::from_ints(&[1, 0, 9]));
        assert!(!bad.functional_equation_check());
    }
}
