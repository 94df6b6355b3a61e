//! Dense univariate polynomials over Q and the pair field Q(sqrt q).

use num_traits::{One, Zero};

use crate::exactnum::{q, qpow, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatPoly(Vec<Q>);

impl RatPoly {
    pub fn new(mut c: Vec<Q>) -> Self {
        while c.len() > 1 && c.last().unwrap().is_zero() {
            c.pop();
        }
        if c.is_empty() {
            c.push(Q::zero());
        }
        RatPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| q(x)).collect())
    }

    pub fn one() -> Self {
        Self::new(vec![Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.0.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.len() == 1 && self.0[0].is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn deriv(&self) -> RatPoly {
        if self.0.len() <= 1 {
            return RatPoly::new(vec![]);
        }
        RatPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * q(k as i64))
                .collect(),
        )
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.0.len().max(o.0.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        self.add(&o.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> RatPoly {
        RatPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        let mut out = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    /// P(c X).
    pub fn rescale(&self, c: &Q) -> RatPoly {
        let mut pw = Q::one();
        let mut out = Vec::with_capacity(self.0.len());
        for a in &self.0 {
            out.push(a * &pw);
            pw *= c;
        }
        RatPoly::new(out)
    }

    /// Truncated power series quotient self/den through degree `n`.
    pub fn series_div(&self, den: &RatPoly, n: usize) -> Vec<Q> {
        let d0 = den.coeff(0);
        assert!(!d0.is_zero(), "series division by a series with zero constant term");
        let mut out: Vec<Q> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeff(k);
            for j in 1..=k {
                let dj = den.coeff(j);
                if !dj.is_zero() {
                    acc -= &dj * &out[k - j];
                }
            }
            out.push(acc / &d0);
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeff(dd);
        let mut r = self.0.clone();
        let n = self.degree().unwrap_or(0);
        if n < dd || self.is_zero() {
            return (RatPoly::new(vec![]), self.clone());
        }
        let mut quo = vec![Q::zero(); n - dd + 1];
        for k in (0..=n - dd).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for j in 0..=dd {
                    r[k + j] -= &c * d.coeff(j);
                }
            }
            quo[k] = c;
        }
        (RatPoly::new(quo), RatPoly::new(r))
    }

    /// The polynomial of degree < n through n points with distinct abscissae.
    pub fn interpolate(xs: &[Q], ys: &[Q]) -> RatPoly {
        assert_eq!(xs.len(), ys.len());
        let mut out = RatPoly::new(vec![]);
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            let mut basis = RatPoly::one();
            let mut den = Q::one();
            for (j, xj) in xs.iter().enumerate() {
                if j != i {
                    basis = basis.mul(&RatPoly::new(vec![-xj.clone(), Q::one()]));
                    den *= xi - xj;
                }
            }
            assert!(!den.is_zero(), "repeated interpolation point");
            out = out.add(&basis.scale(&(yi / den)));
        }
        out
    }
}

/// a + b sqrt(q) with q carried by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt {
    pub a: Q,
    pub b: Q,
}

impl QSqrt {
    pub fn rat(a: Q) -> Self {
        QSqrt { a, b: Q::zero() }
    }

    pub fn zero() -> Self {
        Self::rat(Q::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, o: &QSqrt) -> QSqrt {
        QSqrt {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    pub fn sub(&self, o: &QSqrt) -> QSqrt {
        QSqrt {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    pub fn mul(&self, o: &QSqrt, qq: u64) -> QSqrt {
        QSqrt {
            a: &self.a * &o.a + &self.b * &o.b * q(qq as i64),
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }

    pub fn scale(&self, c: &Q) -> QSqrt {
        QSqrt {
            a: &self.a * c,
            b: &self.b * c,
        }
    }

    /// sqrt(q)^k.
    pub fn sqrt_pow(qq: u64, k: i64) -> QSqrt {
        let whole = qpow(&q(qq as i64), k.div_euclid(2));
        if k.rem_euclid(2) == 0 {
            QSqrt::rat(whole)
        } else {
            QSqrt {
                a: Q::zero(),
                b: whole,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::qf;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let p = RatPoly::from_ints(&[1, 3]);
        assert_eq!(p.eval(&qf(1, 4)), qf(7, 4));
        assert_eq!(p.deriv().eval(&qf(1, 4)), q(3));
        assert_eq!(RatPoly::one().deriv(), RatPoly::new(vec![]));
        let g = RatPoly::from_ints(&[1, -1]);
        let s = RatPoly::one().series_div(&g, 4);
        assert!(s.iter().all(|c| c == &Q::one()));
        assert_eq!(RatPoly::from_ints(&[1, 2, 0, 0]).degree(), Some(1));
    }

    #[test]
    fn sqrt_powers() {
        let s = QSqrt::sqrt_pow(3, 1);
        assert_eq!(s.mul(&s, 3), QSqrt::rat(q(3)));
        assert_eq!(QSqrt::sqrt_pow(3, -2), QSqrt::rat(qf(1, 3)));
        assert_eq!(QSqrt::sqrt_pow(3, -1).mul(&QSqrt::sqrt_pow(3, 1), 3), QSqrt::rat(q(1)));
    }

    proptest! {
        #[test]
        fn chain_rule_for_rescaling(c in prop::collection::vec(-20i64..20, 1..7), p in prop::sample::select(vec![2i64, 3, 5, 7]), xn in -5i64..5) {
            let f = RatPoly::from_ints(&c);
            let s = qf(1, p * p);
            let x = qf(xn, 3);
            // d/dX F(sX) = s F'(sX)
            let lhs = f.rescale(&s).deriv().eval(&x);
            let rhs = &s * f.deriv().eval(&(&s * &x));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn product_evaluates_pointwise(a in prop::collection::vec(-9i64..9, 1..5), b in prop::collection::vec(-9i64..9, 1..5), xn in -4i64..4) {
            let (fa, fb) = (RatPoly::from_ints(&a), RatPoly::from_ints(&b));
            let x = qf(xn, 5);
            prop_assert_eq!(fa.mul(&fb).eval(&x), fa.eval(&x) * fb.eval(&x));
        }

        #[test]
        fn division_round_trips(a in prop::collection::vec(-9i64..9, 1..7), b in prop::collection::vec(-9i64..9, 1..4)) {
            let (fa, fb) = (RatPoly::from_ints(&a), RatPoly::from_ints(&b));
            prop_assume!(!fb.is_zero());
            let (quo, r) = fa.div_rem(&fb);
            prop_assert_eq!(quo.mul(&fb).add(&r), fa);
            prop_assert!(r.is_zero() || r.degree() < fb.degree());
        }

        #[test]
        fn interpolation_recovers(c in prop::collection::vec(-30i64..30, 1..6)) {
            let f = RatPoly::from_ints(&c);
            let xs: Vec<Q> = (0..c.len() as i64).map(|k| qf(1, 3i64.pow(k as u32 + 1))).collect();
            let ys: Vec<Q> = xs.iter().map(|x| f.eval(x)).collect();
            prop_assert_eq!(RatPoly::interpolate(&xs, &ys), f);
        }
    }
}
