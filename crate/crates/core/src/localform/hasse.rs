//! Hilbert symbols, Hasse invariants and the normalized invariant η over Q_v.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{kronecker_symbol, ord_int, q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(u64),
    Real,
}

/// Integer in the square class of a nonzero rational.
fn class_int(x: &Q) -> BigInt {
    assert!(!x.is_zero(), "square class of zero");
    x.numer() * x.denom()
}

/// Split x = p^k u with u prime to p.
fn split(x: &BigInt, p: u64) -> (u32, BigInt) {
    let k = ord_int(x, p);
    (k, x / num_traits::pow(BigInt::from(p), k as usize))
}

fn mod8(u: &BigInt) -> u8 {
    u.mod_floor(&BigInt::from(8)).to_u8().unwrap()
}

pub fn hilbert_symbol(a: &Q, b: &Q, v: Place) -> i8 {
    let (a, b) = (class_int(a), class_int(b));
    match v {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Finite(2) => {
            let (alpha, u) = split(&a, 2);
            let (beta, w) = split(&b, 2);
            let eps = |x: u8| ((x - 1) / 2) % 2;
            let omega = |x: u8| ((x as u32 * x as u32 - 1) / 8) % 2;
            let (u8_, w8) = (mod8(&u), mod8(&w));
            let e = eps(u8_) as u32 * eps(w8) as u32
                + alpha * omega(w8)
                + beta * omega(u8_);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Finite(p) => {
            let (alpha, u) = split(&a, p);
            let (beta, w) = split(&b, p);
            let pi = p as i64;
            let mut s: i8 = if (alpha as u64 * beta as u64 * ((p - 1) / 2)) % 2 == 0 {
                1
            } else {
                -1
            };
            if beta % 2 == 1 {
                s *= kronecker_symbol(&u, pi);
            }
            if alpha % 2 == 1 {
                s *= kronecker_symbol(&w, pi);
            }
            s
        }
    }
}

pub fn is_square_qv(x: &Q, v: Place) -> bool {
    let n = class_int(x);
    match v {
        Place::Real => n.is_positive(),
        Place::Finite(p) => {
            let (k, u) = split(&n, p);
            if k % 2 == 1 {
                return false;
            }
            if p == 2 {
                mod8(&u) == 1
            } else {
                kronecker_symbol(&u, p as i64) == 1
            }
        }
    }
}

/// Smallest quadratic nonresidue mod an odd prime.
pub fn nonresidue(p: u64) -> i64 {
    (2..p as i64)
        .find(|&n| kronecker_symbol(&BigInt::from(n), p as i64) == -1)
        .expect("odd prime has a nonresidue")
}

/// Representatives of Q_v^x / (Q_v^x)^2.
pub fn square_classes(v: Place) -> Vec<Q> {
    match v {
        Place::Real => vec![q(1), q(-1)],
        Place::Finite(2) => [1, 3, 5, 7, 2, 6, 10, 14].iter().map(|&x| q(x)).collect(),
        Place::Finite(p) => {
            let n = nonresidue(p);
            let pi = p as i64;
            vec![q(1), q(n), q(pi), q(n * pi)]
        }
    }
}

/// Unnormalized Hasse invariant of a diagonal form: product of (a_i, a_j) over i < j.
pub fn hasse(diag: &[Q], v: Place) -> i8 {
    let mut s = 1;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            s *= hilbert_symbol(&diag[i], &diag[j], v);
        }
    }
    s
}

fn product(diag: &[Q]) -> Q {
    diag.iter().fold(q(1), |acc, x| acc * x)
}

/// (-1)^{m(m-1)/2} det, the class defining χ^V.
pub fn signed_det(diag: &[Q]) -> Q {
    let m = diag.len();
    let d = product(diag);
    if (m * (m.saturating_sub(1)) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Isometry test for diagonal forms over Q_v: dimension, det class and Hasse invariant.
pub fn isometric(a: &[Q], b: &[Q], v: Place) -> bool {
    a.len() == b.len()
        && is_square_qv(&(product(a) * product(b)), v)
        && hasse(a, v) == hasse(b, v)
}

/// ξ for a square class δ: 1 if square, -1 if Q_v(sqrt δ) is unramified, 0 if ramified.
pub fn xi_of_class(delta: &Q, v: Place) -> i8 {
    if is_square_qv(delta, v) {
        return 1;
    }
    match v {
        Place::Real => 0,
        Place::Finite(p) => {
            let (k, u) = split(&class_int(delta), p);
            if k % 2 == 1 {
                0
            } else if p == 2 {
                if mod8(&u) == 5 {
                    -1
                } else {
                    0
                }
            } else {
                -1
            }
        }
    }
}

fn hyperbolic_block(k: usize) -> Vec<Q> {
    (0..k).flat_map(|_| [q(1), q(-1)]).collect()
}

/// Normalized Hasse invariant η of a nondegenerate diagonal form.
pub fn eta_of_diag(diag: &[Q], v: Place) -> i8 {
    let m = diag.len();
    assert!(m > 0);
    let h = hasse(diag, v);
    let d = product(diag);
    if m % 2 == 1 {
        // η = 1 iff V is a line plus a split space
        let k = (m - 1) / 2;
        let c = if k % 2 == 1 { -d } else { d };
        let mut model = vec![c];
        model.extend(hyperbolic_block(k));
        return if hasse(&model, v) == h { 1 } else { -1 };
    }
    let delta = signed_det(diag);
    if is_square_qv(&delta, v) {
        let model = hyperbolic_block(m / 2);
        return if hasse(&model, v) == h { 1 } else { -1 };
    }
    // V = split ⊥ c·N_{E/Q_v} with χ^V(c) = η
    for c in square_classes(v) {
        let mut model = hyperbolic_block((m - 2) / 2);
        model.push(c.clone());
        model.push(-&c * &delta);
        if hasse(&model, v) == h {
            return hilbert_symbol(&c, &delta, v);
        }
    }
    unreachable!("some scaled norm form matches every space with nontrivial character")
}

/// Rational diagonalization of a symmetric matrix by congruence.
pub fn diagonalize_rational(m: &[Vec<Q>]) -> Result<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            let j = (k + 1..n)
                .find(|&j| !a[k][j].is_zero())
                .ok_or(Error::Singular)?;
            if !a[j][j].is_zero() {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else {
                // e_k <- e_k + e_j
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
            }
        }
        let piv = a[k][k].clone();
        for r in k + 1..n {
            let f = &a[r][k] / &piv;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = &f * &a[k][c];
                a[r][c] -= v;
            }
            for rr in k..n {
                let v = &f * &a[rr][k];
                a[rr][r] -= v;
            }
        }
        out.push(piv);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::qf;
    use proptest::prelude::*;

    const PLACES: [Place; 6] = [
        Place::Real,
        Place::Finite(2),
        Place::Finite(3),
        Place::Finite(5),
        Place::Finite(7),
        Place::Finite(11),
    ];

    fn brute_isotropic(a: i64, b: i64, p: i64) -> bool {
        // ax^2 + by^2 = z^2 nontrivially solvable in Q_p, tested mod p^k with a primitive vector
        let k = if p == 2 { 5 } else { 3 };
        let m = p.pow(k);
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if x % p == 0 && y % p == 0 && z % p == 0 {
                        continue;
                    }
                    if (a * x * x + b * y * y - z * z).rem_euclid(m) == 0 {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Finite(2)), -1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-1), Place::Real), -1);
        assert_eq!(hilbert_symbol(&q(2), &q(5), Place::Finite(3)), 1);
        let prod: i8 = PLACES
            .iter()
            .map(|&v| hilbert_symbol(&q(2), &q(3), v))
            .product();
        assert_eq!(prod, 1);
        assert_eq!(hilbert_symbol(&q(-1), &q(-3), Place::Finite(3)), -1);
    }

    #[test]
    fn hilbert_matches_isotropy_search() {
        for p in [2i64, 3, 5] {
            for a in [1i64, -1, 2, 3, 5, 6, -3, 10] {
                for b in [1i64, -1, 2, 3, 5, 7, -2, 15] {
                    let iso = brute_isotropic(a, b, p);
                    let h = hilbert_symbol(&q(a), &q(b), Place::Finite(p as u64));
                    assert_eq!(h == 1, iso, "({a},{b})_{p}");
                }
            }
        }
    }

    #[test]
    fn eta_of_split_and_quaternion_forms() {
        for v in PLACES {
            assert_eq!(eta_of_diag(&[q(1), q(-1), q(1), q(-1)], v), 1);
            assert_eq!(eta_of_diag(&[q(5)], v), 1);
        }
        // norm form of (-1,-3) is <1,1,3,3>: ramified at 3
        assert_eq!(eta_of_diag(&[q(1), q(1), q(3), q(3)], Place::Finite(3)), -1);
        assert_eq!(eta_of_diag(&[q(1), q(1), q(3), q(3)], Place::Finite(2)), 1);
        assert_eq!(eta_of_diag(&[q(1), q(1), q(1), q(1)], Place::Finite(2)), -1);
        assert_eq!(eta_of_diag(&[q(1), q(1), q(1), q(1)], Place::Real), -1);
        // anisotropic ternary <1,1,1> over Q_2
        assert_eq!(eta_of_diag(&[q(1), q(1), q(1)], Place::Finite(2)), -1);
        assert_eq!(eta_of_diag(&[q(1), q(1), q(1)], Place::Finite(3)), 1);
    }

    #[test]
    fn odd_eta_detects_anisotropic_ternary() {
        // ternary is anisotropic iff η = -1
        for p in [2i64, 3, 5] {
            for a in [1i64, -1, 2, 3, 5, 6, -3] {
                for b in [1i64, -1, 2, 3, 5, 7, -2] {
                    // <a, b, -1> isotropic iff (a,b) = 1
                    let eta = eta_of_diag(&[q(a), q(b), q(-1)], Place::Finite(p as u64));
                    assert_eq!(eta == 1, brute_isotropic(a, b, p), "<{a},{b},-1> at {p}");
                }
            }
        }
    }

    #[test]
    fn rational_diagonalization_preserves_invariants() {
        let m = vec![
            vec![q(0), qf(1, 2), q(0)],
            vec![qf(1, 2), q(0), q(1)],
            vec![q(0), q(1), q(3)],
        ];
        let d = diagonalize_rational(&m).unwrap();
        let det: Q = d.iter().fold(q(1), |a, x| a * x);
        assert_eq!(det, qf(-3, 4));
        assert!(diagonalize_rational(&[vec![q(0), q(0)], vec![q(0), q(1)]]).is_err());
    }

    fn nonzero() -> impl Strategy<Value = i64> {
        prop_oneof![-60i64..-1, 1i64..60]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn bilinear_and_product_formula(a in nonzero(), b in nonzero(), c in nonzero()) {
            let (qa, qb, qc) = (q(a), q(b), q(c));
            let mut places: Vec<Place> = vec![Place::Real, Place::Finite(2)];
            for p in crate::exactnum::prime_divisors(&BigInt::from(a * b * c)) {
                if p != 2 { places.push(Place::Finite(p)); }
            }
            let mut prod = 1i8;
            for &v in &places {
                prop_assert_eq!(
                    hilbert_symbol(&(&qa * &qb), &qc, v),
                    hilbert_symbol(&qa, &qc, v) * hilbert_symbol(&qb, &qc, v)
                );
                prod *= hilbert_symbol(&qa, &qb, v);
            }
            prop_assert_eq!(prod, 1);
        }
    }
}
