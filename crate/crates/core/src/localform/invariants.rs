use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::hasse::{diagonalize_rational, eta_of_diag, nonresidue, xi_of_class, Place};
use super::matrix::HalfIntMat;
use crate::error::{Error, Result};
use crate::exactnum::{
    fundamental_discriminant, is_prime, kronecker_symbol, ord_int, ord_q, prime_divisors, q,
    qi, qpow, Q,
};

/// One entry u·p^a of a p-adic diagonal form, u ∈ {1, n} with n a fixed nonresidue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OddDiagEntry {
    pub residue: bool,
    pub exponent: u32,
}

impl OddDiagEntry {
    pub fn value(&self, p: u64) -> Q {
        let u = if self.residue { 1 } else { nonresidue(p) };
        q(u) * qpow(&q(p as i64), self.exponent as i64)
    }
}

fn unit_is_residue(x: &Q, p: u64) -> bool {
    let k = ord_q(x, p);
    let u = x / qpow(&q(p as i64), k);
    kronecker_symbol(&(u.numer() * u.denom()), p as i64) == 1
}

/// Canonical Jordan diagonalization of T over Z_p for odd p.
///
/// Each block of equal exponent r is normalized to <1,...,1,δ>·p^a where δ is
/// the determinant class of the block.
pub fn diagonalize_odd(t: &HalfIntMat, p: u64) -> Result<Vec<OddDiagEntry>> {
    if p == 2 || !is_prime(p) {
        return Err(Error::BadPrime(p, "diagonalize_odd needs an odd prime"));
    }
    if t.det2().is_zero() {
        return Err(Error::Singular);
    }
    let n = t.size();
    let mut a = t.gram();
    let ord = |x: &Q| if x.is_zero() { i64::MAX } else { ord_q(x, p) };
    let mut diag: Vec<Q> = Vec::with_capacity(n);
    for k in 0..n {
        let mut best = (i64::MAX, k, k);
        for i in k..n {
            for j in i..n {
                let o = ord(&a[i][j]);
                let better = o < best.0 || (o == best.0 && i == j && best.1 != best.2);
                if better {
                    best = (o, i, j);
                }
            }
        }
        let (_, i, j) = best;
        if i != j {
            // minimum only off the diagonal: e_i <- e_i + e_j has norm of the same order
            for r in 0..n {
                let v = a[r][j].clone();
                a[r][i] += v;
            }
            for c in 0..n {
                let v = a[j][c].clone();
                a[i][c] += v;
            }
        }
        a.swap(k, i);
        for row in a.iter_mut() {
            row.swap(k, i);
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
        diag.push(piv);
    }
    let mut raw: Vec<(i64, bool)> = diag
        .iter()
        .map(|x| (ord_q(x, p), unit_is_residue(x, p)))
        .collect();
    raw.sort_by_key(|e| e.0);
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    while i < raw.len() {
        let mut j = i;
        let mut parity = true;
        while j < raw.len() && raw[j].0 == raw[i].0 {
            parity ^= !raw[j].1;
            j += 1;
        }
        for l in i..j {
            let exponent = raw[l].0 as u32;
            let residue = if l + 1 == j { parity } else { true };
            out.push(OddDiagEntry { residue, exponent });
        }
        i = j;
    }
    Ok(out)
}

/// Per-prime invariants of a half-integral form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalInvariants {
    pub p: u64,
    #[serde(serialize_with = "ser_bigint")]
    pub d_t: BigInt,
    pub ord_d: u32,
    pub cond_ord: u32,
    pub e: u32,
    pub xi: i8,
    pub eta: i8,
    pub chi_trivial: bool,
}

fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// η of the quadratic space (Q_v^g, T).
pub fn eta(t: &HalfIntMat, v: Place) -> Result<i8> {
    let d = diagonalize_rational(&t.gram())?;
    Ok(eta_of_diag(&d, v))
}

pub fn local_invariants(t: &HalfIntMat, p: u64) -> Result<LocalInvariants> {
    if !is_prime(p) {
        return Err(Error::BadPrime(p, "not a prime"));
    }
    let det2 = t.det2();
    if det2.is_zero() {
        return Err(Error::Singular);
    }
    let g = t.size();
    let d_t = t.d_t();
    let ord_d = ord_int(&d_t, p);
    let fd = fundamental_discriminant(&d_t);
    let cond_ord = ord_int(&fd, p);
    let xi = xi_of_class(&qi(&d_t), Place::Finite(p));
    debug_assert_eq!(xi, kronecker_symbol(&fd, p as i64));
    let e = if g % 2 == 0 { ord_d - cond_ord } else { ord_d };
    Ok(LocalInvariants {
        p,
        d_t,
        ord_d,
        cond_ord,
        e,
        xi,
        eta: eta(t, Place::Finite(p))?,
        chi_trivial: xi == 1,
    })
}

/// Primes p with η_p(T) = -1, for positive definite T.
pub fn diff_set(t: &HalfIntMat) -> Result<Vec<u64>> {
    if !t.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let d = diagonalize_rational(&t.gram())?;
    let mut cands = prime_divisors(&(t.det2() * 2));
    cands.sort_unstable();
    Ok(cands
        .into_iter()
        .filter(|&p| eta_of_diag(&d, Place::Finite(p)) == -1)
        .collect())
}

/// Coherence of a collection of local spaces of dimension m over a field of
/// degree d, given η at the finite primes (absent primes count as +1).
pub fn coherence_check(m: u64, d: u64, etas: &BTreeMap<u64, i8>) -> bool {
    let prod: i8 = etas.values().product();
    let exp = if m % 2 == 1 {
        d * (m * m - 1) / 8
    } else {
        d * m * m.saturating_sub(2) / 8
    };
    let sign: i8 = if exp % 2 == 0 { 1 } else { -1 };
    sign * prod == 1
}

/// True iff D_T is a square, i.e. χ_T is the trivial character.
pub fn chi_trivial_global(t: &HalfIntMat) -> bool {
    fundamental_discriminant(&t.d_t()).is_one()
}

/// ξ of the diagonal form diag[t_1..t_i] (i even).
pub fn xi_diag(diag: &[Q], v: Place) -> i8 {
    let i = diag.len();
    let prod = diag.iter().fold(q(1), |a, x| a * x);
    let delta = if (i / 2) % 2 == 1 { -prod } else { prod };
    xi_of_class(&delta, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localform::hasse::{hasse, is_square_qv};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn inv(t: &HalfIntMat, p: u64) -> LocalInvariants {
        local_invariants(t, p).unwrap()
    }

    #[test]
    fn unimodular_identity() {
        let t = HalfIntMat::diag(&[1, 1, 1, 1]);
        for p in [3, 5, 7] {
            let r = inv(&t, p);
            assert!(r.chi_trivial);
            assert_eq!((r.xi, r.e, r.eta), (1, 0, 1));
        }
    }

    #[test]
    fn spec_examples() {
        let t = HalfIntMat::diag(&[1, 1, 3, 3]);
        let r = inv(&t, 3);
        assert!(r.chi_trivial);
        assert_eq!((r.e, r.eta), (2, -1));
        let t = HalfIntMat::diag(&[1, 1, 1, 3]);
        let r = inv(&t, 3);
        assert_eq!((r.cond_ord, r.xi, r.e), (1, 0, 0));
        assert_eq!(r.d_t, BigInt::from(48));
    }

    #[test]
    fn anisotropy_of_1133_by_search() {
        // a zero with x1 or x2 a unit would lift by Hensel; none exists mod 9
        let m = 9i64;
        let mut found = false;
        'o: for a in 0..m {
            for b in 0..m {
                for c in 0..3 {
                    for d in 0..3 {
                        if a % 3 == 0 && b % 3 == 0 {
                            continue;
                        }
                        if (a * a + b * b + 3 * c * c + 3 * d * d) % m == 0 {
                            found = true;
                            break 'o;
                        }
                    }
                }
            }
        }
        assert!(!found);
    }

    #[test]
    fn diff_examples() {
        assert!(diff_set(&HalfIntMat::diag(&[1, 1, 1, 1])).unwrap() == vec![2]);
        assert_eq!(diff_set(&HalfIntMat::diag(&[1, 1, 3, 3])).unwrap(), vec![3]);
        assert!(diff_set(&HalfIntMat::hyperbolic(2)).is_err());
        let split = HalfIntMat::from_twice(vec![
            vec![2, 1, 0, 0],
            vec![1, 2, 0, 0],
            vec![0, 0, 2, 1],
            vec![0, 0, 1, 2],
        ])
        .unwrap();
        assert_eq!(diff_set(&split).unwrap(), vec![3]);
    }

    #[test]
    fn coherence_examples() {
        let mut m = BTreeMap::new();
        assert!(!coherence_check(4, 1, &m));
        m.insert(3, -1);
        assert!(coherence_check(4, 1, &m));
        assert!(!coherence_check(3, 1, &BTreeMap::new()));
    }

    #[test]
    fn diagonalize_odd_examples() {
        let d = diagonalize_odd(&HalfIntMat::diag(&[1, 3]), 3).unwrap();
        assert_eq!(
            d,
            vec![
                OddDiagEntry { residue: true, exponent: 0 },
                OddDiagEntry { residue: true, exponent: 1 }
            ]
        );
        let t = HalfIntMat::parse_json("[[2,1],[1,2]]").unwrap();
        let d = diagonalize_odd(&t, 5).unwrap();
        assert!(d.iter().all(|e| e.exponent == 0));
        let vals: Vec<Q> = d.iter().map(|e| e.value(5)).collect();
        let det = &vals[0] * &vals[1];
        assert!(is_square_qv(&(det * Q::new(4.into(), 3.into())), Place::Finite(5)));
        assert!(diagonalize_odd(&t, 2).is_err());
    }

    fn random_form(rng: &mut ChaCha8Rng, g: usize) -> HalfIntMat {
        loop {
            let mut b = vec![vec![0i64; g]; g];
            for i in 0..g {
                b[i][i] = 2 * rng.gen_range(1..20);
                for j in 0..i {
                    let x = rng.gen_range(-6..=6);
                    b[i][j] = x;
                    b[j][i] = x;
                }
            }
            let t = HalfIntMat::from_twice(b).unwrap();
            if t.is_positive_definite() {
                return t;
            }
        }
    }

    #[test]
    fn odd_diagonalization_preserves_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let g = rng.gen_range(1..=4);
            let t = random_form(&mut rng, g);
            let rat = diagonalize_rational(&t.gram()).unwrap();
            for p in [3u64, 5, 7] {
                let d = diagonalize_odd(&t, p).unwrap();
                let vals: Vec<Q> = d.iter().map(|e| e.value(p)).collect();
                let a: Q = rat.iter().fold(q(1), |x, y| x * y);
                let b: Q = vals.iter().fold(q(1), |x, y| x * y);
                assert!(is_square_qv(&(a * b), Place::Finite(p)));
                assert_eq!(hasse(&rat, Place::Finite(p)), hasse(&vals, Place::Finite(p)));
                let total: u32 = d.iter().map(|e| e.exponent).sum();
                assert_eq!(total, ord_int(&t.det2(), p));
                assert!(d.windows(2).all(|w| w[0].exponent <= w[1].exponent));
            }
        }
    }

    #[test]
    fn diff_parity_for_trivial_character() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = 0;
        while seen < 40 {
            let t = random_form(&mut rng, 4);
            if !chi_trivial_global(&t) {
                continue;
            }
            seen += 1;
            assert_eq!(diff_set(&t).unwrap().len() % 2, 1, "{t}");
        }
    }

    #[test]
    fn global_forms_are_coherent() {
        // the finite η's of a positive definite rational form satisfy the parity criterion
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g = rng.gen_range(1..=4);
            let t = random_form(&mut rng, g);
            let mut etas = BTreeMap::new();
            for p in prime_divisors(&(t.det2() * 2)) {
                etas.insert(p, eta(&t, Place::Finite(p)).unwrap());
            }
            assert!(coherence_check(g as u64, 1, &etas), "{t}");
        }
    }
}
