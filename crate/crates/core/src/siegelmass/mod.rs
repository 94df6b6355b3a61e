//! Siegel products against the genus of a maximal order in the definite
//! quaternion algebra ramified at p, the mass of that genus and weighted
//! representation averages.

mod factors;
mod family;
mod lattice;
mod quaternion;

pub use factors::{companion_factor, local_f, local_factor, FSource, LocalFactor};
pub use family::{index_p_sublattices, lll_reduce, sublattice_family};
pub use lattice::{automorphism_count, representation_count, vectors_of_norm};
pub use quaternion::{QuatAlgebra, QuatOrder};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{prime_divisors, q, qf, qpow, ser_q, ExactScalar, Q};
use crate::gksiegel::{egk_odd, egk_truncate, ternary_f, EgkDatum, SiegelPoly, ThirdSumLimit};
use crate::localform::{chi_trivial_global, diff_set, local_invariants, HalfIntMat};

/// The lattice (O_p, Nrd) of a maximal order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusDescriptor {
    pub p: u64,
    pub gram: HalfIntMat,
    pub dual_index: u64,
    pub diff: Vec<u64>,
}

/// Tabulated maximal order, with closure, discriminant and local invariants checked.
pub fn build_maximal_order(p: u64) -> Result<GenusDescriptor> {
    let order = QuatOrder::maximal(p)?;
    if !order.is_closed()? {
        return Err(Error::Inconsistent(format!("order table for p = {p} is not a ring")));
    }
    let gram = HalfIntMat::from_twice(order.gram_twice()?)?;
    if gram.det2() != BigInt::from(p * p) {
        return Err(Error::Inconsistent(format!("order for p = {p} has det(2S) = {}", gram.det2())));
    }
    let inv = local_invariants(&gram, p)?;
    let diff = diff_set(&gram)?;
    if inv.e != 2 || inv.eta != -1 || diff != vec![p] || !gram.is_positive_definite() {
        return Err(Error::Inconsistent(format!("order for p = {p} has the wrong genus")));
    }
    Ok(GenusDescriptor { p, gram, dual_index: p * p, diff })
}

/// prod_{i in range} π^{i/2} / Γ(i/2) with Γ at half integers expanded.
fn gamma_ratio(range: std::ops::RangeInclusive<u32>) -> ExactScalar {
    let mut coeff = Q::one();
    let mut twice_pi = 0i32;
    for i in range {
        twice_pi += i as i32;
        if i % 2 == 0 {
            // Γ(m) = (m-1)!
            for k in 1..i / 2 {
                coeff /= q(k as i64);
            }
        } else {
            // Γ(i/2) = (i-2)!! / 2^{(i-1)/2} sqrt(π)
            twice_pi -= 1;
            let mut k = i as i64 - 2;
            while k > 1 {
                coeff /= q(k);
                k -= 2;
            }
            coeff *= qpow(&q(2), (i as i64 - 1) / 2);
        }
    }
    assert!(twice_pi % 2 == 0, "half-integral power of π");
    ExactScalar::rational(coeff).mul(&ExactScalar::pi_pow(twice_pi / 2))
}

/// d_∞: rank 4 is Γ-ratio(1..4) / (det(2T)^{1/2} [L*:L]^2), rank 3 is
/// Γ-ratio(2..4) / [L*:L]^{3/2}.
pub fn archimedean_density(rank: usize, t: &HalfIntMat, dual_index: u64) -> Result<ExactScalar> {
    if t.size() != rank {
        return Err(Error::InvalidArgument(format!("rank {rank} density for a size {} target", t.size())));
    }
    if !t.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    match rank {
        4 => {
            let det: u64 = t.det2().try_into().map_err(|_| Error::InvalidArgument("det(2T) too large".into()))?;
            Ok(gamma_ratio(1..=4)
                .mul(&ExactScalar::sqrt_int(det, -1))
                .mul(&ExactScalar::rational(qpow(&q(dual_index as i64), -2))))
        }
        3 => Ok(gamma_ratio(2..=4).mul(&ExactScalar::sqrt_int(dual_index, -3))),
        _ => Err(Error::InvalidArgument(format!("rank {rank}"))),
    }
}

/// α_p(S_p, ·) at the ramified prime: 2(p+1)(1+1/p) for rank 3 and
/// 4 p^{e/2} (p+1)^2 for rank 4.
pub fn ramified_density(rank: usize, p: u64, e: u32) -> Result<Q> {
    let pq = q(p as i64);
    match rank {
        3 => Ok(q(2) * (&pq + q(1)) * (q(1) + qf(1, p as i64))),
        4 if e >= 2 && e % 2 == 0 => Ok(q(4) * qpow(&pq, e as i64 / 2) * (&pq + q(1)) * (&pq + q(1))),
        4 => Err(Error::InvalidArgument(format!("rank 4 ramified density needs even e >= 2, got {e}"))),
        _ => Err(Error::InvalidArgument(format!("rank {rank}"))),
    }
}

/// prod_{q != p} (1 - q^{-2})^2 = ζ(2)^{-2} / (1 - p^{-2})^2 with ζ(2) = π²/6.
fn unramified_euler_product(p: u64) -> ExactScalar {
    let x = Q::one() - qf(1, (p * p) as i64);
    ExactScalar::rational(q(36) / (&x * &x)).mul(&ExactScalar::pi_pow(-4))
}

/// Factor-by-factor record of a Siegel product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiegelProduct {
    pub rank: usize,
    pub p: u64,
    pub archimedean: ExactScalar,
    #[serde(serialize_with = "ser_q")]
    pub constant: Q,
    #[serde(serialize_with = "ser_q")]
    pub ramified: Q,
    pub euler: ExactScalar,
    pub local: Vec<LocalFactor>,
    #[serde(serialize_with = "ser_q")]
    pub value: Q,
}

fn assemble(rank: usize, p: u64, arch: ExactScalar, constant: Q, ramified: Q, local: Vec<LocalFactor>) -> Result<SiegelProduct> {
    let euler = unramified_euler_product(p);
    let mut total = arch.mul(&euler).scale(&(&constant * &ramified));
    for f in &local {
        total = total.scale(&f.value);
    }
    let value = total
        .as_rational()
        .ok_or_else(|| Error::Inconsistent(format!("Siegel product keeps transcendental part {total}")))?;
    Ok(SiegelProduct { rank, p, archimedean: arch, constant, ramified, euler, local, value })
}

fn check_single_diff(t: &HalfIntMat, p: u64) -> Result<()> {
    let d = diff_set(t)?;
    if d != vec![p] {
        return Err(Error::InvalidArgument(format!("Diff(T) = {d:?}, expected [{p}]")));
    }
    Ok(())
}

/// Odd primes dividing det(2T), with 2 always included.
fn relevant_primes(t: &HalfIntMat) -> Vec<u64> {
    let mut ps = prime_divisors(&t.det2());
    if !ps.contains(&2) {
        ps.insert(0, 2);
    }
    ps
}

/// R'(O_p, T) / m'(O_p) for a quaternary T:
/// 2^{-1} d_∞ 2^4 (α_p/2) prod_{q != p} (1 - q^{-2})^2 F_q^T(q^{-2}).
pub fn siegel_product_quaternary(t: &HalfIntMat, p: u64, max_ops: u128) -> Result<SiegelProduct> {
    if t.size() != 4 {
        return Err(Error::InvalidArgument("quaternary target expected".into()));
    }
    check_single_diff(t, p)?;
    if !chi_trivial_global(t) {
        return Err(Error::InvalidArgument("χ_T is not trivial".into()));
    }
    let e = local_invariants(t, p)?.e;
    let arch = archimedean_density(4, t, p * p)?;
    let ramified = ramified_density(4, p, e)? / q(2);
    let mut local = Vec::new();
    for l in relevant_primes(t) {
        if l != p {
            local.push(local_factor(t, l, max_ops)?);
        }
    }
    assemble(4, p, arch, q(8), ramified, local)
}

/// A ternary target: F^{T'}_p at the ramified prime and F^{T'}_q(q^{-2}) elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TernaryTarget {
    pub p: u64,
    pub datum: Option<EgkDatum>,
    pub f_p: SiegelPoly,
    pub local: Vec<LocalFactor>,
}

impl TernaryTarget {
    /// An explicit positive definite ternary B with Diff(B) = {p}.
    pub fn from_matrix(b: &HalfIntMat, p: u64, max_ops: u128) -> Result<Self> {
        if b.size() != 3 {
            return Err(Error::InvalidArgument("ternary target expected".into()));
        }
        if !b.is_positive_definite() {
            return Err(Error::NotPositiveDefinite);
        }
        check_single_diff(b, p)?;
        let (f_p, _) = local_f(b, p, max_ops)?;
        let datum = if p == 2 { None } else { Some(egk_odd(b, p)?) };
        let mut local = Vec::new();
        for l in relevant_primes(b) {
            if l != p {
                local.push(local_factor(b, l, max_ops)?);
            }
        }
        Ok(TernaryTarget { p, datum, f_p, local })
    }

    /// The companion of a quaternary T with Diff(T) = {p}, p odd: the truncated
    /// datum at every odd prime and the value relation at 2.
    pub fn companion(t: &HalfIntMat, p: u64, max_ops: u128) -> Result<Self> {
        if p == 2 {
            return Err(Error::BadPrime(2, "the companion datum uses odd-p Jordan splittings"));
        }
        check_single_diff(t, p)?;
        let h = egk_truncate(&egk_odd(t, p)?)?;
        let f_p = ternary_f(&h, p, ThirdSumLimit::Display)?;
        let mut local = Vec::new();
        for l in relevant_primes(t) {
            if l != p {
                local.push(companion_factor(t, l, max_ops)?);
            }
        }
        Ok(TernaryTarget { p, datum: Some(h), f_p, local })
    }

    /// A bare ternary datum at p, trivial at every other prime.
    pub fn from_datum(h: &EgkDatum, p: u64) -> Result<Self> {
        if h.len() != 3 {
            return Err(Error::InvalidDatum("ternary datum expected".into()));
        }
        let f_p = ternary_f(h, p, ThirdSumLimit::Display)?;
        Ok(TernaryTarget { p, datum: Some(h.clone()), f_p, local: Vec::new() })
    }
}

/// R'(O_p, T') / m'(O_p) for a ternary target:
/// 2^{-1} d_∞ 2^3 α_p prod_{q != p} (1 - q^{-2})^2 F_q^{T'}(q^{-2}).
pub fn siegel_product_ternary(t: &TernaryTarget) -> Result<SiegelProduct> {
    let p = t.p;
    // d_∞ for rank 3 depends on T' only through its rank
    let arch = gamma_ratio(2..=4).mul(&ExactScalar::sqrt_int(p * p, -3));
    assemble(3, p, arch, q(4), ramified_density(3, p, 0)?, t.local.clone())
}

/// m'(O_p) = 1 / (R'(O_p, S_p)/m'(O_p)) since R'(O_p, S_p) = 1.
pub fn mass_maximal_order(p: u64) -> Result<Q> {
    let g = build_maximal_order(p)?;
    let v = siegel_product_quaternary(&g.gram, p, 1 << 20)?.value;
    if v.is_zero() {
        return Err(Error::Inconsistent("zero Siegel product for S_p".into()));
    }
    Ok(Q::one() / v)
}

/// m(O_p) = 2 m'(O_p).
pub fn mass_full(p: u64) -> Result<Q> {
    Ok(q(2) * mass_maximal_order(p)?)
}

/// R(O_p, T) = 2 m'(O_p) R'(O_p, T)/m'(O_p) for a quaternary T.
pub fn rep_average(t: &HalfIntMat, p: u64, max_ops: u128) -> Result<Q> {
    Ok(q(2) * mass_maximal_order(p)? * siegel_product_quaternary(t, p, max_ops)?.value)
}

/// R(O_p, T') for a ternary target.
pub fn rep_average_ternary(t: &TernaryTarget) -> Result<Q> {
    Ok(q(2) * mass_maximal_order(t.p)? * siegel_product_ternary(t)?.value)
}

/// Primes whose maximal-order genus has one class.
pub const CLASS_NUMBER_ONE: [u64; 5] = [2, 3, 5, 7, 13];

/// 2 N(S_p, T) / |O(S_p)|, valid when the genus of S_p has one class.
pub fn rep_average_brute(t: &HalfIntMat, p: u64, max_ops: u128) -> Result<Q> {
    if !CLASS_NUMBER_ONE.contains(&p) {
        return Err(Error::unsupported("brute-force representation average", p));
    }
    let s = build_maximal_order(p)?.gram;
    let aut = automorphism_count(&s, max_ops)?;
    let n = representation_count(&s, t, max_ops)?;
    Ok(q(2) * q(n as i64) / q(aut as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_orders_have_the_right_genus() {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 23, 41, 73, 97] {
            let g = build_maximal_order(p).unwrap();
            assert_eq!(g.gram.det2(), BigInt::from(p * p));
            assert_eq!(g.diff, vec![p]);
        }
        // Hurwitz order: 2S has 2 on the first three diagonal entries
        let g = build_maximal_order(2).unwrap();
        assert_eq!(g.gram.twice()[0][0], 2);
        assert!(build_maximal_order(21).is_err());
    }

    #[test]
    fn gamma_products() {
        // Γ(1/2) = sqrt(π), Γ(3/2) = sqrt(π)/2
        assert_eq!(gamma_ratio(1..=4), ExactScalar::rational(q(2)).mul(&ExactScalar::pi_pow(4)));
        assert_eq!(gamma_ratio(2..=4), ExactScalar::rational(q(2)).mul(&ExactScalar::pi_pow(4)));
        assert_eq!(gamma_ratio(1..=1), ExactScalar::one());
    }

    #[test]
    fn ramified_examples() {
        assert_eq!(ramified_density(3, 3, 0).unwrap(), qf(32, 3));
        assert_eq!(ramified_density(4, 3, 2).unwrap(), q(192));
        assert_eq!(ramified_density(4, 3, 4).unwrap(), q(576));
        assert!(ramified_density(4, 3, 3).is_err());
    }

    #[test]
    fn mass_matches_automorphism_groups() {
        for (p, order) in [(2u64, 1152u64), (3, 288), (5, 72), (7, 32), (13, 8)] {
            let s = build_maximal_order(p).unwrap().gram;
            assert_eq!(automorphism_count(&s, 1 << 24).unwrap(), order, "p={p}");
            if (p - 1) * (p - 1) * order == 1152 {
                assert_eq!(mass_maximal_order(p).unwrap(), qf(1, order as i64));
            }
        }
        assert_eq!(mass_maximal_order(2).unwrap(), qf(1, 1152));
        assert_eq!(mass_full(2).unwrap(), qf(1, 576));
    }

    fn sublattices(p: u64, cols: usize, count: usize, seed: u64) -> Vec<HalfIntMat> {
        use rand::{Rng, SeedableRng};
        let s = build_maximal_order(p).unwrap().gram;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        while out.len() < count {
            let x: Vec<Vec<i64>> = (0..4).map(|_| (0..cols).map(|_| rng.gen_range(-1..=1)).collect()).collect();
            let t = s.transform(&x);
            let small = (0..cols).all(|i| t.twice()[i][i] <= 12);
            let proper = cols == 3 || t.det2() > BigInt::from(p * p);
            if proper && t.det2() != BigInt::zero() && small && diff_set(&t).unwrap() == vec![p] && chi_trivial_global(&t) | (cols == 3) {
                out.push(t);
            }
        }
        out
    }

    #[test]
    fn quaternary_average_matches_enumeration() {
        for (p, seed) in [(2u64, 1u64), (3, 2), (5, 3), (7, 4)] {
            for t in sublattices(p, 4, 4, seed) {
                let brute = rep_average_brute(&t, p, 1 << 24).unwrap();
                assert_eq!(rep_average(&t, p, 1 << 24).unwrap(), brute, "{t} p={p}");
            }
        }
    }

    #[test]
    fn ternary_average_matches_enumeration() {
        for (p, seed) in [(2u64, 5u64), (3, 6), (5, 7), (7, 8)] {
            for b in sublattices(p, 3, 5, seed) {
                let target = TernaryTarget::from_matrix(&b, p, 1 << 24).unwrap();
                let siegel = rep_average_ternary(&target).unwrap();
                let brute = rep_average_brute(&b, p, 1 << 24).unwrap();
                assert_eq!(siegel, brute, "{b} p={p}");
            }
        }
    }

    #[test]
    fn rep_average_of_s_p_is_two() {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 41] {
            let s = build_maximal_order(p).unwrap().gram;
            assert_eq!(rep_average(&s, p, 1 << 20).unwrap(), q(2), "p={p}");
            let prod = siegel_product_quaternary(&s, p, 1 << 20).unwrap();
            assert!(prod.archimedean.pi_exp() == 4 && prod.euler.pi_exp() == -4);
        }
    }
}
