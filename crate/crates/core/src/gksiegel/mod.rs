//! Gross–Keating data and the Siegel series polynomial F_p^T.

mod brute;
mod datum;
mod onestep;
mod siegelpoly;
mod ternary;

pub use brute::gk_bruteforce;
pub use datum::{egk_truncate, EgkDatum, GkDatum};
pub use onestep::{onestep_from, quaternary_f_onestep, theorem41_check, Theorem41Report};
pub use siegelpoly::{gamma_factor, SiegelPoly};
pub use ternary::{
    anisotropic_ternary, lemma53_value, lemma53_value_corrected, sigma, ternary_f, ThirdSumLimit,
};

use crate::error::Result;
use crate::exactnum::Q;
use crate::localform::{diagonalize_odd, eta_of_diag, xi_diag, HalfIntMat, Place};

/// GK(T) at an odd prime: the sorted orders of a diagonalization.
pub fn gk_odd(t: &HalfIntMat, p: u64) -> Result<GkDatum> {
    let d = diagonalize_odd(t, p)?;
    GkDatum::new(d.iter().map(|e| e.exponent).collect())
}

/// Naive EGK(T) at an odd prime from the canonical Jordan diagonalization.
pub fn egk_odd(t: &HalfIntMat, p: u64) -> Result<EgkDatum> {
    let d = diagonalize_odd(t, p)?;
    let vals: Vec<Q> = d.iter().map(|e| e.value(p)).collect();
    let v = Place::Finite(p);
    let eps: Vec<i8> = (1..=vals.len())
        .map(|i| {
            if i % 2 == 1 {
                eta_of_diag(&vals[..i], v)
            } else {
                xi_diag(&vals[..i], v)
            }
        })
        .collect();
    EgkDatum::new(d.iter().map(|e| e.exponent).collect(), eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_examples() {
        assert_eq!(gk_odd(&HalfIntMat::diag(&[1, 3]), 3).unwrap().as_slice(), &[0, 1]);
        assert_eq!(
            gk_odd(&HalfIntMat::diag(&[1, 1, 3, 3]), 3).unwrap().as_slice(),
            &[0, 0, 1, 1]
        );
        assert_eq!(gk_odd(&HalfIntMat::diag(&[1, 1, 1]), 5).unwrap().as_slice(), &[0, 0, 0]);
        assert!(gk_odd(&HalfIntMat::diag(&[1, 1]), 2).is_err());
    }

    #[test]
    fn egk_examples() {
        let h = egk_odd(&HalfIntMat::diag(&[1, 1, 3, 3]), 3).unwrap();
        assert_eq!(h.eps, vec![1, -1, -1, 1]);
        let h = egk_odd(&HalfIntMat::diag(&[1, 1, 1]), 5).unwrap();
        assert_eq!(h.eps[1], 1);
        assert_eq!(egk_odd(&HalfIntMat::diag(&[7]), 3).unwrap().eps, vec![1]);
    }
}
