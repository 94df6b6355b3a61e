//! Fixed inputs shared by the benches.

use siegel_core::localform::HalfIntMat;
use siegel_core::siegelmass::build_maximal_order;

/// 2T = diag(2, 2, 6, 6): Diff = {3}, e = 2 at 3.
pub fn diag_1133() -> HalfIntMat {
    HalfIntMat::diag(&[1, 1, 3, 3])
}

/// The maximal-order lattice at p.
pub fn s_p(p: u64) -> HalfIntMat {
    build_maximal_order(p).expect("tabulated order").gram
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_positive() {
        assert!(diag_1133().is_positive_definite());
        assert_eq!(s_p(3).det2(), 9.into());
    }
}
