//! Half-integral matrices and their local invariants.

mod hasse;
mod invariants;
mod matrix;

pub use hasse::{
    diagonalize_rational, eta_of_diag, hasse, hilbert_symbol, is_square_qv, isometric,
    nonresidue, signed_det, square_classes, xi_of_class, Place,
};
pub use invariants::{
    chi_trivial_global, coherence_check, diagonalize_odd, diff_set, eta, local_invariants,
    xi_diag, LocalInvariants, OddDiagEntry,
};
pub use matrix::{bareiss, HalfIntMat};
