//! Exact operator algebra over Q[g, Δ]: the parity-extended Weyl algebra,
//! 2×2 operator matrices, the symmetry operators J_ℓ and their action on
//! Juddian solutions in the Bargmann picture.

mod bargmann;
mod derive;
mod element;
mod matrix;

pub use bargmann::{
    action_constants, action_constants_with, bargmann_apply, build_juddian, eigen_residual,
    fock_coefficients, fock_vector, juddian_points, k_values, parity_solutions,
    parity_solutions_with, scalar_fit, ActionConstants, JuddianFunction, JuddianKind,
    ParitySolutions, Scalar, CONSTRAINT_TOL, FOCK_LEN, PRODUCT_TOL, PROPORTIONALITY_TOL,
};
pub use derive::{compare_with_table, derive_j, proportionality, DerivedJ, TableComparison};

pub use element::{
    coeff_vars, parse_weyl, weyl_mul, CoeffRecord, WeylBuilder, WeylElement, Word, WordRecord,
};
pub use matrix::{
    build_h, build_j, build_j_original, commutation_report, gamma_from_beta, j_at_zero_coupling,
    j_entries, square_report, verify_commutation, verify_square, x_coefficients, IdentityReport,
    Mat2Weyl, Picture,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeylError {
    #[error("no tabulated operator for ℓ = {0} (table covers ℓ ≤ 6; use derive_j)")]
    Unsupported(u32),
    #[error("solution space at a specialization has dimension {dim} (expected 1)")]
    NullspaceDimension { dim: usize },
    #[error("derived coefficients failed verification: {0}")]
    Reconstruction(String),
    #[error("constraint residual {residual:e} exceeds tolerance")]
    ConstraintViolated { residual: f64 },
    #[error("image mixes e^(gz) and e^(-gz) parts")]
    MixedExponential,
    #[error("image is not proportional (relative residual {residual:e})")]
    NotProportional { residual: f64 },
}
