//! Numerical spectra of H_ℓ and J_ℓ on a truncated Fock space: joint
//! eigenvalues (λ, μ), sign continuation in g, level crossings, GAA curves
//! and samples of the surface y² = p_ℓ(x; g, Δ).

mod eigen;
mod fock;
mod joint;
mod sweep;

pub use eigen::{jacobi_eigen, lowest_eigenpairs, sym_eig, Eigen, JACOBI_MAX_SWEEPS, JACOBI_TOL};
pub use fock::{
    commutator_defect, hamiltonian_matrix, j_matrix, j_operator, trusted_cut, CompiledOperator,
    FockOperator, DEFAULT_DIM_FOCK,
};
pub use joint::{
    joint_pairs, joint_spectrum, spectral_lower_bound, zero_coupling_levels, zero_coupling_mu,
    zero_coupling_orientation, zero_coupling_q, zero_coupling_radius, zero_coupling_spin_values,
    JointSample, JointSpectrum, PAt, ZeroCouplingLevel,
};
pub use sweep::{
    gaa_curves, gaa_energy, nearest_baseline, surface_samples, sweep, sweep_with, uniform_grid,
    AvoidedCrossing, Crossing, CrossingKind, GaaRow, SignAmbiguity, SpectralSweep, SurfaceKind,
    SurfacePoint,
};

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectraError {
    #[error("dim_fock = {dim_fock} is below the minimum {min}")]
    InvalidDimension { dim_fock: usize, min: usize },
    #[error("n_levels = {n_levels} exceeds dim_fock/2 for dim_fock = {dim_fock}")]
    TooManyLevels { n_levels: usize, dim_fock: usize },
    #[error("eigensolver did not converge after {sweeps} iterations")]
    NoConvergence { sweeps: usize },
    #[error("no tabulated J for ℓ = {0}")]
    Unsupported(u32),
    #[error("invalid g grid: {0}")]
    InvalidGrid(String),
}

/// Numerical knobs; the defaults are the documented ones.
#[derive(Debug, Clone, Serialize)]
pub struct SpectraConfig {
    pub dim_fock: usize,
    pub n_levels: usize,
    /// Recompute at 2·dim_fock and flag levels whose λ or μ move.
    pub check_convergence: bool,
    pub stability_tol: f64,
    /// Relative gap below which levels are treated as one degenerate group.
    pub cluster_tol: f64,
    /// A crossing is accepted when the refined gap is below this.
    pub crossing_tol: f64,
    /// |μ| below this during continuation is a sign ambiguity.
    pub sign_tol: f64,
    /// Two matching candidates closer than this trigger step halving.
    pub match_ambiguity: f64,
    pub max_halvings: u32,
    /// Avoided crossings are reported when the minimal gap is below this.
    pub avoided_max_gap: f64,
    /// g-tolerance of crossing refinement.
    pub root_tol: f64,
}

impl Default for SpectraConfig {
    fn default() -> Self {
        SpectraConfig {
            dim_fock: DEFAULT_DIM_FOCK,
            n_levels: 20,
            check_convergence: true,
            stability_tol: 1e-8,
            cluster_tol: 1e-7,
            crossing_tol: 1e-8,
            sign_tol: 1e-6,
            match_ambiguity: 1e-4,
            max_halvings: 8,
            avoided_max_gap: 1e-2,
            root_tol: 1e-12,
        }
    }
}
