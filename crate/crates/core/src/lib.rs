//! Exact and numerical tools for the hidden symmetry operators of the
//! integer-biased asymmetric quantum Rabi model
//! H = a†a + Δσ_z + gσ_x(a + a†) + (ℓ/2)σ_x.

pub mod constraint_poly;
pub mod elliptic_geometry;
pub mod exact_algebra;
pub mod spectra_numeric;
pub mod symmetry_poly;
pub mod tables;
pub mod weyl_operator;
