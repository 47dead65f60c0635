//! Truncated Fock-space matrices of 2×2 operator matrices.
//!
//! Basis ordering is spin-major: index s·dim_fock + n for spin s ∈ {0, 1}
//! (σ_z = +1, −1) and photon number n < dim_fock.

use std::sync::OnceLock;

use serde::Serialize;

use super::SpectraError;
use crate::exact_algebra::MultiPoly;
use crate::weyl_operator::{build_h, build_j_original, Mat2Weyl, Picture, Word};

/// Default photon cutoff + 1.
pub const DEFAULT_DIM_FOCK: usize = 201;

#[derive(Debug, Clone, Serialize)]
pub struct FockOperator {
    pub dim_fock: usize,
    pub ell: u32,
    pub g: f64,
    pub delta: f64,
    /// Row-major (2·dim_fock)² entries.
    pub matrix: Vec<f64>,
}

impl FockOperator {
    pub fn zeros(dim_fock: usize, ell: u32, g: f64, delta: f64) -> Self {
        let n = 2 * dim_fock;
        FockOperator {
            dim_fock,
            ell,
            g,
            delta,
            matrix: vec![0.0; n * n],
        }
    }

    /// Matrix side 2·dim_fock.
    pub fn size(&self) -> usize {
        2 * self.dim_fock
    }

    pub fn index(&self, spin: usize, n: usize) -> usize {
        spin * self.dim_fock + n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.size() + j]
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|i| {
                self.matrix[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// uᵀ M v
    pub fn form(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.size();
        let mut acc = 0.0;
        for i in 0..n {
            if u[i] == 0.0 {
                continue;
            }
            let row = &self.matrix[i * n..(i + 1) * n];
            acc += u[i] * row.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
        }
        acc
    }

    pub fn frobenius(&self) -> f64 {
        self.matrix.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// max |M − Mᵀ| over the block of indices with photon number < `cut`.
    pub fn asymmetry(&self, cut: usize) -> f64 {
        let idx = self.interior_indices(cut);
        let mut worst: f64 = 0.0;
        for &i in &idx {
            for &j in &idx {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Spin-major indices whose photon number is below `cut`.
    pub fn interior_indices(&self, cut: usize) -> Vec<usize> {
        let cut = cut.min(self.dim_fock);
        (0..2)
            .flat_map(|s| (0..cut).map(move |n| s * self.dim_fock + n))
            .collect()
    }

    /// Extract a principal sub-block.
    pub fn sub_block(&self, idx: &[usize]) -> Vec<f64> {
        let mut out = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                out.push(self.get(i, j));
            }
        }
        out
    }
}

/// An operator matrix with coefficients still in Q[g, Δ], flattened for
/// repeated numerical evaluation.
#[derive(Debug, Clone)]
pub struct CompiledOperator {
    pub ell: u32,
    /// Range (in photon number) of any word: max |m − n|.
    pub reach: u32,
    terms: Vec<(usize, usize, Word, MultiPoly)>,
}

impl CompiledOperator {
    pub fn new(ell: u32, m: &Mat2Weyl) -> Self {
        let mut terms = Vec::new();
        let mut reach = 0;
        for i in 0..2 {
            for j in 0..2 {
                for (w, c) in m.entries[i][j].terms() {
                    reach = reach.max(w.1.abs_diff(w.2));
                    terms.push((i, j, *w, c.clone()));
                }
            }
        }
        CompiledOperator { ell, reach, terms }
    }

    /// Matrix in the truncated basis; words act exactly on |k⟩ and components
    /// leaving the cutoff are dropped.
    pub fn matrix(&self, g: f64, delta: f64, dim_fock: usize) -> FockOperator {
        let mut op = FockOperator::zeros(dim_fock, self.ell, g, delta);
        let size = op.size();
        for (si, sj, (e, m, n), c) in &self.terms {
            let c = c.eval_f64(&[g, delta]);
            if c == 0.0 {
                continue;
            }
            let (m, n) = (*m as usize, *n as usize);
            for k in n..dim_fock {
                let mid = k - n;
                let out = mid + m;
                if out >= dim_fock {
                    break;
                }
                let mut amp = 1.0;
                for t in mid + 1..=k {
                    amp *= (t as f64).sqrt();
                }
                for t in mid + 1..=out {
                    amp *= (t as f64).sqrt();
                }
                if *e == 1 && out % 2 == 1 {
                    amp = -amp;
                }
                let (r, col) = (si * dim_fock + out, sj * dim_fock + k);
                op.matrix[r * size + col] += c * amp;
            }
        }
        op
    }
}

fn original_h(ell: u32) -> CompiledOperator {
    CompiledOperator::new(ell, &build_h(ell, Picture::Original))
}

fn cached_j(ell: u32) -> Result<&'static CompiledOperator, SpectraError> {
    static CACHE: [OnceLock<CompiledOperator>; 7] = [const { OnceLock::new() }; 7];
    let slot = CACHE
        .get(ell as usize)
        .ok_or(SpectraError::Unsupported(ell))?;
    Ok(slot.get_or_init(|| {
        let j = build_j_original(ell).expect("tabulated for ℓ ≤ 6");
        CompiledOperator::new(ell, &j)
    }))
}

/// H_ℓ = a†a + Δσ_z + gσ_x(a + a†) + (ℓ/2)σ_x.
pub fn hamiltonian_matrix(
    ell: u32,
    g: f64,
    delta: f64,
    dim_fock: usize,
) -> Result<FockOperator, SpectraError> {
    if dim_fock < 4 {
        return Err(SpectraError::InvalidDimension { dim_fock, min: 4 });
    }
    Ok(original_h(ell).matrix(g, delta, dim_fock))
}

/// J_ℓ (ℓ ≤ 6) in the same picture and basis as [`hamiltonian_matrix`]. Only
/// the block with photon numbers below dim_fock − ℓ − 2 is exact.
pub fn j_matrix(
    ell: u32,
    g: f64,
    delta: f64,
    dim_fock: usize,
) -> Result<FockOperator, SpectraError> {
    let min = ell as usize + 4;
    if dim_fock < min {
        return Err(SpectraError::InvalidDimension { dim_fock, min });
    }
    Ok(cached_j(ell)?.matrix(g, delta, dim_fock))
}

/// The compiled J_ℓ used by [`j_matrix`].
pub fn j_operator(ell: u32) -> Result<&'static CompiledOperator, SpectraError> {
    cached_j(ell)
}

/// Photon-number cutoff of the trusted block of J_ℓ.
pub fn trusted_cut(ell: u32, dim_fock: usize) -> usize {
    dim_fock.saturating_sub(ell as usize + 2)
}

/// ‖HJ − JH‖ on the trusted block, relative to ‖H‖·‖J‖ (Frobenius norms).
pub fn commutator_defect(h: &FockOperator, j: &FockOperator, cut: usize) -> f64 {
    let n = h.size();
    let idx = h.interior_indices(cut);
    let mut acc = 0.0;
    for &r in &idx {
        for &c in &idx {
            let mut s = 0.0;
            for k in 0..n {
                s += h.matrix[r * n + k] * j.matrix[k * n + c]
                    - j.matrix[r * n + k] * h.matrix[k * n + c];
            }
            acc += s * s;
        }
    }
    let denom = h.frobenius() * j.frobenius();
    if denom == 0.0 {
        acc.sqrt()
    } else {
        acc.sqrt() / denom
    }
}
