//! Joint spectra (λ, μ_λ) of (H_ℓ, J_ℓ) on the truncated Fock space, and the
//! closed form of μ at zero coupling.

use std::sync::OnceLock;

use serde::Serialize;

use super::eigen::{jacobi_eigen, lowest_eigenpairs};
use super::fock::{hamiltonian_matrix, j_matrix, FockOperator};
use super::{SpectraConfig, SpectraError};
use crate::exact_algebra::MultiPoly;
use crate::symmetry_poly::{p_from_determinant, p_from_table};
use crate::weyl_operator::{build_j, j_at_zero_coupling, x_coefficients};

fn p_coefficients(ell: u32) -> Vec<MultiPoly> {
    static CACHE: [OnceLock<Vec<MultiPoly>>; 7] = [const { OnceLock::new() }; 7];
    let build = || {
        let p = p_from_table(ell).unwrap_or_else(|_| p_from_determinant(ell));
        x_coefficients(&p.poly)
    };
    match CACHE.get(ell as usize) {
        Some(slot) => slot.get_or_init(build).clone(),
        None => build(),
    }
}

/// p_ℓ(x; g, Δ) as a binary64 polynomial in x, with its absolute-valued
/// companion for rounding scales.
#[derive(Debug, Clone)]
pub struct PAt {
    pub coeffs: Vec<f64>,
    abs: Vec<f64>,
}

impl PAt {
    pub fn new(ell: u32, g: f64, delta: f64) -> Self {
        let cs = p_coefficients(ell);
        PAt {
            coeffs: cs.iter().map(|c| c.eval_f64(&[g, delta])).collect(),
            abs: cs.iter().map(|c| c.eval_abs_f64(&[g, delta])).collect(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    /// max(1, p̂(|x|)) with p̂ the absolute-coefficient polynomial.
    pub fn scale(&self, x: f64) -> f64 {
        self.abs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x.abs() + c)
            .max(1.0)
    }

    /// |μ² − p(λ)| / scale(λ).
    pub fn residual(&self, lambda: f64, mu: f64) -> f64 {
        (mu * mu - self.eval(lambda)).abs() / self.scale(lambda)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct JointSample {
    pub lambda: f64,
    pub mu: f64,
    /// |μ² − p_ℓ(λ)| relative to max(1, p̂_ℓ(|λ|)).
    pub residual: f64,
    pub converged: bool,
    /// |Δλ| and |Δμ| under doubling of dim_fock, when checked.
    pub lambda_drift: Option<f64>,
    pub mu_drift: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JointSpectrum {
    pub ell: u32,
    pub g: f64,
    pub delta: f64,
    pub dim_fock: usize,
    pub samples: Vec<JointSample>,
}

/// −g² − √(Δ² + ℓ²/4) bounds the spectrum of H_ℓ (and of every truncation) from below.
pub fn spectral_lower_bound(ell: u32, g: f64, delta: f64) -> f64 {
    let half = ell as f64 / 2.0;
    -g * g - (delta * delta + half * half).sqrt()
}

/// Joint eigenpairs (λ, μ) of the lowest `count` levels at one truncation.
/// Near-degenerate levels are grouped and J is diagonalized inside each group.
pub fn joint_pairs(
    h: &FockOperator,
    j: &FockOperator,
    count: usize,
    cluster_tol: f64,
) -> Result<Vec<(f64, f64)>, SpectraError> {
    let want = (count + 4).min(h.size());
    let e = lowest_eigenpairs(h, want, spectral_lower_bound(h.ell, h.g, h.delta))?;
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(want);
    let mut start = 0;
    while start < want {
        let mut end = start + 1;
        while end < want
            && e.values[end] - e.values[end - 1] <= cluster_tol * e.values[end].abs().max(1.0)
        {
            end += 1;
        }
        if end - start == 1 {
            let v = &e.vectors[start];
            out.push((e.values[start], j.form(v, v)));
        } else {
            let k = end - start;
            let vs = &e.vectors[start..end];
            let jv: Vec<Vec<f64>> = vs.iter().map(|v| j.matvec(v)).collect();
            let mut m = vec![0.0; k * k];
            for a in 0..k {
                for b in 0..k {
                    let x: f64 = vs[a].iter().zip(&jv[b]).map(|(p, q)| p * q).sum();
                    let y: f64 = vs[b].iter().zip(&jv[a]).map(|(p, q)| p * q).sum();
                    m[a * k + b] = 0.5 * (x + y);
                }
            }
            let small = jacobi_eigen(&m, k)?;
            for (mu, w) in small.values.iter().zip(&small.vectors) {
                let mut u = vec![0.0; vs[0].len()];
                for (c, v) in w.iter().zip(vs) {
                    for (o, x) in u.iter_mut().zip(v) {
                        *o += c * x;
                    }
                }
                out.push((h.form(&u, &u), *mu));
            }
        }
        start = end;
    }
    out.sort_by(|a, b| {
        if (a.0 - b.0).abs() <= cluster_tol * a.0.abs().max(1.0) {
            a.1.total_cmp(&b.1)
        } else {
            a.0.total_cmp(&b.0)
        }
    });
    out.truncate(count);
    Ok(out)
}

fn pairs_at(
    ell: u32,
    g: f64,
    delta: f64,
    dim_fock: usize,
    n: usize,
    cfg: &SpectraConfig,
) -> Result<Vec<(f64, f64)>, SpectraError> {
    let h = hamiltonian_matrix(ell, g, delta, dim_fock)?;
    let j = j_matrix(ell, g, delta, dim_fock)?;
    joint_pairs(&h, &j, n, cfg.cluster_tol)
}

/// Lowest `cfg.n_levels` joint eigenvalues at (g, Δ). With
/// `cfg.check_convergence` every level is recomputed at twice the cutoff and
/// flagged converged when λ and μ move by less than `cfg.stability_tol`
/// (μ relative to √max(1, p̂_ℓ(|λ|))).
pub fn joint_spectrum(
    ell: u32,
    g: f64,
    delta: f64,
    cfg: &SpectraConfig,
) -> Result<JointSpectrum, SpectraError> {
    let n = cfg.n_levels;
    if 2 * n > cfg.dim_fock {
        return Err(SpectraError::TooManyLevels {
            n_levels: n,
            dim_fock: cfg.dim_fock,
        });
    }
    let pairs = pairs_at(ell, g, delta, cfg.dim_fock, n, cfg)?;
    let check = if cfg.check_convergence {
        Some(pairs_at(ell, g, delta, 2 * cfg.dim_fock, n, cfg)?)
    } else {
        None
    };
    let p = PAt::new(ell, g, delta);
    let samples = pairs
        .iter()
        .enumerate()
        .map(|(i, &(lambda, mu))| {
            let residual = p.residual(lambda, mu);
            let (ld, md) = match &check {
                Some(c) => (
                    Some((c[i].0 - lambda).abs()),
                    Some((c[i].1 - mu).abs() / p.scale(lambda).sqrt()),
                ),
                None => (None, None),
            };
            let converged = match (ld, md) {
                (Some(a), Some(b)) => a < cfg.stability_tol && b < cfg.stability_tol,
                _ => true,
            };
            JointSample {
                lambda,
                mu,
                residual,
                converged,
                lambda_drift: ld,
                mu_drift: md,
            }
        })
        .collect();
    Ok(JointSpectrum {
        ell,
        g,
        delta,
        dim_fock: cfg.dim_fock,
        samples,
    })
}

/// q_ℓ(Δ) = √p_ℓ(x; 0, Δ) (p_ℓ does not depend on x at g = 0).
pub fn zero_coupling_q(ell: u32, delta: f64) -> f64 {
    PAt::new(ell, 0.0, delta).eval(0.0).max(0.0).sqrt()
}

/// √(Δ² + ℓ²/4): the spin splitting at g = 0.
pub fn zero_coupling_radius(ell: u32, delta: f64) -> f64 {
    let half = ell as f64 / 2.0;
    (delta * delta + half * half).sqrt()
}

/// Value of the g = 0 spin matrix of J_ℓ (tabulated, Tilde picture) on the
/// upper (+) and lower (−) spin eigenvectors of Δσ_x + (ℓ/2)σ_z.
pub fn zero_coupling_spin_values(ell: u32, delta: f64) -> Result<[f64; 2], SpectraError> {
    let j = build_j(ell).map_err(|_| SpectraError::Unsupported(ell))?;
    let m = j_at_zero_coupling(&j).ok_or(SpectraError::Unsupported(ell))?;
    let at = |i: usize, k: usize| m[i][k].eval_f64(&[0.0, delta]);
    let s = [ell as f64 / 2.0, delta, delta, -(ell as f64) / 2.0];
    let spin = jacobi_eigen(&s, 2)?;
    let val = |v: &[f64]| {
        let mv = [
            at(0, 0) * v[0] + at(0, 1) * v[1],
            at(1, 0) * v[0] + at(1, 1) * v[1],
        ];
        v[0] * mv[0] + v[1] * mv[1]
    };
    Ok([val(&spin.vectors[1]), val(&spin.vectors[0])])
}

/// Orientation sign σ_ℓ of the tabulated J_ℓ: μ_{n,+} = σ_ℓ (−1)ⁿ q_ℓ(Δ).
pub fn zero_coupling_orientation(ell: u32) -> Result<i8, SpectraError> {
    let v = zero_coupling_spin_values(ell, 1.0)?;
    Ok(if v[0] >= 0.0 { 1 } else { -1 })
}

/// Closed form μ_{n,±} = σ_ℓ·(±1)·(−1)ⁿ q_ℓ (ℓ even) or σ_ℓ·(−1)ⁿ q_ℓ (ℓ odd).
pub fn zero_coupling_mu(ell: u32, delta: f64, n: u32, branch: i8, orientation: i8) -> f64 {
    let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
    let b = if ell % 2 == 0 { branch as f64 } else { 1.0 };
    orientation as f64 * b * parity * zero_coupling_q(ell, delta)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ZeroCouplingLevel {
    pub lambda: f64,
    pub n: u32,
    pub branch: i8,
    pub mu: f64,
}

/// The levels n ± √(Δ² + ℓ²/4) with their closed-form μ, ascending in λ
/// (ties broken by μ), first `count` of them.
pub fn zero_coupling_levels(
    ell: u32,
    delta: f64,
    count: usize,
) -> Result<Vec<ZeroCouplingLevel>, SpectraError> {
    let r = zero_coupling_radius(ell, delta);
    let sigma = zero_coupling_orientation(ell)?;
    let mut levels = Vec::with_capacity(2 * count);
    for n in 0..count as u32 {
        for branch in [1i8, -1] {
            levels.push(ZeroCouplingLevel {
                lambda: n as f64 + branch as f64 * r,
                n,
                branch,
                mu: zero_coupling_mu(ell, delta, n, branch, sigma),
            });
        }
    }
    levels.sort_by(|a, b| {
        if (a.lambda - b.lambda).abs() < 1e-9 {
            a.mu.total_cmp(&b.mu)
        } else {
            a.lambda.total_cmp(&b.lambda)
        }
    });
    levels.truncate(count);
    Ok(levels)
}
