use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ibqrm_core::exact_algebra::{q, Q};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "ibqrm", version, about = "Hidden-symmetry toolkit for the integer-biased asymmetric quantum Rabi model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact checks: divisibility, p_ℓ table vs determinant, [H, J] = 0, J² = p(H), baselines.
    VerifyAll(VerifyArgs),
    /// Joint spectra along a g-grid with sign tracking and crossing detection.
    Sweep(SweepArgs),
    /// Point cloud of the surface y² = p_ℓ(x; g, Δ).
    Surface(SurfaceArgs),
    /// ℓ = 3 elliptic layer: singular fibers and the E(T) family.
    Elliptic(EllipticArgs),
    /// Samples of the curves Ω_N^ℓ in the (g, Δ)-plane.
    Omega(OmegaArgs),
    /// Recover J_ℓ from the commutation equation.
    DeriveJ(DeriveArgs),
    /// Juddian points, action constants and parity solutions.
    Juddian(JuddianArgs),
}

/// A rational given as "p/q", an integer, or a finite decimal.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().with_context(|| format!("bad numerator in {s:?}"))?;
        let d: i64 = d.trim().parse().with_context(|| format!("bad denominator in {s:?}"))?;
        if d == 0 {
            bail!("zero denominator in {s:?}");
        }
        return Ok(q(n) / q(d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        bail!("not a rational number: {s:?}");
    }
    if frac.len() > 15 {
        bail!("too many decimals in {s:?}");
    }
    let digits: i64 = format!("{int}{frac}").parse().with_context(|| format!("out of range: {s:?}"))?;
    let v = q(digits) / q(10i64.pow(frac.len() as u32));
    Ok(if neg { -v } else { v })
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive, got {s}"))
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 0.0)]
    pub g_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub g_max: f64,
    #[arg(long, default_value_t = 0.01, value_parser = positive)]
    pub g_step: f64,
}

impl GridArgs {
    pub fn grid(&self) -> Result<Vec<f64>> {
        if !(self.g_max >= self.g_min) {
            bail!("g grid must be ascending: g_min = {}, g_max = {}", self.g_min, self.g_max);
        }
        Ok(ibqrm_core::spectra_numeric::uniform_grid(self.g_min, self.g_max, self.g_step))
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    /// Largest ℓ for the divisibility sweep; the table-based checks stop at min(ℓ, 6).
    #[arg(long, default_value_t = 8)]
    pub ell_max: u32,
    #[arg(long, default_value_t = 12)]
    pub n_max: u32,
    /// Replace a tabulated p_ℓ, as "ELL=EXPR" in the table grammar (fault injection).
    #[arg(long = "p-override", value_name = "ELL=EXPR")]
    pub p_overrides: Vec<String>,
    /// Also write the report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub ell: u32,
    #[arg(long, value_parser = positive)]
    pub delta: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = 20)]
    pub n_levels: usize,
    #[arg(long, default_value_t = 201)]
    pub dim_fock: usize,
    /// Recompute every spectrum at twice the cutoff.
    #[arg(long)]
    pub check_convergence: bool,
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub stability_tol: f64,
    #[arg(long, default_value_t = 1e-7, value_parser = positive)]
    pub cluster_tol: f64,
    #[arg(long, default_value_t = 1e-8, value_parser = positive)]
    pub crossing_tol: f64,
    #[arg(long, default_value_t = 1e-6, value_parser = positive)]
    pub sign_tol: f64,
    /// Also emit GAA curves for N = 0..=N.
    #[arg(long)]
    pub gaa_n_max: Option<u32>,
    #[arg(long, default_value = "ibqrm-out")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub ell: u32,
    #[arg(long, value_parser = positive)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub g_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub g_max: f64,
    #[arg(long, default_value_t = 0.25, value_parser = positive)]
    pub g_step: f64,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    pub x_min: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub x_max: f64,
    #[arg(long, default_value_t = 200)]
    pub x_steps: usize,
    /// Overlay the joint spectrum (λ, μ) of the lowest levels.
    #[arg(long)]
    pub overlay: bool,
    #[arg(long, default_value_t = 10)]
    pub n_levels: usize,
    #[arg(long, default_value_t = 100)]
    pub dim_fock: usize,
    #[arg(long, default_value = "ibqrm-out")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct EllipticArgs {
    /// Δ values for the singular-fiber scan (rationals such as 1/4).
    #[arg(long = "delta", default_values_t = vec!["1/4".to_string()])]
    pub deltas: Vec<String>,
    #[arg(long, default_value_t = -100, allow_hyphen_values = true)]
    pub t_min: i64,
    #[arg(long, default_value_t = 100)]
    pub t_max: i64,
    /// Seed for the random-T discriminant sample.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "ibqrm-out")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OmegaArgs {
    #[arg(long)]
    pub ell: u32,
    #[arg(long, default_value_t = 1)]
    pub n_min: u32,
    #[arg(long, default_value_t = 12)]
    pub n_max: u32,
    #[arg(long, default_value_t = 0.0)]
    pub g_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub g_max: f64,
    #[arg(long, default_value_t = 0.01, value_parser = positive)]
    pub g_step: f64,
    #[arg(long, default_value = "ibqrm-out")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DeriveArgs {
    #[arg(long)]
    pub ell: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct JuddianArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub ell: u32,
    /// Δ as a rational ("1", "1/2", "0.25").
    #[arg(long)]
    pub delta: String,
    /// Evaluate exactly at this g instead of at every constraint root.
    #[arg(long)]
    pub g: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
