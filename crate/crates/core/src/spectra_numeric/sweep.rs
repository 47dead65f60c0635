//! Sweeps in g: sign continuation of μ along spectral curves, crossing
//! detection and refinement, GAA curves and surface point clouds.

use rayon::prelude::*;
use serde::Serialize;

use super::joint::{joint_spectrum, zero_coupling_levels, JointSpectrum, PAt};
use super::{SpectraConfig, SpectraError};
use crate::constraint_poly::constraint_in_g;
use crate::exact_algebra::{q_from_f64, UPoly};

/// lo, lo + step, …, up to hi (inclusive within rounding).
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CrossingKind {
    /// λ = N + ℓ/2 − g² (equivalently (N + ℓ) − ℓ/2 − g²).
    Baseline {
        n: u32,
    },
    Other,
}

#[derive(Debug, Clone, Serialize)]
pub struct Crossing {
    pub g: f64,
    pub lambda: f64,
    /// μ of the two crossing curves (positive one first).
    pub mu: [f64; 2],
    /// Remaining |λ₁ − λ₂| at the refined point.
    pub gap: f64,
    pub kind: CrossingKind,
    /// Ranks of the two curves inside their μ-sign classes.
    pub ranks: [usize; 2],
}

impl Crossing {
    pub fn n(&self) -> Option<u32> {
        match self.kind {
            CrossingKind::Baseline { n } => Some(n),
            CrossingKind::Other => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AvoidedCrossing {
    pub g: f64,
    pub lambda: f64,
    pub gap: f64,
    /// Overall indices of the two levels at that grid point.
    pub levels: [usize; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct SignAmbiguity {
    pub g: f64,
    pub curve: usize,
    pub lambda: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralSweep {
    pub ell: u32,
    pub delta: f64,
    pub g_grid: Vec<f64>,
    pub spectra: Vec<JointSpectrum>,
    /// tracked_levels[c][i]: level index of curve c at g_grid[i].
    pub tracked_levels: Vec<Vec<Option<usize>>>,
    /// tracked_signs[c][i]: sign of μ along curve c (0 where untracked).
    pub tracked_signs: Vec<Vec<i8>>,
    /// g = 0 levels where the computed sign of μ disagrees with the closed form.
    pub seed_mismatches: Vec<usize>,
    pub crossings: Vec<Crossing>,
    pub avoided: Vec<AvoidedCrossing>,
    pub ambiguities: Vec<SignAmbiguity>,
    /// Extra spectra computed by local step halving.
    pub halvings: usize,
}

/// The baseline N with λ closest to N + ℓ/2 − g², and the distance.
pub fn nearest_baseline(ell: u32, g: f64, lambda: f64) -> Option<(u32, f64)> {
    let n = (lambda + g * g - ell as f64 / 2.0).round();
    if n < 0.0 {
        return None;
    }
    Some((n as u32, (lambda - (n + ell as f64 / 2.0 - g * g)).abs()))
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// λ of the levels with μ > 0 and μ < 0, each ascending.
fn classes(s: &JointSpectrum) -> [Vec<(f64, f64)>; 2] {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for x in &s.samples {
        if x.mu >= 0.0 {
            plus.push((x.lambda, x.mu));
        } else {
            minus.push((x.lambda, x.mu));
        }
    }
    [plus, minus]
}

pub fn sweep(
    ell: u32,
    delta: f64,
    g_grid: &[f64],
    n_levels: usize,
    dim_fock: usize,
) -> Result<SpectralSweep, SpectraError> {
    let cfg = SpectraConfig {
        n_levels,
        dim_fock,
        check_convergence: false,
        ..SpectraConfig::default()
    };
    sweep_with(ell, delta, g_grid, &cfg)
}

/// Sweep over an ascending grid starting at g = 0.
pub fn sweep_with(
    ell: u32,
    delta: f64,
    g_grid: &[f64],
    cfg: &SpectraConfig,
) -> Result<SpectralSweep, SpectraError> {
    if g_grid.first() != Some(&0.0) {
        return Err(SpectraError::InvalidGrid("must start at g = 0".into()));
    }
    if g_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SpectraError::InvalidGrid(
            "must be strictly ascending".into(),
        ));
    }
    let spectra: Vec<JointSpectrum> = g_grid
        .par_iter()
        .map(|&g| joint_spectrum(ell, g, delta, cfg))
        .collect::<Result<_, _>>()?;

    let mut out = SpectralSweep {
        ell,
        delta,
        g_grid: g_grid.to_vec(),
        spectra,
        tracked_levels: Vec::new(),
        tracked_signs: Vec::new(),
        seed_mismatches: Vec::new(),
        crossings: Vec::new(),
        avoided: Vec::new(),
        ambiguities: Vec::new(),
        halvings: 0,
    };
    continue_signs(&mut out, cfg)?;
    detect_crossings(&mut out, cfg)?;
    detect_avoided(&mut out, cfg);
    Ok(out)
}

/// Matching cost between a curve point and a candidate level.
fn cost(p: &PAt, a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).abs() + (a.1 - b.1).abs() / p.scale(a.0).sqrt()
}

/// Greedy nearest matching of the points `from` to the levels `to`; None when
/// two candidates for one point are closer than `amb`.
fn match_levels(
    p: &PAt,
    from: &[(f64, f64)],
    to: &[(f64, f64)],
    amb: f64,
) -> Option<Vec<Option<usize>>> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (c, &a) in from.iter().enumerate() {
        let mut costs: Vec<(f64, usize)> = to
            .iter()
            .enumerate()
            .map(|(j, &b)| (cost(p, a, b), j))
            .collect();
        costs.sort_by(|x, y| x.0.total_cmp(&y.0));
        if costs.len() >= 2 && costs[1].0 - costs[0].0 < amb {
            return None;
        }
        pairs.extend(costs.into_iter().map(|(x, j)| (x, c, j)));
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut assign = vec![None; from.len()];
    let mut taken = vec![false; to.len()];
    for (_, c, j) in pairs {
        if assign[c].is_none() && !taken[j] {
            assign[c] = Some(j);
            taken[j] = true;
        }
    }
    Some(assign)
}

fn points(s: &JointSpectrum) -> Vec<(f64, f64)> {
    s.samples.iter().map(|x| (x.lambda, x.mu)).collect()
}

/// Match `from` (at g0) into the spectrum at g1, halving the step while the
/// matching is ambiguous.
fn match_step(
    ell: u32,
    delta: f64,
    g0: f64,
    from: &[(f64, f64)],
    g1: f64,
    to: &[(f64, f64)],
    depth: u32,
    cfg: &SpectraConfig,
    extra: &mut usize,
) -> Result<Vec<Option<usize>>, SpectraError> {
    let p = PAt::new(ell, g1, delta);
    if let Some(m) = match_levels(&p, from, to, cfg.match_ambiguity) {
        return Ok(m);
    }
    if depth >= cfg.max_halvings {
        // accept the greedy choice
        return Ok(
            match_levels(&p, from, to, f64::NEG_INFINITY).expect("unambiguous by construction")
        );
    }
    let gm = 0.5 * (g0 + g1);
    let mid = joint_spectrum(
        ell,
        gm,
        delta,
        &SpectraConfig {
            check_convergence: false,
            ..cfg.clone()
        },
    )?;
    *extra += 1;
    let mid_pts = points(&mid);
    let first = match_step(ell, delta, g0, from, gm, &mid_pts, depth + 1, cfg, extra)?;
    let carried: Vec<(f64, f64)> = first
        .iter()
        .map(|m| m.map(|j| mid_pts[j]).unwrap_or((f64::NAN, f64::NAN)))
        .collect();
    let second = match_step(ell, delta, gm, &carried, g1, to, depth + 1, cfg, extra)?;
    Ok(first.iter().zip(second).map(|(a, b)| a.and(b)).collect())
}

fn continue_signs(out: &mut SpectralSweep, cfg: &SpectraConfig) -> Result<(), SpectraError> {
    let (ell, delta) = (out.ell, out.delta);
    let n0 = out.spectra[0].samples.len();
    let seeds = zero_coupling_levels(ell, delta, n0)?;
    let steps = out.g_grid.len();
    let mut levels = vec![vec![None; steps]; n0];
    let mut signs = vec![vec![0i8; steps]; n0];
    for (c, (s, z)) in out.spectra[0].samples.iter().zip(&seeds).enumerate() {
        levels[c][0] = Some(c);
        signs[c][0] = sign(z.mu);
        if sign(s.mu) != sign(z.mu) && s.mu.abs() >= cfg.sign_tol {
            out.seed_mismatches.push(c);
        }
    }
    for i in 1..steps {
        let prev: Vec<(f64, f64)> = (0..n0)
            .map(|c| match levels[c][i - 1] {
                Some(j) => {
                    let s = out.spectra[i - 1].samples[j];
                    (s.lambda, s.mu)
                }
                None => (f64::NAN, f64::NAN),
            })
            .collect();
        let active: Vec<usize> = (0..n0).filter(|&c| levels[c][i - 1].is_some()).collect();
        let from: Vec<(f64, f64)> = active.iter().map(|&c| prev[c]).collect();
        let to = points(&out.spectra[i]);
        let m = match_step(
            ell,
            delta,
            out.g_grid[i - 1],
            &from,
            out.g_grid[i],
            &to,
            0,
            cfg,
            &mut out.halvings,
        )?;
        for (k, &c) in active.iter().enumerate() {
            if let Some(j) = m[k] {
                let s = out.spectra[i].samples[j];
                levels[c][i] = Some(j);
                signs[c][i] = sign(s.mu);
                if s.mu.abs() < cfg.sign_tol {
                    out.ambiguities.push(SignAmbiguity {
                        g: out.g_grid[i],
                        curve: c,
                        lambda: s.lambda,
                        mu: s.mu,
                    });
                }
            }
        }
    }
    out.tracked_levels = levels;
    out.tracked_signs = signs;
    Ok(())
}

/// λ⁺_{r} − λ⁻_{s} at one spectrum, if both ranks are present.
fn class_gap(s: &JointSpectrum, r: usize, t: usize) -> Option<(f64, [f64; 2], f64)> {
    let [plus, minus] = classes(s);
    let (a, b) = (plus.get(r)?, minus.get(t)?);
    Some((a.0 - b.0, [a.1, b.1], 0.5 * (a.0 + b.0)))
}

/// Curves with μ of one sign never cross each other, so every crossing is a
/// sign change of λ⁺_r − λ⁻_s for some pair of class ranks (r, s).
fn detect_crossings(out: &mut SpectralSweep, cfg: &SpectraConfig) -> Result<(), SpectraError> {
    let (ell, delta) = (out.ell, out.delta);
    let quick = SpectraConfig {
        check_convergence: false,
        ..cfg.clone()
    };
    let kmax = out
        .spectra
        .iter()
        .map(|s| s.samples.len())
        .max()
        .unwrap_or(0);
    let mut brackets = Vec::new();
    for r in 0..kmax {
        for t in 0..kmax {
            let mut last: Option<(usize, f64)> = None;
            for (i, s) in out.spectra.iter().enumerate() {
                if out.g_grid[i] == 0.0 {
                    continue;
                }
                let Some((d, _, _)) = class_gap(s, r, t) else {
                    last = None;
                    continue;
                };
                if d.abs() <= cfg.crossing_tol {
                    continue;
                }
                if let Some((i0, d0)) = last {
                    if d0.signum() != d.signum() {
                        brackets.push((r, t, out.g_grid[i0], d0, out.g_grid[i], d));
                    }
                }
                last = Some((i, d));
            }
        }
    }
    let found: Vec<Option<Crossing>> = brackets
        .par_iter()
        .map(|&(r, t, ga, da, gb, db)| refine(ell, delta, r, t, (ga, da), (gb, db), &quick))
        .collect::<Result<_, _>>()?;
    let mut crossings: Vec<Crossing> = found.into_iter().flatten().collect();
    crossings.sort_by(|a, b| a.g.total_cmp(&b.g).then(a.lambda.total_cmp(&b.lambda)));
    out.crossings = crossings;
    Ok(())
}

/// Illinois (modified regula falsi) on d(g) = λ⁺_r − λ⁻_t.
fn refine(
    ell: u32,
    delta: f64,
    r: usize,
    t: usize,
    a: (f64, f64),
    b: (f64, f64),
    cfg: &SpectraConfig,
) -> Result<Option<Crossing>, SpectraError> {
    let ((mut ga, mut da), (mut gb, mut db)) = (a, b);
    let mut side = 0i8;
    let mut best: Option<(f64, f64, [f64; 2], f64)> = None;
    for _ in 0..200 {
        let gc = if da == db {
            0.5 * (ga + gb)
        } else {
            (ga * db - gb * da) / (db - da)
        };
        let gc = if gc > ga.min(gb) && gc < ga.max(gb) {
            gc
        } else {
            0.5 * (ga + gb)
        };
        let s = joint_spectrum(ell, gc, delta, cfg)?;
        let Some((dc, mu, lam)) = class_gap(&s, r, t) else {
            return Ok(None);
        };
        if best.map_or(true, |x| dc.abs() < x.1.abs()) {
            best = Some((gc, dc, mu, lam));
        }
        if dc.abs() <= cfg.crossing_tol * 1e-2 || (gb - ga).abs() <= cfg.root_tol {
            break;
        }
        if dc.signum() == db.signum() {
            gb = gc;
            db = dc;
            if side == -1 {
                da *= 0.5;
            }
            side = -1;
        } else {
            ga = gc;
            da = dc;
            if side == 1 {
                db *= 0.5;
            }
            side = 1;
        }
    }
    let Some((g, gap, mu, lambda)) = best else {
        return Ok(None);
    };
    if gap.abs() > cfg.crossing_tol {
        return Ok(None);
    }
    let kind = match nearest_baseline(ell, g, lambda) {
        Some((n, dist)) if dist < cfg.crossing_tol => CrossingKind::Baseline { n },
        _ => CrossingKind::Other,
    };
    Ok(Some(Crossing {
        g,
        lambda,
        mu,
        gap: gap.abs(),
        kind,
        ranks: [r, t],
    }))
}

/// Local minima of gaps between adjacent levels of equal μ-sign.
fn detect_avoided(out: &mut SpectralSweep, cfg: &SpectraConfig) {
    let steps = out.spectra.len();
    for i in 1..steps.saturating_sub(1) {
        let s = &out.spectra[i];
        for k in 0..s.samples.len().saturating_sub(1) {
            let gap_at = |j: usize| -> Option<f64> {
                let x = &out.spectra[j].samples;
                let (a, b) = (x.get(k)?, x.get(k + 1)?);
                (sign(a.mu) == sign(b.mu)).then(|| b.lambda - a.lambda)
            };
            let (Some(l), Some(c), Some(r)) = (gap_at(i - 1), gap_at(i), gap_at(i + 1)) else {
                continue;
            };
            if c < l && c < r && c > cfg.crossing_tol && c < cfg.avoided_max_gap {
                out.avoided.push(AvoidedCrossing {
                    g: out.g_grid[i],
                    lambda: 0.5 * (s.samples[k].lambda + s.samples[k + 1].lambda),
                    gap: c,
                    levels: [k, k + 1],
                });
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaaRow {
    pub g: f64,
    pub n: u32,
    pub e_plus: f64,
    pub e_minus: f64,
}

fn factorial_f64(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// E^ℓ_{N,±}(g) = N + ℓ/2 − g² ± (−1)^{N+ℓ}(2g²)^ℓ Δ e^{−2g²} P_N^{(N,ℓ/2)}((2g)², Δ²) / (2 (N!)^{3/2} √((N+ℓ)!)).
pub fn gaa_energy(constraint: &UPoly, ell: u32, n: u32, g: f64, delta: f64) -> (f64, f64) {
    let base = n as f64 + ell as f64 / 2.0 - g * g;
    let sgn = if (n + ell) % 2 == 0 { 1.0 } else { -1.0 };
    let amp = sgn
        * (2.0 * g * g).powi(ell as i32)
        * delta
        * (-2.0 * g * g).exp()
        * constraint.eval_f64(g)
        / (2.0 * factorial_f64(n).powf(1.5) * factorial_f64(n + ell).sqrt());
    (base + amp, base - amp)
}

/// GAA curves for N = 0..=n_max over the grid, rows ordered by (N, g).
pub fn gaa_curves(ell: u32, delta: f64, n_max: u32, g_grid: &[f64]) -> Vec<GaaRow> {
    let dq = q_from_f64(delta);
    (0..=n_max)
        .flat_map(|n| {
            let f = UPoly::from_multi(&constraint_in_g(n, ell, &dq)).expect("univariate in g");
            g_grid
                .iter()
                .map(|&g| {
                    let (e_plus, e_minus) = gaa_energy(&f, ell, n, g, delta);
                    GaaRow {
                        g,
                        n,
                        e_plus,
                        e_minus,
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurfaceKind {
    Surface,
    Spectrum,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SurfacePoint {
    pub x: f64,
    pub y: f64,
    pub g: f64,
    pub kind: SurfaceKind,
}

/// Points (x, ±√p_ℓ(x; g, Δ), g) over `steps` + 1 equally spaced x in
/// `x_window` wherever p_ℓ ≥ 0, followed by (λ, μ, g) from `overlay`.
pub fn surface_samples(
    ell: u32,
    delta: f64,
    g_grid: &[f64],
    x_window: (f64, f64, usize),
    overlay: Option<&SpectralSweep>,
) -> Vec<SurfacePoint> {
    let (lo, hi, steps) = x_window;
    let mut pts = Vec::new();
    for &g in g_grid {
        let p = PAt::new(ell, g, delta);
        for i in 0..=steps {
            let x = if steps == 0 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / steps as f64
            };
            let v = p.eval(x);
            if v >= 0.0 {
                let y = v.sqrt();
                pts.push(SurfacePoint {
                    x,
                    y,
                    g,
                    kind: SurfaceKind::Surface,
                });
                pts.push(SurfacePoint {
                    x,
                    y: -y,
                    g,
                    kind: SurfaceKind::Surface,
                });
            }
        }
    }
    if let Some(sw) = overlay {
        for s in &sw.spectra {
            for x in &s.samples {
                pts.push(SurfacePoint {
                    x: x.lambda,
                    y: x.mu,
                    g: s.g,
                    kind: SurfaceKind::Spectrum,
                });
            }
        }
    }
    pts
}
