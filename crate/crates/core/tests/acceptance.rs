//! Acceptance criteria 1–10. Each test prints one PASS/FAIL line straight to
//! stdout (bypassing libtest capture) and then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use ibqrm_core::constraint_poly::{juddian_g_roots_f64, verify_divisibility};
use ibqrm_core::elliptic_geometry::{
    count_points_mod_p, cubic_discriminant, et_curve, reduce_ell3, singular_fibers, IntCurve, KodairaType,
};
use ibqrm_core::exact_algebra::{q, q_from_f64, qr, Q};
use ibqrm_core::spectra_numeric::{
    joint_spectrum, sweep_with, uniform_grid, zero_coupling_orientation, zero_coupling_radius, Crossing,
    SpectraConfig,
};
use ibqrm_core::symmetry_poly::{check_conjecture_at_baselines, p_from_determinant, p_from_table, p_zero_curve};
use ibqrm_core::weyl_operator::{
    action_constants, build_j, commutation_report, compare_with_table, derive_j, square_report,
};
use num_bigint::BigInt;
use rayon::prelude::*;

fn report(n: u32, title: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {n:>2} {verdict}: {title} — {detail}").unwrap();
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

#[test]
fn criterion_01_exact_divisibility() {
    let t = Instant::now();
    let pairs: Vec<(u32, u32)> = (1..=12).flat_map(|n| (0..=8).map(move |l| (n, l))).collect();
    let failed: Vec<(u32, u32)> = pairs
        .par_iter()
        .filter(|&&(n, l)| !verify_divisibility(n, l).unwrap().passed())
        .copied()
        .collect();
    let el = t.elapsed();
    let ok = failed.is_empty() && el < Duration::from_secs(300);
    report(1, "exact divisibility, quotient = A^ℓ_N, N ≤ 12, ℓ ≤ 8", ok, &format!("{} pairs, failures {failed:?}, {}", pairs.len(), secs(el)));
    assert!(ok);
}

#[test]
fn criterion_02_table_equals_determinant() {
    let t = Instant::now();
    let mut bad = Vec::new();
    for ell in 0..=6 {
        let p = p_from_table(ell).unwrap();
        if p.poly != p_from_determinant(ell).poly {
            bad.push(format!("table ℓ={ell}"));
        }
        let r = check_conjecture_at_baselines(&p, 0..=12);
        bad.extend(r.mismatches().iter().map(|m| format!("baseline ℓ={ell} N={} {}", m.n, m.branch)));
    }
    let el = t.elapsed();
    let ok = bad.is_empty() && el < Duration::from_secs(60);
    report(2, "p_ℓ table = determinant, p_ℓ(N+ℓ/2−g²) = A^ℓ_N, ℓ ≤ 6, N ≤ 12", ok, &format!("mismatches {bad:?}, {}", secs(el)));
    assert!(ok);
}

#[test]
fn criterion_03_operator_identities() {
    let t = Instant::now();
    let bad: Vec<String> = (0..=6u32)
        .into_par_iter()
        .flat_map_iter(|ell| {
            let j = build_j(ell).unwrap();
            let c = commutation_report(ell, &j);
            let s = square_report(ell, &j, &p_from_table(ell).unwrap());
            [(!c.holds).then(|| format!("[H,J] ℓ={ell}")), (!s.holds).then(|| format!("J² ℓ={ell}"))]
                .into_iter()
                .flatten()
        })
        .collect();
    let el = t.elapsed();
    let ok = bad.is_empty() && el < Duration::from_secs(600);
    report(3, "[H̃,J] = 0 and J² = p(H̃) exactly, ℓ = 0..6", ok, &format!("failures {bad:?}, {}", secs(el)));
    assert!(ok);
}

#[test]
fn criterion_04_derive_j_regression() {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for ell in 1..=4 {
        let r = compare_with_table(ell).unwrap();
        ok &= r.ratio.is_some();
        notes.push(format!("ℓ={ell} ratio {}", r.ratio.unwrap_or_else(|| "none".into())));
    }
    let d = derive_j(7).unwrap();
    let c = commutation_report(7, &d.j).holds;
    let s = square_report(7, &d.j, &p_from_determinant(7)).holds;
    ok &= c && s;
    let el = t.elapsed();
    ok &= el < Duration::from_secs(1800);
    notes.push(format!("ℓ=7 commutation {c}, square {s}"));
    report(4, "derive_J matches table up to normalization, ℓ = 7 extension", ok, &format!("{}, {}", notes.join("; "), secs(el)));
    assert!(ok);
}

#[test]
fn criterion_05_juddian_action() {
    let (g, d) = (qr(1, 2), q(1));
    let ac = action_constants::<Q>(1, 1, &g, &d).unwrap();
    let beta_expected = &g * q(2);
    let alpha_expected = (q(8) * &g * &g + &d * &d) / (q(2) * &g);
    let p1 = p_from_table(1).unwrap().poly.eval(&[qr(5, 4), g.clone(), d.clone()]);
    let ok = ac.alpha == alpha_expected
        && ac.beta == beta_expected
        && ac.alpha == q(3)
        && ac.beta == q(1)
        && &ac.alpha * &ac.beta == p1
        && p1 == q(3)
        && ac.fit_residual == 0.0;
    report(5, "J₁Ψ = 2gΦ, J₁Φ = ((8g²+Δ²)/2g)Ψ at (1/2, 1)", ok, &format!("α = {}, β = {}, p₁(5/4) = {p1} (exact)", ac.alpha, ac.beta));
    assert!(ok);
}

#[test]
fn criterion_06_joint_spectrum() {
    let grid = uniform_grid(0.0, 3.0, 0.25);
    let cfg = SpectraConfig { dim_fock: 201, n_levels: 20, check_convergence: true, ..SpectraConfig::default() };
    let mut ok = true;
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let mut slowest = Duration::ZERO;
    let mut bad = Vec::new();
    for ell in 0..=6u32 {
        for &delta in &[0.5, 1.0] {
            let t = Instant::now();
            let spectra: Vec<_> = grid.iter().map(|&g| joint_spectrum(ell, g, delta, &cfg).unwrap()).collect();
            slowest = slowest.max(t.elapsed());
            for s in &spectra {
                for x in &s.samples {
                    let (ld, md) = (x.lambda_drift.unwrap(), x.mu_drift.unwrap());
                    worst = (worst.0.max(x.residual), worst.1.max(ld), worst.2.max(md));
                    if x.residual >= 1e-6 || ld >= 1e-8 || md >= 1e-8 {
                        bad.push(format!("ℓ={ell} Δ={delta} g={} λ={:.6}", s.g, x.lambda));
                    }
                }
            }
        }
    }
    ok &= bad.is_empty() && slowest < Duration::from_secs(120);
    report(
        6,
        "|μ² − p(λ)| < 1e-6 (relative scale) and doubling drift < 1e-8, ℓ ≤ 6",
        ok,
        &format!(
            "max residual {:.1e}, max λ drift {:.1e}, max μ drift {:.1e}, slowest sweep {}, failures {}",
            worst.0,
            worst.1,
            worst.2,
            secs(slowest),
            bad.len()
        ),
    );
    assert!(ok, "{:?}", &bad[..bad.len().min(10)]);
}

#[test]
fn criterion_07_degeneracy_census() {
    let n_levels = 24;
    let cfg = SpectraConfig { dim_fock: 100, n_levels, check_convergence: false, ..SpectraConfig::default() };
    let grid = uniform_grid(0.0, 3.0, 0.01);
    let mut ok = true;
    let mut notes = Vec::new();
    for ell in 1..=3u32 {
        let n_max = ((n_levels as u32) - ell - 4) / 2;
        for (delta, dq) in [(0.5, qr(1, 2)), (1.0, q(1))] {
            let sw = sweep_with(ell, delta, &grid, &cfg).unwrap();
            let mut roots: Vec<(u32, f64)> = Vec::new();
            for n in 1..=n_max {
                roots.extend(juddian_g_roots_f64(n, ell, &dq).into_iter().filter(|&g| g > 0.0 && g <= 3.0).map(|g| (n, g)));
            }
            let found: Vec<&Crossing> = sw.crossings.iter().filter(|c| c.n().map_or(true, |n| n <= n_max)).collect();
            // bijection: every root has one crossing on its baseline within 1e-6, and nothing else
            let matched = roots
                .iter()
                .filter(|&&(n, g)| found.iter().filter(|c| c.n() == Some(n) && (c.g - g).abs() < 1e-6).count() == 1)
                .count();
            let mu_sum = found.iter().map(|c| (c.mu[0] + c.mu[1]).abs()).fold(0.0, f64::max);
            let this = matched == roots.len() && found.len() == roots.len() && mu_sum < 1e-6;
            ok &= this;
            notes.push(format!(
                "ℓ={ell} Δ={delta}: {}/{} roots matched, {} crossings (N ≤ {n_max}), max |μ₊+μ₋| {mu_sum:.1e}",
                matched,
                roots.len(),
                found.len()
            ));
        }
    }
    report(7, "crossings ↔ constraint roots on g ∈ (0, 3]", ok, &notes.join("; "));
    assert!(ok);
}

#[test]
fn criterion_08_zero_coupling_signs() {
    let cfg = SpectraConfig { dim_fock: 60, n_levels: 10, check_convergence: false, ..SpectraConfig::default() };
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut sigmas = Vec::new();
    for ell in 0..=6u32 {
        let sigma = zero_coupling_orientation(ell).unwrap();
        sigmas.push(if sigma > 0 { "+" } else { "−" });
        for &delta in &[0.5, 1.0] {
            // q_ℓ(Δ)² = p_ℓ(x; 0, Δ), evaluated exactly from the table
            let p0 = p_from_table(ell).unwrap().poly.eval(&[q(0), q(0), q_from_f64(delta)]);
            let qv = ibqrm_core::exact_algebra::q_to_f64(&p0).sqrt();
            let r = zero_coupling_radius(ell, delta);
            let mut expect: Vec<(f64, f64)> = (0..10u32)
                .flat_map(|n| {
                    [1.0, -1.0].map(|b: f64| {
                        let sign_n = if n % 2 == 0 { 1.0 } else { -1.0 };
                        let branch = if ell % 2 == 0 { b } else { 1.0 };
                        (n as f64 + b * r, sigma as f64 * branch * sign_n * qv)
                    })
                })
                .collect();
            expect.sort_by(|a, b| if (a.0 - b.0).abs() < 1e-9 { a.1.total_cmp(&b.1) } else { a.0.total_cmp(&b.0) });
            let s = joint_spectrum(ell, 0.0, delta, &cfg).unwrap();
            for (x, e) in s.samples.iter().zip(&expect) {
                let dev = (x.mu - e.1).abs().max((x.lambda - e.0).abs());
                worst = worst.max(dev);
                ok &= dev < 1e-9;
            }
        }
    }
    report(
        8,
        "g = 0 closed form for μ, lowest 10 levels, ℓ ≤ 6 (σ_ℓ-corrected)",
        ok,
        &format!("σ_ℓ = ({}), max deviation {worst:.1e}", sigmas.join(", ")),
    );
    assert!(ok);
}

#[test]
fn criterion_09_elliptic_layer() {
    let w = reduce_ell3();
    let mut notes = Vec::new();
    let ident = w.consistent() && w.disc == w.disc_in_ab();
    notes.push(format!("identities {ident}"));

    let (g, d) = (qr(1, 2), qr(1, 4));
    let v = w.at(&g, &d);
    let (r1, r2) = (qr(29, 16), qr(5, 16));
    let nodal = v.disc == q(0)
        && cubic_discriminant(&v.a2, &v.a4, &v.a6) == q(0)
        && v.c4 != q(0)
        && w.fiber_cubic(&g, &d).0 == vec![&r1 * &r2 * &r2, &r2 * &r2 + q(2) * &r1 * &r2, &r1 + q(2) * &r2, q(1)];
    notes.push(format!("nodal fiber {nodal}"));

    let fibers = singular_fibers(0.25).unwrap();
    let scan = fibers.len() <= 12 && fibers.iter().all(|f| f.kind == KodairaType::I1);
    notes.push(format!("{} singular fibers, all I₁: {scan}", fibers.len()));

    let mut et_ok = true;
    let mut et_n = 0;
    for t in -100i64..=100 {
        if [12, -6, -24].contains(&t) {
            et_ok &= et_curve(&q(t)).is_err();
            continue;
        }
        let c = et_curve(&q(t)).unwrap();
        let [x1, x2, x3] = &c.two_torsion;
        let poly_disc = ((x1 - x2) * (x1 - x3) * (x2 - x3)).pow(2);
        let closed = Q::from_integer(BigInt::from(2).pow(26)) * (q(t - 12) * q(t + 6) * q(t + 24)).pow(2);
        et_ok &= poly_disc == closed && c.disc == closed && c.disc_matches;
        et_n += 1;
    }
    notes.push(format!("E(T) disc exact on {et_n} nonsingular T: {et_ok}"));

    let counts: Vec<u64> = [(IntCurve::short(-1, 0), 3), (IntCurve::short(1, 0), 5), (IntCurve { a2: -1, a4: 3, a6: 0 }, 5)]
        .iter()
        .map(|(c, p)| count_points_mod_p(c, *p).unwrap())
        .collect();
    let counts_ok = counts == [4, 4, 4];
    notes.push(format!("point counts {counts:?}"));

    let ok = ident && nodal && scan && et_ok && counts_ok;
    report(9, "elliptic layer", ok, &notes.join("; "));
    assert!(ok);
}

#[test]
fn criterion_10_approximation_property() {
    let cfg = SpectraConfig { dim_fock: 120, n_levels: 8, check_convergence: false, ..SpectraConfig::default() };
    let mut ok = true;
    let mut notes = Vec::new();
    for ell in 1..=3u32 {
        let s = joint_spectrum(ell, 3.0, 0.5, &cfg).unwrap();
        let roots = &p_zero_curve(&p_from_table(ell).unwrap(), 0.5, &[3.0])[0].1;
        let worst = s
            .samples
            .iter()
            .take(ell as usize)
            .map(|x| roots.iter().map(|r| (r - x.lambda).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        ok &= worst < 1e-2;
        notes.push(format!("ℓ={ell} max distance {worst:.1e}"));
    }
    report(10, "lowest ℓ eigenvalues near roots of p_ℓ at g = 3, Δ = 1/2 (regression guard 1e-2)", ok, &notes.join("; "));
    assert!(ok);
}
