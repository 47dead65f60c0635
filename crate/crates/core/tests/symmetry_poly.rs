use ibqrm_core::exact_algebra::*;
use ibqrm_core::symmetry_poly::*;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(s: &str) -> MultiPoly {
    parse_poly(&p_vars(), s).unwrap()
}

#[test]
fn table_small_cases() {
    assert_eq!(p_from_table(0).unwrap().poly, p("1"));
    assert_eq!(
        p_from_table(1).unwrap().poly,
        p("4 g^2 x + 4 g^4 + 2 g^2 + D^2")
    );
    let p3 = p_from_table(3).unwrap().poly;
    assert_eq!(p3.degree_in(0), Some(3));
    assert_eq!(p3.coeff(&[3, 6, 0]), q(64));
    assert_eq!(p_from_table(7), Err(SymmetryError::Unsupported(7)));
}

#[test]
fn determinant_ell_one() {
    assert_eq!(p_from_determinant(1).poly, p("D^2 + 4 g^2 (x + 1/2 + g^2)"));
    assert_eq!(p_from_determinant(0).poly, p("1"));
}

#[test]
fn table_equals_determinant() {
    for ell in 0..=6 {
        let t = p_from_table(ell).unwrap().poly;
        let d = p_from_determinant(ell).poly;
        assert_eq!(t, d, "ℓ = {ell}: difference {}", &t - &d);
    }
}

#[test]
fn degree_and_leading_coefficient() {
    for ell in 0..=8u32 {
        let pl = p_from_determinant(ell).poly;
        assert_eq!(pl.degree_in(0).unwrap_or(0), ell);
        let lead = &pl.coeffs_in(0)[ell as usize];
        let vs = lead.vars().clone();
        let g = MultiPoly::var(&vs, "g");
        let expect = (&g * &g).scale(&q(4)).pow(ell);
        assert_eq!(*lead, expect);
    }
}

#[test]
fn pochhammer_at_zero_delta() {
    for ell in 0..=10u32 {
        let pl = p_from_determinant(ell).poly.specialize(2, &q(0));
        let vs = p_vars();
        let x = MultiPoly::var(&vs, "x");
        let g = MultiPoly::var(&vs, "g");
        let g2 = &g * &g;
        let base = &(&x + &g2) + &MultiPoly::constant(&vs, q(1) - qr(ell as i64, 2));
        let expect = &g2.scale(&q(4)).pow(ell) * &pochhammer(&base, ell);
        assert_eq!(pl, expect, "ℓ = {ell}");
    }
}

#[test]
fn baselines_table_source() {
    for ell in 0..=6 {
        let r = check_conjecture_at_baselines(&p_from_table(ell).unwrap(), 0..=12);
        assert!(r.all_equal(), "ℓ = {ell}: {:?}", r.mismatches().first());
    }
    let r = check_conjecture_at_baselines(&p_from_table(1).unwrap(), 0..=10);
    let vs = gd_vars();
    for n in 0..=10u32 {
        let at = at_shift(&p_from_table(1).unwrap().poly, &baseline_shift(n, 1, 1));
        assert_eq!(
            at,
            parse_poly(&vs, &format!("4 g^2 ({n} + 1) + D^2")).unwrap()
        );
    }
    assert!(r.all_equal());
}

#[test]
fn baselines_determinant_source() {
    for ell in 0..=9 {
        let r = check_conjecture_at_baselines(&p_from_determinant(ell), 0..=(ell + 6));
        assert!(r.all_equal(), "ℓ = {ell}");
    }
}

#[test]
fn positivity_regime() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for ell in 1..=6u32 {
        let pl = p_from_determinant(ell).poly;
        let gmin = ((ell as f64 - 1.0).sqrt() / 2.0).max(0.0);
        for _ in 0..200 {
            let g = gmin + rng.gen_range(1e-3..3.0);
            let d: f64 = rng.gen_range(0.0..3.0);
            let xmin = ell as f64 / 2.0 - 1.0 - g * g;
            let x = xmin + rng.gen_range(1e-3..10.0);
            let v = pl.eval(&[q_from_f64(x), q_from_f64(g), q_from_f64(d)]);
            assert!(v.is_positive(), "ℓ = {ell}, (x, g, Δ) = ({x}, {g}, {d})");
        }
    }
}

#[test]
fn real_root_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for ell in 1..=6u32 {
        let pl = p_from_determinant(ell);
        for _ in 0..10 {
            let g = rng.gen_range(0.1..3.0);
            let d = rng.gen_range(0.1..3.0);
            let f = p_in_x(&pl.poly, &q_from_f64(g), &q_from_f64(d));
            let b = f.cauchy_bound();
            let ivs = isolate_real_roots_upoly(&f, &-b.clone(), &b);
            let count: u32 = ivs.iter().map(|iv| iv.multiplicity_hint).sum();
            assert_eq!(count % 2, ell % 2, "ℓ = {ell}, g = {g}, Δ = {d}");
        }
    }
}

#[test]
fn zero_curve_examples() {
    let p1 = p_from_table(1).unwrap();
    let c = p_zero_curve(&p1, 0.5, &[0.5, 1.0, 2.0]);
    for (g, xs) in &c {
        assert_eq!(xs.len(), 1);
        let expect = -(4.0 * g.powi(4) + 2.0 * g * g + 0.25) / (4.0 * g * g);
        assert!((xs[0] - expect).abs() < 1e-12);
    }
    let c0 = p_zero_curve(&p_from_table(0).unwrap(), 0.5, &[1.0]);
    assert!(c0[0].1.is_empty());
    let c2 = p_zero_curve(&p_from_table(2).unwrap(), 0.5, &[2.0]);
    assert_eq!(c2[0].1.len(), 2);
    for x in &c2[0].1 {
        assert!(*x < 2.0 / 2.0 - 1.0 - 4.0);
    }
}

#[test]
fn kernel_region_examples() {
    let vs = gd_vars();
    let grid: Vec<f64> = (1..=30).map(|i| i as f64 * 0.1).collect();
    let p2 = p_from_table(2).unwrap();
    let s = kernel_region_scan(&p2, &qr(-1, 2), &grid);
    assert_eq!(s.poly, parse_poly(&vs, "D^4 + D^2 - 4 g^4").unwrap());
    for (g, d) in &s.zeros {
        assert!((d.powi(4) + d * d - 4.0 * g.powi(4)).abs() < 1e-9 * (1.0 + 4.0 * g.powi(4)));
    }
    assert_eq!(s.zeros.len(), grid.len());
    let p1 = p_from_table(1).unwrap();
    for n in 0..5 {
        let s = kernel_region_scan(&p1, &baseline_shift(n, 1, 1), &grid);
        assert_eq!(
            s.poly,
            parse_poly(&vs, &format!("4 g^2 ({n} + 1) + D^2")).unwrap()
        );
        assert!(s.zeros.is_empty());
        let s = kernel_region_scan(&p2, &baseline_shift(n, 2, 1), &grid);
        let expect =
            format!("4 ({n} + 1)({n} + 2)(2 g^2)^2 + 2 (3 + 2 {n})(2 g^2) D^2 + D^4 + D^2");
        assert_eq!(s.poly, parse_poly(&vs, &expect).unwrap());
        assert!(s.zeros.is_empty());
    }
}
