use ibqrm_core::constraint_poly::*;
use ibqrm_core::exact_algebra::*;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uve() -> Vars {
    vars(&["u", "v", "eps"])
}

#[test]
fn first_polynomials() {
    let vs = uve();
    let eps = MultiPoly::var(&vs, "eps");
    let p1 = constraint_p_symbolic(5, &eps, 1).unwrap();
    assert_eq!(p1, parse_poly(&vs, "u + v - 1 - eps").unwrap());
    let p2 = constraint_p_symbolic(2, &eps, 2).unwrap();
    let expect = parse_poly(
        &vs,
        "2u^2 + 3u v + v^2 - 4(2 + eps)u - (3eps + 5)v + 2(eps + 1)(eps + 2)",
    )
    .unwrap();
    assert_eq!(p2, expect);
    assert_eq!(
        constraint_p(3, &q(0), 0).unwrap(),
        MultiPoly::one(&uv_vars())
    );
}

#[test]
fn printed_quartic() {
    let vs = uve();
    let eps = MultiPoly::var(&vs, "eps");
    let p4 = constraint_p_symbolic(4, &-eps, 4).unwrap();
    let printed = "24u^4 + 50u^3v + 35u^2v^2 + 10u v^3 + v^4 \
        + 96(eps-4)u^3 + 2(75eps-271)u^2v + 10(7eps-23)u v^2 + 10(eps-3)v^3 \
        + 144(eps-4)(eps-3)u^2 + 2(75eps^2-473eps+722)u v + (35eps^2-200eps+273)v^2 \
        + 96(eps-4)(eps-3)(eps-2)u + (50eps^3-404eps^2+1030eps-820)v + 24(eps-4)(eps-3)(eps-2)(eps-1)";
    assert_eq!(p4, parse_poly(&vs, printed).unwrap());
}

#[test]
fn index_out_of_range() {
    assert_eq!(
        constraint_p(2, &q(1), 3),
        Err(ConstraintError::IndexOutOfRange { n: 2, k: 3 })
    );
}

#[test]
fn family_satisfies_recurrence_and_degrees() {
    let fam = constraint_family(6, &qr(3, 2));
    assert_eq!(fam.polys.len(), 7);
    let vs = uv_vars();
    assert_eq!(fam.polys[1], parse_poly(&vs, "u + v - 1 - 3/2").unwrap());
    for (k, p) in fam.polys.iter().enumerate() {
        assert_eq!(p.total_degree(), Some(k as u32));
    }
    let u = MultiPoly::var(&vs, "u");
    let v = MultiPoly::var(&vs, "v");
    for k in 2..=6i64 {
        let lin = &(&u.scale(&q(k)) + &v) - &MultiPoly::constant(&vs, q(k) * (q(k) + qr(3, 2)));
        let rhs = &(&lin * &fam.polys[k as usize - 1])
            - &(&u * &fam.polys[k as usize - 2]).scale(&q(k * (k - 1) * (6 - k + 1)));
        assert_eq!(fam.polys[k as usize], rhs);
    }
}

#[test]
fn k_coefficients_example_point() {
    let k = coeff_k(1, &q(1), &qr(1, 2), &q(1)).unwrap();
    assert_eq!(k.values, vec![q(1), q(0)]);
    assert_eq!(
        coeff_k(1, &q(1), &q(0), &q(1)),
        Err(ConstraintError::ZeroCoupling)
    );
}

#[test]
fn k_coefficients_against_float_oracle() {
    let k = coeff_k(2, &q(0), &q(1), &q(1)).unwrap();
    // float re-implementation of the same recurrence
    let (n, eps, g, d) = (2.0f64, 0.0f64, 1.0f64, 1.0f64);
    let mut kf = vec![1.0f64];
    for i in 1..=2 {
        let fi = i as f64;
        let inner = 2.0 * g + (fi - 1.0 - n - eps + d * d / (n - fi + 1.0)) / (2.0 * g);
        let prev2 = if i >= 2 { kf[i - 2] } else { 0.0 };
        kf.push((inner * kf[i - 1] - prev2) / fi);
    }
    for (a, b) in k.values.iter().zip(&kf) {
        assert!((a.to_f64().unwrap() - b).abs() < 1e-12);
        assert_eq!(a.is_positive(), *b > 0.0);
    }
}

#[test]
fn k_vanishing_iff_p_vanishing() {
    // K_N and P_N((2g)^2, Δ^2) differ by the factor ±(2g)^N (N!)^2, so they vanish together.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let n: u32 = rng.gen_range(1..=5);
        let eps = q(rng.gen_range(-3..=3));
        let g = qr(rng.gen_range(1..=20), rng.gen_range(1..=7));
        let d = qr(rng.gen_range(1..=20), rng.gen_range(1..=7));
        let kn = coeff_k(n, &eps, &g, &d).unwrap().values[n as usize].clone();
        let p = constraint_p(n, &eps, n).unwrap();
        let pv = p.eval(&[&g * &g * q(4), &d * &d]);
        assert_eq!(kn.is_zero(), pv.is_zero());
        let ratio = &kn / &pv;
        let two_g_n = (&g * q(2)).pow(n as i32);
        let scaled = ratio
            * two_g_n
            * Q::from_integer(factorial(n as u64))
            * Q::from_integer(factorial(n as u64));
        assert!(scaled.abs() == q(1), "N = {n}: scaled ratio {scaled}");
    }
    // exact root: N = 1, ℓ = 1, g = 1/2, Δ = 1
    let p = constraint_p(1, &q(1), 1).unwrap();
    assert!(p.eval(&[q(1), q(1)]).is_zero());
}

#[test]
fn quotient_a_closed_forms() {
    let nv = vars(&["u", "v", "N"]);
    assert_eq!(quotient_a(4, 0).poly, MultiPoly::one(&uv_vars()));
    let a1 = quotient_a_in_n(1);
    assert_eq!(a1, parse_poly(&nv, "(N + 1)u + v").unwrap());
    let a2 = quotient_a_in_n(2);
    assert_eq!(
        a2,
        parse_poly(&nv, "(N + 1)(N + 2)u^2 + (2N + 3)u v + v(1 + v)").unwrap()
    );
}

#[test]
fn quotient_a_interpolation_extrapolates() {
    for ell in 1..=5u32 {
        let a = quotient_a_in_n(ell);
        assert_eq!(a.degree_in(2), Some(ell));
        for n in ell + 1..=ell + 4 {
            let s = a.specialize(2, &q(n as i64)).embed(&uv_vars()).unwrap();
            assert_eq!(s, quotient_a(n, ell).poly, "ℓ = {ell}, N = {n}");
        }
    }
    let a3 = quotient_a_in_n(3)
        .specialize(2, &q(5))
        .embed(&uv_vars())
        .unwrap();
    assert_eq!(a3, quotient_a(5, 3).poly);
}

#[test]
fn quotient_a_degree_and_positivity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for ell in 0..=6u32 {
        for n in [1u32, 3, 7] {
            let a = quotient_a(n, ell);
            assert_eq!(a.poly.total_degree(), Some(ell));
            for (m, c) in a.poly.terms() {
                if m.0[0] == ell {
                    assert!(c.is_positive());
                }
            }
            for _ in 0..1000 {
                let u: f64 = rng.gen_range(1e-3..=100.0);
                let v: f64 = rng.gen_range(1e-3..=100.0);
                assert!(a.poly.eval(&[q_from_f64(u), q_from_f64(v)]).is_positive());
            }
        }
    }
}

#[test]
fn divisibility_small_cases() {
    let r = verify_divisibility(2, 2).unwrap();
    assert!(r.passed());
    let r = verify_divisibility(1, 0).unwrap();
    assert!(r.passed());
    assert_eq!(r.quotient, "1");
    // anchored on the printed polynomials: P^{(4,-1)}_4 / P^{(2,1)}_2 = A^2_2
    let vs = uve();
    let eps = MultiPoly::var(&vs, "eps");
    let at2 = |p: MultiPoly| p.specialize(2, &q(2)).embed(&uv_vars()).unwrap();
    let dividend = at2(constraint_p_symbolic(4, &-eps.clone(), 4).unwrap());
    let divisor = at2(constraint_p_symbolic(2, &eps, 2).unwrap());
    let (quo, rem) = poly_divmod(&dividend, &divisor, "u").unwrap();
    assert!(rem.is_zero());
    assert_eq!(quo, quotient_a(2, 2).poly);
}

#[test]
fn divisibility_sweep() {
    for n in 1..=12 {
        for ell in 0..=8 {
            let r = verify_divisibility(n, ell).unwrap();
            assert!(r.passed(), "N = {n}, ℓ = {ell}: remainder {}", r.remainder);
        }
    }
}

#[test]
fn juddian_roots() {
    let r = juddian_g_roots(1, 1, &q(1));
    assert_eq!(r.len(), 1);
    let x = juddian_g_roots_f64(1, 1, &q(1));
    assert!((x[0] - 0.5).abs() < 1e-14);
    assert!(juddian_g_roots(1, 1, &q(2)).is_empty());
    assert_eq!(juddian_g_roots(3, 1, &qr(1, 2)).len(), 3);
    for n in 1..=6 {
        assert!(juddian_g_roots(n, 2, &q(1)).len() <= n as usize);
    }
}

#[test]
fn omega_samples() {
    let pts = omega_curve_samples(1, 1, &[0.5]);
    assert_eq!(pts.len(), 1);
    assert!((pts[0].1 - 1.0).abs() < 1e-12);
    assert!(omega_curve_samples(1, 1, &[0.8]).is_empty());
    let grid: Vec<f64> = (1..=100).map(|i| i as f64 * 0.02).collect();
    let pts = omega_curve_samples(2, 1, &grid);
    let mut branches = 0;
    for g in &grid {
        let c = pts.iter().filter(|p| p.0 == *g).count();
        assert!(c <= 2);
        branches = branches.max(c);
    }
    assert_eq!(branches, 2);
    for w in pts.windows(2) {
        assert!(w[0].0 < w[1].0 || (w[0].0 == w[1].0 && w[0].1 < w[1].1));
    }
    // every sample is on the curve
    let p = constraint_p(2, &q(1), 2).unwrap();
    for (g, d) in &pts {
        let val = p.eval_f64(&[4.0 * g * g, d * d]);
        assert!(val.abs() < 1e-8 * p.eval_abs_f64(&[4.0 * g * g, d * d]).max(1.0));
    }
}
