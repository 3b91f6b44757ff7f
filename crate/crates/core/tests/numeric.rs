use std::sync::OnceLock;

use hypersigma::curve::{
    abel_jacobi, integrate_path, lattice_coordinates, lattice_reduce, CurveParams, CurvePoint,
    Sheet, C64,
};
use hypersigma::error::NumericError;
use hypersigma::inversion::InversionContext;
use hypersigma::sigma::SigmaEvaluator;
use hypersigma::symbolic::KummerData;
use hypersigma::theta::DerivIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-12;

fn ctx() -> &'static InversionContext {
    static CTX: OnceLock<InversionContext> = OnceLock::new();
    CTX.get_or_init(|| {
        let ev = SigmaEvaluator::new(CurveParams::x5_minus_1(), TOL, 1e-16).unwrap();
        InversionContext::new(ev, TOL).unwrap()
    })
}

fn generic(n: usize) -> Vec<[C64; 2]> {
    ctx().generic_samples(n, 11).unwrap()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
}

fn neg(u: [C64; 2]) -> [C64; 2] {
    [-u[0], -u[1]]
}

#[test]
fn sigma_parity_by_derivative_order() {
    let ev = &ctx().ev;
    for u in generic(10) {
        let p = ev.jet(u).unwrap();
        let m = ev.jet(neg(u)).unwrap();
        for s in ["", "1", "3", "11", "13", "33", "111", "113", "133", "333"] {
            let sign = if s.len() % 2 == 0 { -1.0 } else { 1.0 };
            let scale = p.scale;
            assert!((m.d(s) - p.d(s) * sign).norm() < 1e-10 * scale, "sigma_{s}");
        }
    }
}

#[test]
fn sigma_derivatives_match_finite_differences() {
    let ev = &ctx().ev;
    let u = generic(1)[0];
    let h = 1e-5;
    let f = |u: [C64; 2]| ev.eval(u, DerivIndex::VALUE).unwrap();
    let fd1 = (f([u[0] + h, u[1]]) - f([u[0] - h, u[1]])) / (2.0 * h);
    let fd3 = (f([u[0], u[1] + h]) - f([u[0], u[1] - h])) / (2.0 * h);
    assert!(rel(fd1, ev.eval(u, DerivIndex::new(1, 0).unwrap()).unwrap()) < 1e-6);
    assert!(rel(fd3, ev.eval(u, DerivIndex::new(0, 1).unwrap()).unwrap()) < 1e-6);
}

#[test]
fn sigma_values_at_origin() {
    let j = ctx().ev.jet([C64::new(0.0, 0.0); 2]).unwrap();
    assert!(j.value().norm() < 1e-9);
    assert!(j.d("1").norm() < 1e-9);
    assert!(j.d("11").norm() < 1e-9);
    assert!((j.d("3") + 1.0).norm() < 1e-9);
    assert_eq!(DerivIndex::new(2, 2), Err(NumericError::UnsupportedOrder(4)));
}

#[test]
fn quasi_periodicity_over_grid() {
    let ev = &ctx().ev;
    for u in generic(3) {
        assert_eq!(ev.quasiperiod_residual(u, [0, 0], [0, 0]).unwrap(), 0.0);
        for i in -2..=2 {
            for j in -2..=2 {
                let r = ev.quasiperiod_residual(u, [i, j], [-j, i]).unwrap();
                assert!(r < 1e-9, "m1=({i},{j}) residual {r:.2e}");
            }
        }
        let unsigned = ev.quasiperiod_residual_with(u, [1, 0], [0, 0], false).unwrap();
        assert!((unsigned - 2.0).abs() < 1e-6);
    }
}

#[test]
fn p_functions_are_periodic() {
    let ev = &ctx().ev;
    for u in generic(3) {
        let om = ev.periods.lattice_vector([1, -1], [0, 1]);
        let a = ev.jet(u).unwrap();
        let b = ev.jet([u[0] + om[0], u[1] + om[1]]).unwrap();
        for ij in ["11", "13", "33"] {
            assert!(rel(a.p(ij), b.p(ij)) < 1e-8);
        }
    }
}

#[test]
fn kummer_relation_holds_numerically() {
    let c = ctx();
    let q = KummerData::printed().quartic();
    let l = c.ev.curve.params.lambdas();
    for u in generic(10) {
        let j = c.ev.jet(u).unwrap();
        let (x, y, z) = (j.p("11"), j.p("13"), j.p("33"));
        let pt = [x, y, z, l[0], l[1], l[2], l[3]];
        let scale = (1.0 + x.norm()).powi(2) * (1.0 + z.norm()).powi(2) + (1.0 + y.norm()).powi(4);
        assert!(q.eval_complex(&pt).norm() < 1e-8 * scale);
    }
}

#[test]
fn riemann_vanishing_and_singularity() {
    let c = ctx();
    for p in c.random_points(20, 21) {
        let u = abel_jacobi(&c.ev.curve, &p, TOL).unwrap();
        let j = c.ev.jet(u).unwrap();
        assert!(j.value().norm() / j.scale < 1e-8);
        assert!(j.d("1").norm() + j.d("3").norm() > 1e-6);
        let off = c.ev.jet([u[0] + 0.1, u[1] + 0.1]).unwrap();
        assert!(off.value().norm() / off.scale > 1e-3);
    }
}

#[test]
fn abel_jacobi_is_additive_and_reduces_to_integers() {
    let c = ctx();
    let curve = &c.ev.curve;
    let a = C64::new(0.4, 1.3);
    let b = C64::new(-1.5, 0.8);
    let pa = CurvePoint::on_sheet(&curve.params, a, Sheet::Plus);
    let ua = abel_jacobi(curve, &pa, TOL).unwrap();
    let ya = curve.params.m(a).sqrt();
    let (arc, yb) = integrate_path(curve, &[a, C64::new(-0.5, 1.6), b], ya, TOL).unwrap();
    let ub = abel_jacobi(curve, &CurvePoint::Affine { x: b, y: yb }, TOL).unwrap();
    let d = [ua[0] + arc[0] - ub[0], ua[1] + arc[1] - ub[1]];
    let x = lattice_coordinates(&d, &c.ev.periods).unwrap();
    assert!(x.iter().all(|v| (v - v.round()).abs() < 1e-9), "{x:?}");

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let u = [
            C64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)),
            C64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)),
        ];
        let (r, _) = lattice_reduce(&u, &c.ev.periods).unwrap();
        let x = lattice_coordinates(&[u[0] - r[0], u[1] - r[1]], &c.ev.periods).unwrap();
        assert!(x.iter().all(|v| (v - v.round()).abs() < 1e-9));
        let y = lattice_coordinates(&r, &c.ev.periods).unwrap();
        assert!(y.iter().all(|v| (-0.5 - 1e-12..0.5 + 1e-12).contains(v)));
    }
    let zero = lattice_reduce(&[C64::new(0.0, 0.0); 2], &c.ev.periods).unwrap().0;
    assert_eq!(zero, [C64::new(0.0, 0.0); 2]);
}

#[test]
fn calibration_is_stable() {
    let c = ctx();
    for ray in hypersigma::sigma::CALIBRATION_RAYS {
        assert!(rel(c.ev.ray_constant(ray).unwrap(), c.ev.c) < 1e-7);
    }
    let mut wide = c.ev.clone();
    wide.extra_radius = 3;
    let s3 = wide.eval([C64::new(0.0, 0.0); 2], DerivIndex::new(0, 1).unwrap()).unwrap();
    assert!((s3 + 1.0).norm() < 1e-9);
}

#[test]
fn leading_term_of_sigma() {
    let ev = &ctx().ev;
    let ts = [0.05, 0.04, 0.03, 0.02];
    let ray = [C64::new(0.8, 0.0), C64::new(-0.3, 0.0)];
    let (c3, _) = ev.leading_term_fit(ray, &ts).unwrap();
    let lead = ray[0].powi(3) / 3.0 - ray[1];
    assert!(rel(c3, lead) < 1e-6);
    let degenerate = [C64::new(1.2, 0.0), C64::new(1.2f64.powi(3) / 3.0, 0.0)];
    let (c3, _) = ev.leading_term_fit(degenerate, &ts).unwrap();
    assert!(c3.norm() < 1e-8, "{c3}");

    let small = SigmaEvaluator::new(CurveParams::real(0.03, -0.02, 0.05, -0.11), TOL, 1e-16)
        .unwrap();
    let base = SigmaEvaluator::new(CurveParams::real(0.3, -0.2, 0.5, -1.1), TOL, 1e-16).unwrap();
    let (a, _) = small.leading_term_fit(ray, &ts).unwrap();
    let (b, _) = base.leading_term_fit(ray, &ts).unwrap();
    assert!(rel(a, b) < 1e-6);
}

#[test]
fn inversion_function_parities() {
    let c = ctx();
    for u in generic(5) {
        assert!(rel(c.f2(u).unwrap(), c.f2(neg(u)).unwrap()) < 1e-10);
        assert!(rel(c.f5(u).unwrap(), -c.f5(neg(u)).unwrap()) < 1e-10);
        assert!(rel(c.h(u).unwrap(), c.h(neg(u)).unwrap()) < 1e-10);
    }
    assert!((c.h([C64::new(0.0, 0.0); 2]).unwrap() - 2.0).norm() < 1e-9);
}

#[test]
fn inversion_at_random_points() {
    for check in ctx().inversion_suite(20, 5).unwrap() {
        assert!(check.pass, "{check:?}");
    }
}

#[test]
fn poles_at_infinity_and_branch_points() {
    let c = ctx();
    assert!(matches!(
        c.check_inversion(&CurvePoint::Infinity),
        Err(NumericError::Pole { .. })
    ));
    assert!(matches!(
        c.f2([C64::new(0.0, 0.0); 2]),
        Err(NumericError::Pole { .. })
    ));
    let g = c.ev.curve.roots[0];
    let r = c
        .check_inversion(&CurvePoint::Affine { x: g, y: C64::new(0.0, 0.0) })
        .unwrap();
    assert!(matches!(r.g2, Err(NumericError::Pole { .. })), "{:?}", r.g2);
    assert!(r.f2.unwrap() < 1e-8);
    assert!(r.f5.unwrap() < 1e-8);
    assert!(r.g5.unwrap() < 1e-8);
}

#[test]
fn f2_and_g2_coincide_on_the_curve() {
    let c = ctx();
    for p in c.random_points(20, 8) {
        let v = abel_jacobi(&c.ev.curve, &p, TOL).unwrap();
        let (f2, g2) = c.f2g2(v).unwrap();
        assert!((f2 - g2).norm() < 1e-7 * (1.0 + f2.norm()));
    }
}

#[test]
fn g_functions_are_periodic() {
    let c = ctx();
    let om = c.ev.periods.lattice_vector([0, 1], [1, 0]);
    let shift = |u: [C64; 2]| [u[0] + om[0], u[1] + om[1]];
    for u in generic(3) {
        assert!(rel(c.g2(u).unwrap(), c.g2(shift(u)).unwrap()) < 1e-8);
    }
    // g5 is built from σ-derivatives that pick up σ-multiples under a
    // period shift, so it is periodic only where σ vanishes
    for p in c.random_points(3, 17) {
        let v = abel_jacobi(&c.ev.curve, &p, TOL).unwrap();
        assert!(rel(c.g5(v).unwrap(), c.g5(shift(v)).unwrap()) < 1e-8);
    }
}

#[test]
fn decompositions_hold_and_mutation_breaks_them() {
    let c = ctx();
    let us = generic(20);
    for check in c.check_decompositions(&us).unwrap() {
        assert!(check.pass, "{check:?}");
    }
    let bad = InversionContext::with_alpha10_flipped(c.ev.clone(), TOL).unwrap();
    let worst = us
        .iter()
        .map(|u| bad.decomposition_residuals(*u).unwrap().1)
        .fold(0.0, f64::max);
    assert!(worst > 1e-2);
}

#[test]
fn decomposition_residual_improves_with_theta_precision() {
    let c = ctx();
    let u = generic(1)[0];
    let residual = |tol: f64, extra: i64| {
        let mut ev = c.ev.clone();
        ev.theta_tol = tol;
        ev.extra_radius = extra;
        InversionContext::new(ev, TOL)
            .unwrap()
            .decomposition_residuals(u)
            .unwrap()
            .0
    };
    let coarse = residual(1e-1, -2);
    let fine = residual(1e-8, 0);
    assert!(coarse >= 10.0 * fine);
}

#[test]
fn a_reduces_to_leading_part_on_the_curve() {
    let c = ctx();
    for p in c.random_points(5, 13) {
        let v = abel_jacobi(&c.ev.curve, &p, TOL).unwrap();
        let (a, _) = c.ab(v).unwrap();
        let (a1, _) = c.a1_b1(v).unwrap();
        let s1 = c.ev.eval(v, DerivIndex::new(1, 0).unwrap()).unwrap();
        assert!(rel(a, s1.powi(9) * a1) < 1e-7);
    }
}

#[test]
fn duplication_formula_matches_sigma_at_2u() {
    let c = ctx();
    for u in generic(10) {
        assert!(c.duplication_residual(u).unwrap() < 1e-8);
    }
}

#[test]
fn singular_curve_is_rejected() {
    let r = SigmaEvaluator::new(CurveParams::real(0.0, 0.0, 0.0, 0.0), TOL, 1e-16);
    assert!(matches!(r, Err(NumericError::CurveSingular { .. })));
}
