//! One line per acceptance criterion, then a single assertion over all of them.

use std::time::{Duration, Instant};

use hypersigma::algebra::{rat, MultiPoly};
use hypersigma::curve::CurveParams;
use hypersigma::inversion::{FitTarget, InversionContext};
use hypersigma::sigma::SigmaEvaluator;
use hypersigma::symbolic::{
    duplication_p11, extract_leading_a1_b1, kummer_reduce, p_ring, rational_limit_sides,
    sigma_ring, verify_duplication_tables, verify_rational_limit, verify_theorem_ab, KummerData,
    PRelations, PaperTables, TheoremForms,
};
use num_complex::Complex64 as C64;

const TOL: f64 = 1e-12;
const THETA_TOL: f64 = 1e-16;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let e = start.elapsed();
    (e < limit, format!("{:.2}s", e.as_secs_f64()))
}

fn c1_tables() -> Outcome {
    let start = Instant::now();
    let derived = kummer_reduce(
        &duplication_p11(&PRelations::printed()).unwrap(),
        &KummerData::printed(),
    );
    let r = verify_duplication_tables(&derived, &PaperTables::printed());
    let (fast, t) = within(start, Duration::from_secs(120));
    outcome(
        r.pass && fast,
        format!(
            "duplication formula vs tables: zero residual={} ({}) in {t}",
            r.pass,
            r.detail.unwrap_or_default()
        ),
    )
}

fn c2_theorem() -> Outcome {
    let start = Instant::now();
    let r = verify_theorem_ab(&PaperTables::printed());
    let (fast, t) = within(start, Duration::from_secs(120));
    outcome(
        r.pass && fast,
        format!("s*A = s1*N' + 2*s3*D' and B = -2*s1*D' exactly: {} in {t}", r.pass),
    )
}

fn c3_rational_limit() -> Outcome {
    let r = verify_rational_limit();
    let (lhs, rhs) = rational_limit_sides(&rat(3));
    let pt = [rat(1), rat(1)];
    let (l, rv) = (lhs.eval_rat(&pt), rhs.eval_rat(&pt));
    let spot = l == Some(rat(-14)) && rv == Some(rat(-14));
    outcome(
        r.pass && spot,
        format!(
            "identity exact: {}; u=(1,1): lhs={} rhs={}",
            r.pass,
            l.map_or("pole".into(), |v| v.to_string()),
            rv.map_or("pole".into(), |v| v.to_string())
        ),
    )
}

fn c4_hygiene() -> Outcome {
    let t = PaperTables::printed();
    let z = p_ring().index_of("z").unwrap();
    let mut bad = Vec::new();
    let mut count = 0;
    let mut check = |label: String, p: &MultiPoly, lw: i64, target: i64| {
        count += 1;
        let w = p.weighted_degree();
        if !w.homogeneous || w.weight.map(|w| w + lw) != Some(target) || p.degree_in(z) > 1 {
            bad.push(label);
        }
    };
    for (k, p) in &t.c {
        check(format!("c_{k}"), p, *k as i64, 28);
    }
    for (q, p) in &t.a {
        check(PaperTables::quad_label('a', q), p, PaperTables::lambda_weight(q), 28);
    }
    for (k, p) in &t.d {
        check(format!("d_{k}"), p, *k as i64, 26);
    }
    for (q, p) in &t.b {
        check(PaperTables::quad_label('b', q), p, PaperTables::lambda_weight(q), 26);
    }
    outcome(
        bad.is_empty(),
        format!("{count} entries, weights 28/26, z-degree <= 1; failing: {bad:?}"),
    )
}

fn c5_structure(ctx: &InversionContext) -> Outcome {
    let extracted = extract_leading_a1_b1(&TheoremForms::printed(), &PaperTables::printed());
    let (a1_ok, b1_zero) = match &extracted {
        Ok((_, b1)) => {
            let ring = sigma_ring();
            let mut pt = vec![rat(0); ring.len()];
            pt[ring.index_of("s3").unwrap()] = rat(-1);
            (true, b1.eval_rat(&pt))
        }
        Err(_) => (false, rat(0)),
    };
    let fit = ctx.leading_coefficient_fit(FitTarget::A1);
    let fit_ok = matches!(&fit, Ok(v) if (v[0] + 6.0).abs() < 1e-4);
    outcome(
        a1_ok && b1_zero == rat(-1) && fit_ok,
        format!(
            "A(s=0)/s1^9 = printed A1: {a1_ok}; B1(0) = {b1_zero}; A1 leading fit = {:?}",
            fit.map(|v| v[0])
        ),
    )
}

fn c6_numeric(ctx: &InversionContext, built: Duration) -> Outcome {
    let start = Instant::now();
    let ev = &ctx.ev;
    let samples = ctx.generic_samples(20, 2024).unwrap();
    let mut quasi: f64 = 0.0;
    for u in &samples[..3] {
        for i in -2..=2 {
            for j in -2..=2 {
                quasi = quasi.max(ev.quasiperiod_residual(*u, [i, j], [-j, i]).unwrap());
            }
        }
    }
    let van = ctx.vanishing_suite(20, 99).unwrap();
    let inv = ctx.inversion_suite(20, 7).unwrap();
    let dec = ctx.check_decompositions(&samples).unwrap();
    let elapsed = built + start.elapsed();
    let mut pass = quasi < 1e-9 && van.pass && elapsed < Duration::from_secs(300);
    let mut parts = vec![
        format!("quasi-periodicity {quasi:.1e}"),
        format!("vanishing {:.1e}", van.max_residual),
    ];
    for c in inv.iter().chain(&dec) {
        pass &= c.pass;
        parts.push(format!("{} {:.1e}", c.name, c.max_residual));
    }
    parts.push(format!("{:.2}s", elapsed.as_secs_f64()));
    outcome(pass, parts.join(", "))
}

fn c7_fits(ctx: &InversionContext) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for which in [FitTarget::F5Combo, FitTarget::F2Combo] {
        let exp = which.expected();
        match ctx.leading_coefficient_fit(which) {
            Ok(got) => {
                let err = got
                    .iter()
                    .zip(&exp)
                    .map(|(g, e)| (g - e).abs())
                    .fold(0.0, f64::max);
                pass &= err < 1e-4;
                let shown: Vec<String> = got.iter().map(|v| format!("{v:.6}")).collect();
                parts.push(format!("{which:?} [{}] err {err:.1e}", shown.join(", ")));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{which:?} failed: {e}"));
            }
        }
    }
    let zero = [C64::new(0.0, 0.0); 2];
    let h0 = ctx.h(zero).unwrap();
    let j = ctx.ev.jet(zero).unwrap();
    let origin = [j.value(), j.d("1"), j.d("11"), j.d("3") + 1.0]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    pass &= (h0 - 2.0).norm() < 1e-9 && origin < 1e-9;
    parts.push(format!("|h(0) - 2| {:.1e}", (h0 - 2.0).norm()));
    parts.push(format!("sigma values at 0 {origin:.1e}"));
    outcome(pass, parts.join(", "))
}

fn c8_tie(ctx: &InversionContext) -> Outcome {
    let samples = ctx.generic_samples(10, 808).unwrap();
    let worst = samples
        .iter()
        .map(|u| ctx.duplication_residual(*u).unwrap())
        .fold(0.0, f64::max);
    outcome(
        worst < 1e-8,
        format!("p11(2u) from sigma vs certified formula, 10 points, max {worst:.1e}"),
    )
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let ctx = SigmaEvaluator::new(CurveParams::x5_minus_1(), TOL, THETA_TOL)
        .and_then(|ev| InversionContext::new(ev, TOL))
        .expect("evaluator for Y^2 = X^5 - 1");
    let built = start.elapsed();

    let results = [
        c1_tables(),
        c2_theorem(),
        c3_rational_limit(),
        c4_hygiene(),
        c5_structure(&ctx),
        c6_numeric(&ctx, built),
        c7_fits(&ctx),
        c8_tie(&ctx),
    ];
    for (i, r) in results.iter().enumerate() {
        println!(
            "criterion {}: {} | {}",
            i + 1,
            if r.pass { "PASS" } else { "FAIL" },
            r.detail
        );
    }
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.pass)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
