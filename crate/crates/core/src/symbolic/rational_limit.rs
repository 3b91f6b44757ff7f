use std::time::Instant;

use serde_json::json;

use super::duplication::{point_json, witness_point};
use super::{u_ring, CertReport};
use crate::algebra::{rat, MultiPoly, Rat, RationalFunction};

fn u(s: &str) -> MultiPoly {
    MultiPoly::parse(u_ring(), s).expect("rational-limit expression parses")
}

/// `℘₁₁ = (σ₁² − σσ₁₁)/σ²` for a polynomial σ in `u₁, u₃`.
fn p11_of(sigma: &MultiPoly) -> RationalFunction {
    let s1 = sigma.derivative(0);
    let s11 = s1.derivative(0);
    RationalFunction::new(&s1.pow(2) - &(sigma * &s11), sigma.pow(2))
        .expect("σ is not identically zero")
}

/// `(f₂ − g₂, σ·k(10u₁³ − 3u₃)/(u₁²(4u₁³ − 3u₃)²))` with `σ = u₁³/3 − u₃`,
/// `f₂ = −σ₃/σ₁` and `g₂ = ℘₁₁(2u)/2`.
pub fn rational_limit_sides(k: &Rat) -> (RationalFunction, RationalFunction) {
    let sigma = u("u1^3/3 - u3");
    let f2 = RationalFunction::new(-&sigma.derivative(1), sigma.derivative(0)).unwrap();
    let p11 = p11_of(&sigma);
    let at_2u = [rat(2), rat(2)];
    let g2 = RationalFunction::new(
        p11.num.scale_vars(&at_2u),
        p11.den.scale_vars(&at_2u).scale(&rat(2)),
    )
    .unwrap();
    let lhs = &f2 - &g2;
    let rhs = RationalFunction::new(
        &sigma * &u("10*u1^3 - 3*u3").scale(k),
        &u("u1^2") * &u("4*u1^3 - 3*u3").pow(2),
    )
    .unwrap();
    (lhs, rhs)
}

pub fn verify_rational_limit() -> CertReport {
    verify_rational_limit_with(&rat(3))
}

/// The rational-limit identity with the leading factor replaced by `k`.
pub fn verify_rational_limit_with(k: &Rat) -> CertReport {
    let start = Instant::now();
    let (lhs, rhs) = rational_limit_sides(k);
    let r = lhs.cross_residual(&rhs);
    let mut report = CertReport::timed("rational_limit", start).passed(r.is_zero());
    if !r.is_zero() {
        let pt = witness_point(&(&r * &(&lhs.den * &rhs.den)), 0x71)
            .unwrap_or_else(|| vec![rat(1), rat(1)]);
        let val = |f: &RationalFunction| f.eval_rat(&pt).map(|v| v.to_string());
        report = report.with_witness(json!({
            "point": point_json(u_ring().names(), &pt),
            "lhs": val(&lhs),
            "rhs": val(&rhs),
        }));
    }
    report
}
