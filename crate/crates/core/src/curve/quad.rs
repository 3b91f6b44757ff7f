use std::f64::consts::PI;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use serde::Serialize;

use super::{Curve, CurveParams, C64};
use crate::error::{NumResult, NumericError};

/// The differentials integrated over cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Form {
    /// `−X dX/(2Y)`
    Omega1,
    /// `−dX/(2Y)`
    Omega3,
    /// `−X² dX/(2Y)`
    Eta1,
    /// `(−λ₄X − 3X³) dX/(2Y)`
    Eta3,
}

pub const FORMS: [Form; 4] = [Form::Omega1, Form::Omega3, Form::Eta1, Form::Eta3];

/// Numerators `f` with `form = f(X) dX / Y`, in [`FORMS`] order.
fn numerators(c: &CurveParams, x: C64) -> [C64; 4] {
    [
        -x / 2.0,
        C64::new(-0.5, 0.0),
        -x * x / 2.0,
        (-c.lambda4 * x - 3.0 * x * x * x) / 2.0,
    ]
}

/// Quadrature rules for the cut integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    /// Gauss–Chebyshev in `t`, i.e. the midpoint rule in `θ` with `t = cos θ`.
    Chebyshev,
    /// Gauss–Legendre in `θ ∈ [0, π]`.
    LegendreTheta,
}

fn legendre(n: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(NonZeroUsize::new(n).expect("positive degree"))
        .as_node_weight_pairs()
        .to_vec()
}

fn gl20() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| legendre(20))
}

fn add4(a: [C64; 4], b: [C64; 4]) -> [C64; 4] {
    std::array::from_fn(|i| a[i] + b[i])
}

fn max_diff(a: &[C64; 4], b: &[C64; 4]) -> f64 {
    (0..4).map(|i| (a[i] - b[i]).norm()).fold(0.0, f64::max)
}

fn max_norm(a: &[C64; 4]) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `∫_a^b f` by 20-point Gauss–Legendre.
fn gl_panel<F: Fn(f64) -> [C64; 4]>(f: &F, a: f64, b: f64) -> [C64; 4] {
    let h = 0.5 * (b - a);
    let m = 0.5 * (b + a);
    let mut acc = [C64::new(0.0, 0.0); 4];
    for &(x, w) in gl20() {
        let v = f(m + h * x);
        for i in 0..4 {
            acc[i] += v[i] * (w * h);
        }
    }
    acc
}

/// Adaptive bisection with a 20-point rule per panel; `tol` is absolute.
pub(crate) fn adaptive<F: Fn(f64) -> [C64; 4]>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> NumResult<[C64; 4]> {
    fn rec<F: Fn(f64) -> [C64; 4]>(
        f: &F,
        a: f64,
        b: f64,
        whole: [C64; 4],
        tol: f64,
        depth: u32,
    ) -> Result<[C64; 4], f64> {
        let m = 0.5 * (a + b);
        let l = gl_panel(f, a, m);
        let r = gl_panel(f, m, b);
        let sum = add4(l, r);
        let err = max_diff(&sum, &whole);
        if err <= tol || (err <= 64.0 * f64::EPSILON * max_norm(&sum)) {
            return Ok(sum);
        }
        if depth == 0 {
            return Err(err);
        }
        let l = rec(f, a, m, l, tol / 2.0, depth - 1)?;
        let r = rec(f, m, b, r, tol / 2.0, depth - 1)?;
        Ok(add4(l, r))
    }
    let whole = gl_panel(f, a, b);
    rec(f, a, b, whole, tol, 40).map_err(|achieved| NumericError::Precision {
        what: "adaptive path quadrature".into(),
        target: tol,
        achieved,
    })
}

/// `∫_a^b (ω₁, ω₃, η₁, η₃)` along the straight cut between the branch
/// points `a`, `b`, on the branch `Y = i·h·√(1−t²)·√R(X)` where
/// `X = m + h·t` and `R` is the product over the other three roots.
///
/// With `t = cos θ` the endpoint square roots cancel:
/// `∫ f dX/Y = −i ∫₀^π f(X)/√R(X) dθ`.
pub fn segment_integrals(
    c: &CurveParams,
    a: C64,
    b: C64,
    others: &[C64; 3],
    n: usize,
    scheme: Scheme,
) -> [C64; 4] {
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let sqrt_r = |x: C64| -> C64 {
        others
            .iter()
            .map(|g| ((x - g) / (m - g)).sqrt() * (m - g).sqrt())
            .product()
    };
    let g = |theta: f64| -> [C64; 4] {
        let x = m + h * theta.cos();
        let s = sqrt_r(x);
        numerators(c, x).map(|f| f / s)
    };
    let mut acc = [C64::new(0.0, 0.0); 4];
    match scheme {
        Scheme::Chebyshev => {
            for k in 0..n {
                let theta = PI * (k as f64 + 0.5) / n as f64;
                acc = add4(acc, g(theta));
            }
            acc = acc.map(|z| z * (PI / n as f64));
        }
        Scheme::LegendreTheta => {
            for (x, w) in legendre(n) {
                let v = g(0.5 * PI * (x + 1.0));
                for i in 0..4 {
                    acc[i] += v[i] * (0.5 * PI * w);
                }
            }
        }
    }
    acc.map(|z| z * C64::new(0.0, -1.0))
}

/// [`segment_integrals`] with node doubling until successive results
/// differ by at most `tol·(1 + |value|)`. Returns the value and node count.
pub(crate) fn segment_converged(
    c: &CurveParams,
    a: C64,
    b: C64,
    others: &[C64; 3],
    tol: f64,
    scheme: Scheme,
) -> NumResult<([C64; 4], usize)> {
    let mut n = 32;
    let mut prev = segment_integrals(c, a, b, others, n, scheme);
    let mut diff = f64::INFINITY;
    while n < 8192 {
        n *= 2;
        let cur = segment_integrals(c, a, b, others, n, scheme);
        diff = max_diff(&cur, &prev);
        if diff <= tol * (1.0 + max_norm(&cur)) {
            return Ok((cur, n));
        }
        prev = cur;
    }
    Err(NumericError::Precision {
        what: "cut integral".into(),
        target: tol,
        achieved: diff,
    })
}

/// `∫ (ω₁, ω₃, η₁, η₃)` along the polyline `waypoints`, continuing `Y`
/// analytically from `y0` at the first waypoint. Returns the integrals and
/// the continued `Y` at the last waypoint.
///
/// The final waypoint may be a branch point: the last segment uses
/// `s = 1 − r²`, which removes the square-root endpoint singularity.
pub fn integrate_path(
    curve: &Curve,
    waypoints: &[C64],
    y0: C64,
    tol: f64,
) -> NumResult<([C64; 4], C64)> {
    let mut total = [C64::new(0.0, 0.0); 4];
    let mut y = y0;
    let nseg = waypoints.len().saturating_sub(1);
    for k in 0..nseg {
        let (p, q) = (waypoints[k], waypoints[k + 1]);
        if (q - p).norm() == 0.0 {
            continue;
        }
        let last = k + 1 == nseg;
        for g in &curve.roots {
            let d = super::segment_distance(*g, p, q);
            let at_end = last && (g - q).norm() <= 1e-14 * curve.scale;
            if d <= 1e-12 * curve.scale && !at_end {
                return Err(NumericError::Path(format!(
                    "segment {p} -> {q} meets branch point {g}"
                )));
            }
        }
        let ratio_y = |x: C64| -> C64 {
            curve
                .roots
                .iter()
                .map(|g| ((x - g) / (p - g)).sqrt())
                .product::<C64>()
                * y
        };
        let dq = q - p;
        let c = &curve.params;
        let f = |s: f64| -> [C64; 4] {
            let x = p + dq * s;
            let yy = ratio_y(x);
            numerators(c, x).map(|n| n * dq / yy)
        };
        let scale = max_norm(&gl_panel(&|s| f(s), 0.0, 0.5)).max(1.0);
        let part = if last {
            let fr = |r: f64| -> [C64; 4] {
                if r == 0.0 {
                    return [C64::new(0.0, 0.0); 4];
                }
                f(1.0 - r * r).map(|v| v * (2.0 * r))
            };
            adaptive(&fr, 0.0, 1.0, tol * scale)?
        } else {
            adaptive(&f, 0.0, 1.0, tol * scale)?
        };
        total = add4(total, part);
        y = ratio_y(q);
    }
    Ok((total, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve() -> Curve {
        Curve::new(CurveParams::x5_minus_1()).unwrap()
    }

    #[test]
    fn two_schemes_agree() {
        let cv = curve();
        let r = cv.roots;
        let others = [r[2], r[3], r[4]];
        let (a, _) = segment_converged(&cv.params, r[0], r[1], &others, 1e-13, Scheme::Chebyshev).unwrap();
        let (b, _) =
            segment_converged(&cv.params, r[0], r[1], &others, 1e-13, Scheme::LegendreTheta).unwrap();
        assert!(max_diff(&a, &b) < 1e-11, "{a:?} vs {b:?}");
    }

    #[test]
    fn reversed_path_negates() {
        let cv = curve();
        let p = C64::new(0.3, 0.2);
        let q = C64::new(-0.4, 1.5);
        let yp = cv.params.m(p).sqrt();
        let (fwd, yq) = integrate_path(&cv, &[p, q], yp, 1e-13).unwrap();
        let (back, yb) = integrate_path(&cv, &[q, p], yq, 1e-13).unwrap();
        assert!((yb - yp).norm() < 1e-12);
        for i in 0..4 {
            assert!((fwd[i] + back[i]).norm() < 1e-11);
        }
    }

    #[test]
    fn closed_contour_without_branch_points_vanishes() {
        let cv = curve();
        let centre = C64::new(0.1, -0.2);
        let pts: Vec<C64> = (0..=24)
            .map(|k| centre + C64::from_polar(0.3, 2.0 * PI * k as f64 / 24.0))
            .collect();
        let y0 = cv.params.m(pts[0]).sqrt();
        let (v, y1) = integrate_path(&cv, &pts, y0, 1e-13).unwrap();
        assert!((y1 - y0).norm() < 1e-12);
        assert!(max_norm(&v) < 1e-11, "{v:?}");
    }
}
