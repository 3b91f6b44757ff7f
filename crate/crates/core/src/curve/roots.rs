use std::f64::consts::TAU;

use super::{CurveParams, C64};
use crate::error::{NumResult, NumericError};

fn horner(coeffs: &[C64; 6], x: C64) -> (C64, C64) {
    let mut p = coeffs[5];
    let mut dp = C64::new(0.0, 0.0);
    for c in coeffs[..5].iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Fujiwara-type bound on the root moduli of the monic quintic.
fn root_bound(c: &CurveParams) -> f64 {
    let [l4, l6, l8, l10] = c.lambdas();
    let b = [
        l4.norm().powf(1.0 / 2.0),
        l6.norm().powf(1.0 / 3.0),
        l8.norm().powf(1.0 / 4.0),
        (l10.norm() / 2.0).powf(1.0 / 5.0),
    ];
    2.0 * b.into_iter().fold(0.0, f64::max)
}

/// The five roots of `M`, sorted by real part then imaginary part on a
/// `1e−9·scale` grid so that conjugate pairs order deterministically.
///
/// Aberth iteration from a rotated circle, then Newton polishing.
pub fn solve_quintic(c: &CurveParams) -> NumResult<[C64; 5]> {
    let coeffs = c.coeffs();
    let r = root_bound(c);
    if r == 0.0 {
        return Err(NumericError::CurveSingular {
            i: 0,
            j: 1,
            distance: 0.0,
        });
    }
    let scale = r.max(1.0);
    let mut z: [C64; 5] = std::array::from_fn(|k| C64::from_polar(0.5 * r, TAU * k as f64 / 5.0 + 0.4));
    for _ in 0..500 {
        let mut worst = 0.0f64;
        for k in 0..5 {
            let (p, dp) = horner(&coeffs, z[k]);
            if p == C64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let s: C64 = (0..5).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm());
            }
        }
        if worst < 1e-16 * scale {
            break;
        }
    }
    for zk in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(&coeffs, *zk);
            let step = p / dp;
            if step.is_finite() {
                *zk -= step;
            }
        }
    }
    let mut min = (f64::INFINITY, 0, 0);
    for i in 0..5 {
        for j in i + 1..5 {
            let d = (z[i] - z[j]).norm();
            if d < min.0 {
                min = (d, i, j);
            }
        }
    }
    let grid = 1e-9 * scale;
    z.sort_by(|a, b| {
        let qa = (a.re / grid).round();
        let qb = (b.re / grid).round();
        qa.total_cmp(&qb).then(a.im.total_cmp(&b.im))
    });
    if min.0 < 1e-8 * scale {
        return Err(NumericError::CurveSingular {
            i: min.1,
            j: min.2,
            distance: min.0,
        });
    }
    for zk in &z {
        let size: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm() * zk.norm().powi(k as i32))
            .sum();
        let res = horner(&coeffs, *zk).0.norm();
        if res > 1e-10 * size.max(1.0) {
            return Err(NumericError::Precision {
                what: "quintic roots".into(),
                target: 1e-10,
                achieved: res / size.max(1.0),
            });
        }
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifth_roots_of_unity() {
        let r = solve_quintic(&CurveParams::x5_minus_1()).unwrap();
        for z in &r {
            assert!((z.powu(5) - 1.0).norm() < 1e-13);
            assert!((z.norm() - 1.0).abs() < 1e-13);
        }
        assert!((r[4] - C64::new(1.0, 0.0)).norm() < 1e-13);
        assert!(r[0].im < 0.0 && r[1].im > 0.0);
    }

    #[test]
    fn zero_moduli_are_singular() {
        let e = solve_quintic(&CurveParams::real(0.0, 0.0, 0.0, 0.0));
        assert!(matches!(e, Err(NumericError::CurveSingular { .. })));
    }

    #[test]
    fn double_root_is_singular() {
        // (X − 1)²·(X³ + 2X² + 3X + 4) = X⁵ − 5X + 4
        let e = solve_quintic(&CurveParams::real(0.0, 0.0, -5.0, 4.0));
        assert!(matches!(e, Err(NumericError::CurveSingular { .. })), "{e:?}");
    }
}
