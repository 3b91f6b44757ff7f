use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector4};

use super::quad::{adaptive, integrate_path};
use super::{segment_distance, Curve, CurvePoint, PeriodData, C64};
use crate::error::{NumResult, NumericError};

const ZERO: C64 = C64::new(0.0, 0.0);

/// `S(t) = ∏ √(1 − γₖt²)`, so that `Y = t⁻⁵S` near `∞` with `X = t⁻²`.
fn s_of(curve: &Curve, t: C64) -> C64 {
    curve.roots.iter().map(|g| (1.0 - g * t * t).sqrt()).product()
}

/// `∫₀^{t₁} (dt/S, t² dt/S)` along the straight segment in the local parameter.
fn local_integral(curve: &Curve, t1: C64, tol: f64) -> NumResult<[C64; 2]> {
    let f = |s: f64| -> [C64; 4] {
        let t = t1 * s;
        let w = t1 / s_of(curve, t);
        [w, w * t * t, ZERO, ZERO]
    };
    let v = adaptive(&f, 0.0, 1.0, tol * (1.0 + t1.norm()))?;
    Ok([v[0], v[1]])
}

/// `u = ∫_∞^P (ω₁, ω₃)` with `ω₁ = −X dX/(2Y)`, `ω₃ = −dX/(2Y)`.
///
/// The path leaves `∞` along a straight ray in `t = X^{−1/2}` up to an
/// anchor of modulus `10·max|γ|`, then runs straight to `X_P`. If the
/// continued `Y` arrives on the other sheet the result is negated, since the
/// involution maps that path onto one ending at `P` and negates both forms.
pub fn abel_jacobi(curve: &Curve, p: &CurvePoint, tol: f64) -> NumResult<[C64; 2]> {
    let (xp, yp) = match *p {
        CurvePoint::Infinity => return Ok([ZERO, ZERO]),
        CurvePoint::Affine { x, y } => (x, y),
    };
    let radius = 10.0 * curve.max_root().max(0.1);
    let (u, y_end) = if xp.norm() >= radius {
        let t = 1.0 / xp.sqrt();
        let u = local_integral(curve, t, tol)?;
        (u, s_of(curve, t) / t.powi(5))
    } else {
        let end_root = curve.branch_point_near(xp, 1e-14);
        let clearance = |xa: C64| -> f64 {
            curve
                .roots
                .iter()
                .enumerate()
                .filter(|(k, _)| Some(*k) != end_root)
                .map(|(_, g)| segment_distance(*g, xa, xp))
                .fold(f64::INFINITY, f64::min)
        };
        let xa = (0..16)
            .map(|k| C64::from_polar(radius, 2.0 * PI * (k as f64 + 0.25) / 16.0))
            .max_by(|a, b| clearance(*a).total_cmp(&clearance(*b)))
            .expect("sixteen candidate anchors");
        if clearance(xa) <= 1e-10 * curve.scale {
            return Err(NumericError::Path(format!("no clear path to X = {xp}")));
        }
        let ta = 1.0 / xa.sqrt();
        let head = local_integral(curve, ta, tol)?;
        let ya = s_of(curve, ta) / ta.powi(5);
        let (tail, y_end) = integrate_path(curve, &[xa, xp], ya, tol)?;
        ([head[0] + tail[0], head[1] + tail[1]], y_end)
    };
    let scale = 1.0 + yp.norm();
    if (y_end - yp).norm() <= 1e-6 * scale {
        Ok(u)
    } else if (y_end + yp).norm() <= 1e-6 * scale {
        Ok([-u[0], -u[1]])
    } else {
        Err(NumericError::Precision {
            what: "continuation of Y along the Abel-Jacobi path".into(),
            target: 1e-6,
            achieved: (y_end - yp).norm().min((y_end + yp).norm()) / scale,
        })
    }
}

/// Real coordinates of `u` on the four lattice generators.
pub fn lattice_coordinates(u: &[C64; 2], periods: &PeriodData) -> NumResult<[f64; 4]> {
    let g = periods.generators();
    let m = Matrix4::from_fn(|r, c| {
        let z = g[c][r % 2];
        if r < 2 {
            z.re
        } else {
            z.im
        }
    });
    let rhs = Vector4::new(u[0].re, u[1].re, u[0].im, u[1].im);
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| NumericError::Domain("period lattice is degenerate".into()))?;
    Ok([x[0], x[1], x[2], x[3]])
}

/// `u` moved into the fundamental cell, with the integer shift removed.
pub fn lattice_reduce(u: &[C64; 2], periods: &PeriodData) -> NumResult<([C64; 2], [i64; 4])> {
    let x = lattice_coordinates(u, periods)?;
    let n: [i64; 4] = x.map(|v| (v + 0.5).floor() as i64);
    let shift = periods.lattice_vector([n[0], n[1]], [n[2], n[3]]);
    Ok(([u[0] - shift[0], u[1] - shift[1]], n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{compute_periods, CurveParams, Sheet};

    fn setup() -> (Curve, PeriodData) {
        let c = Curve::new(CurveParams::real(0.3, -0.2, 0.5, -1.1)).unwrap();
        let p = compute_periods(&c, 1e-13).unwrap();
        (c, p)
    }

    fn is_lattice(u: &[C64; 2], p: &PeriodData) -> bool {
        let x = lattice_coordinates(u, p).unwrap();
        x.iter().all(|v| (v - v.round()).abs() < 1e-8)
    }

    #[test]
    fn infinity_maps_to_zero() {
        let (c, _) = setup();
        assert_eq!(abel_jacobi(&c, &CurvePoint::Infinity, 1e-12).unwrap(), [ZERO; 2]);
    }

    #[test]
    fn involution_negates() {
        let (c, p) = setup();
        for x in [C64::new(0.4, 0.7), C64::new(-2.0, 0.1), C64::new(30.0, -4.0)] {
            let pt = CurvePoint::on_sheet(&c.params, x, Sheet::Plus);
            let u = abel_jacobi(&c, &pt, 1e-13).unwrap();
            let v = abel_jacobi(&c, &pt.involution(), 1e-13).unwrap();
            assert!(is_lattice(&[u[0] + v[0], u[1] + v[1]], &p));
        }
    }

    #[test]
    fn branch_points_are_half_periods() {
        let (c, p) = setup();
        for g in c.roots {
            let u = abel_jacobi(&c, &CurvePoint::Affine { x: g, y: ZERO }, 1e-12).unwrap();
            assert!(is_lattice(&[u[0] * 2.0, u[1] * 2.0], &p), "{g}");
        }
    }

    #[test]
    fn reducing_a_generator_gives_zero() {
        let (_, p) = setup();
        for g in p.generators() {
            let (r, _) = lattice_reduce(&g, &p).unwrap();
            assert!(r[0].norm() < 1e-10 && r[1].norm() < 1e-10);
        }
    }
}
