//! Concrete genus-2 curves `Y² = X⁵ + λ₄X³ + λ₆X² + λ₈X + λ₁₀`: roots,
//! homology, periods and the Abel–Jacobi map from `∞`.

mod abel;
mod homology;
mod periods;
mod quad;
mod roots;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde_json::{json, Value};
use serde::{Deserialize, Serialize};

use crate::error::{NumResult, NumericError};

pub use abel::{abel_jacobi, lattice_coordinates, lattice_reduce};
pub use homology::{HomologyBasis, CHAIN_TO_CANONICAL};
pub use periods::{compute_periods, symplectic_generators, PeriodData, SignChoice};
pub use quad::{integrate_path, segment_integrals, Form, Scheme, FORMS};
pub use roots::solve_quintic;

pub type C64 = Complex64;

/// Moduli of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveParams {
    #[serde(with = "pair")]
    pub lambda4: C64,
    #[serde(with = "pair")]
    pub lambda6: C64,
    #[serde(with = "pair")]
    pub lambda8: C64,
    #[serde(with = "pair")]
    pub lambda10: C64,
}

/// `[re, im]` JSON encoding for a complex number.
pub(crate) mod pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

impl CurveParams {
    pub fn new(l4: C64, l6: C64, l8: C64, l10: C64) -> Self {
        Self {
            lambda4: l4,
            lambda6: l6,
            lambda8: l8,
            lambda10: l10,
        }
    }

    pub fn real(l4: f64, l6: f64, l8: f64, l10: f64) -> Self {
        Self::new(l4.into(), l6.into(), l8.into(), l10.into())
    }

    /// `Y² = X⁵ − 1`.
    pub fn x5_minus_1() -> Self {
        Self::real(0.0, 0.0, 0.0, -1.0)
    }

    pub fn from_json(src: &str) -> NumResult<Self> {
        serde_json::from_str(src).map_err(|e| NumericError::Input(e.to_string()))
    }

    pub fn lambdas(&self) -> [C64; 4] {
        [self.lambda4, self.lambda6, self.lambda8, self.lambda10]
    }

    /// Coefficients of `M`, constant term first.
    pub fn coeffs(&self) -> [C64; 6] {
        let z = C64::new(0.0, 0.0);
        [
            self.lambda10,
            self.lambda8,
            self.lambda6,
            self.lambda4,
            z,
            C64::new(1.0, 0.0),
        ]
    }

    pub fn m(&self, x: C64) -> C64 {
        self.coeffs().iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    /// Every λ multiplied by `f`.
    pub fn scaled(&self, f: f64) -> Self {
        Self::new(
            self.lambda4 * f,
            self.lambda6 * f,
            self.lambda8 * f,
            self.lambda10 * f,
        )
    }
}

/// Which of the two values `±√M(X)` a point carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheet {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CurvePoint {
    Infinity,
    Affine {
        #[serde(with = "pair")]
        x: C64,
        #[serde(with = "pair")]
        y: C64,
    },
}

impl CurvePoint {
    /// Checks `|Y² − M(X)| ≤ 1e−10·(1 + |M(X)|)`.
    pub fn affine(c: &CurveParams, x: C64, y: C64) -> NumResult<Self> {
        let mx = c.m(x);
        if (y * y - mx).norm() > 1e-10 * (1.0 + mx.norm()) {
            return Err(NumericError::Input(format!(
                "({x}, {y}) is not on the curve: |Y^2 - M(X)| = {:.3e}",
                (y * y - mx).norm()
            )));
        }
        Ok(Self::Affine { x, y })
    }

    /// The point over `X` with `Y = ±√M(X)` (principal root for `Plus`).
    pub fn on_sheet(c: &CurveParams, x: C64, sheet: Sheet) -> Self {
        let y = c.m(x).sqrt();
        let y = match sheet {
            Sheet::Plus => y,
            Sheet::Minus => -y,
        };
        Self::Affine { x, y }
    }

    /// `(X, Y) ↦ (X, −Y)`.
    pub fn involution(&self) -> Self {
        match *self {
            Self::Infinity => Self::Infinity,
            Self::Affine { x, y } => Self::Affine { x, y: -y },
        }
    }

    pub fn sheet(&self) -> Option<Sheet> {
        match *self {
            Self::Infinity => None,
            Self::Affine { y, .. } => {
                if y.re > 0.0 || (y.re == 0.0 && y.im >= 0.0) {
                    Some(Sheet::Plus)
                } else {
                    Some(Sheet::Minus)
                }
            }
        }
    }
}

/// A nonsingular curve together with its sorted branch points.
#[derive(Debug, Clone)]
pub struct Curve {
    pub params: CurveParams,
    pub roots: [C64; 5],
    /// `max(1, max |γᵢ|)`, the length scale used by relative tolerances.
    pub scale: f64,
}

impl Curve {
    pub fn new(params: CurveParams) -> NumResult<Self> {
        let roots = solve_quintic(&params)?;
        let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
        Ok(Self {
            params,
            roots,
            scale,
        })
    }

    pub fn max_root(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// Index of the branch point within `eps·scale` of `x`, if any.
    pub fn branch_point_near(&self, x: C64, eps: f64) -> Option<usize> {
        self.roots
            .iter()
            .position(|r| (r - x).norm() <= eps * self.scale)
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub(crate) fn segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let ab = b - a;
    let t = ((p - a) * ab.conj()).re / ab.norm_sqr();
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}

pub fn c_json(z: C64) -> Value {
    json!([z.re, z.im])
}

/// Row-major `[[[re, im], …], …]`.
pub fn mat_json(m: &Matrix2<C64>) -> Value {
    json!([[c_json(m[(0, 0)]), c_json(m[(0, 1)])], [c_json(m[(1, 0)]), c_json(m[(1, 1)])]])
}
