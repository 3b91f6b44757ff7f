//! The inversion functions `f₂, g₂, f₅, g₅`, the auxiliary `h`, the `A, B`
//! of the σ-decomposition, and their numeric checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::curve::{abel_jacobi, lattice_reduce, CurvePoint, Sheet, C64};
use crate::error::{NumResult, NumericError};
use crate::sigma::{least_squares, SigmaEvaluator, SigmaJet};
use crate::symbolic::{PaperTables, TheoremForms, TheoremPolys};
use crate::algebra::MultiPoly;

/// A denominator counts as zero below this fraction of its σ-data scale.
pub const POLE_GUARD: f64 = 1e-6;

/// Arguments `t` of the leading-coefficient fits.
pub const FIT_TS: [f64; 4] = [0.05, 0.04, 0.03, 0.02];

/// Rays `(a₁, a₃)` of the leading-coefficient fits.
pub const FIT_RAYS: [[f64; 2]; 5] = [
    [1.0, 0.2],
    [0.7, -0.9],
    [-0.4, 1.1],
    [1.2, 0.8],
    [0.3, -0.5],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitTarget {
    F2Combo,
    F5Combo,
    A1,
    B1,
}

impl FitTarget {
    /// Monomials `u₁^i u₃^j` of the fitted leading part, and its weight.
    fn basis(self) -> (&'static [(i32, i32)], i32) {
        match self {
            Self::F2Combo => (&[(6, 0), (3, 1), (0, 2)], 6),
            Self::F5Combo => (&[(9, 0), (6, 1), (3, 2), (0, 3)], 9),
            Self::A1 => (&[(1, 0)], 1),
            Self::B1 => (&[(0, 0)], 0),
        }
    }

    /// The printed leading coefficients, on the same basis.
    pub fn expected(self) -> Vec<f64> {
        match self {
            Self::F2Combo => vec![80.0 / 9.0, -88.0 / 3.0, 8.0],
            Self::F5Combo => vec![4.0 / 3.0, -4.0, 0.0, 0.0],
            Self::A1 => vec![-6.0],
            Self::B1 => vec![-1.0],
        }
    }
}

/// One named residual check.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualCheck {
    pub name: String,
    pub max_residual: f64,
    pub samples: usize,
    pub pass: bool,
}

impl ResidualCheck {
    pub fn new(name: &str, residuals: &[f64], threshold: f64) -> Self {
        let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
        Self {
            name: name.to_string(),
            max_residual,
            samples: residuals.len(),
            pass: !residuals.is_empty() && max_residual < threshold,
        }
    }
}

/// Residuals `|X − f₂|, |X − g₂|, |Y − f₅|, |Y − g₅|` at `v = I(P)`,
/// each relative to `1 + |X|` or `1 + |Y|`; `Err` marks a pole.
#[derive(Debug, Clone)]
pub struct InversionReport {
    pub point: CurvePoint,
    pub v: [C64; 2],
    pub f2: NumResult<f64>,
    pub g2: NumResult<f64>,
    pub f5: NumResult<f64>,
    pub g5: NumResult<f64>,
}

impl InversionReport {
    pub fn all(&self) -> [&NumResult<f64>; 4] {
        [&self.f2, &self.g2, &self.f5, &self.g5]
    }
}

pub struct InversionContext {
    pub ev: SigmaEvaluator,
    pub tol: f64,
    theorem: TheoremPolys,
    alpha10_flipped: bool,
}

fn pole_check(what: &str, den: C64, scale: f64) -> NumResult<()> {
    if den.norm() < POLE_GUARD * scale || !den.is_finite() {
        return Err(NumericError::Pole {
            what: what.to_string(),
            magnitude: den.norm(),
        });
    }
    Ok(())
}

fn first_order_scale(j: &SigmaJet) -> f64 {
    [j.value(), j.d("1"), j.d("3")]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

impl InversionContext {
    pub fn new(ev: SigmaEvaluator, tol: f64) -> NumResult<Self> {
        Self::build(ev, tol, false)
    }

    /// A context whose `A` carries a sign-flipped `α₁₀` (mutation hook).
    pub fn with_alpha10_flipped(ev: SigmaEvaluator, tol: f64) -> NumResult<Self> {
        Self::build(ev, tol, true)
    }

    fn build(ev: SigmaEvaluator, tol: f64, flip: bool) -> NumResult<Self> {
        let mut forms = TheoremForms::printed();
        if flip {
            forms = forms.with_alpha10_flipped();
        }
        let theorem = TheoremPolys::build(&forms, &PaperTables::printed())
            .map_err(|e| NumericError::Input(e.to_string()))?;
        Ok(Self {
            ev,
            tol,
            theorem,
            alpha10_flipped: flip,
        })
    }

    pub fn alpha10_flipped(&self) -> bool {
        self.alpha10_flipped
    }

    fn double(u: [C64; 2]) -> [C64; 2] {
        [u[0] * 2.0, u[1] * 2.0]
    }

    pub fn f2(&self, u: [C64; 2]) -> NumResult<C64> {
        let j = self.ev.jet(u)?;
        pole_check("f2", j.d("1"), first_order_scale(&j))?;
        Ok(-j.d("3") / j.d("1"))
    }

    /// `℘₁₁(2u)`.
    pub fn p11_double(&self, u: [C64; 2]) -> NumResult<C64> {
        let j = self.ev.jet(Self::double(u))?;
        pole_check("p11(2u)", j.value(), first_order_scale(&j))?;
        Ok(j.p("11"))
    }

    pub fn g2(&self, u: [C64; 2]) -> NumResult<C64> {
        self.p11_double(u).map(|p| p / 2.0)
    }

    pub fn f2g2(&self, u: [C64; 2]) -> NumResult<(C64, C64)> {
        Ok((self.f2(u)?, self.g2(u)?))
    }

    pub fn f5(&self, u: [C64; 2]) -> NumResult<C64> {
        let j = self.ev.jet(u)?;
        pole_check("f5", j.d("1"), first_order_scale(&j))?;
        let s2 = self.ev.eval(Self::double(u), crate::theta::DerivIndex::VALUE)?;
        Ok(s2 / (j.d("1").powi(4) * 2.0))
    }

    pub fn g5(&self, u: [C64; 2]) -> NumResult<C64> {
        let j = self.ev.jet(u)?;
        pole_check("g5", j.d("1"), first_order_scale(&j))?;
        Ok(g5_numerator(&j) / (j.d("1").powi(3) * 2.0))
    }

    pub fn f5g5(&self, u: [C64; 2]) -> NumResult<(C64, C64)> {
        Ok((self.f5(u)?, self.g5(u)?))
    }

    pub fn h(&self, u: [C64; 2]) -> NumResult<C64> {
        Ok(h_of(&self.ev.jet(u)?))
    }

    fn sigma_point(&self, j: &SigmaJet) -> Vec<C64> {
        let l = self.ev.curve.params.lambdas();
        vec![
            j.value(),
            j.d("1"),
            j.d("3"),
            j.d("11"),
            j.d("13"),
            j.d("33"),
            l[0],
            l[1],
            l[2],
            l[3],
        ]
    }

    /// `(A, B)` of the σ-decomposition at `u`.
    pub fn ab(&self, u: [C64; 2]) -> NumResult<(C64, C64)> {
        let pt = self.sigma_point(&self.ev.jet(u)?);
        Ok((self.theorem.a.eval_complex(&pt), self.theorem.b.eval_complex(&pt)))
    }

    /// `A₁` and `B₁` of the leading parts, evaluated at `u`.
    pub fn a1_b1(&self, u: [C64; 2]) -> NumResult<(C64, C64)> {
        let forms = TheoremForms::printed();
        let parse = |s: &str| {
            MultiPoly::parse(crate::symbolic::sigma_ring(), s)
                .map_err(|e| NumericError::Input(e.to_string()))
        };
        let pt = self.sigma_point(&self.ev.jet(u)?);
        Ok((
            parse(&forms.a1)?.eval_complex(&pt),
            parse(&forms.b1)?.eval_complex(&pt),
        ))
    }

    /// The certified duplication formula `N/D` at the numeric `℘ᵢⱼ(u)`.
    pub fn duplication_formula(&self, u: [C64; 2]) -> NumResult<C64> {
        let j = self.ev.jet(u)?;
        pole_check("p_ij(u)", j.value(), first_order_scale(&j))?;
        let l = self.ev.curve.params.lambdas();
        let pt = [j.p("11"), j.p("13"), j.p("33"), l[0], l[1], l[2], l[3]];
        let t = PaperTables::printed();
        let den = t.denominator().eval_complex(&pt);
        let num = t.numerator().eval_complex(&pt);
        pole_check("duplication denominator", den, num.norm().max(1.0) * 1e-6)?;
        Ok(num / den)
    }

    /// Relative gap between `℘₁₁(2u)` from σ and from the duplication formula.
    pub fn duplication_residual(&self, u: [C64; 2]) -> NumResult<f64> {
        let direct = self.p11_double(u)?;
        let formula = self.duplication_formula(u)?;
        Ok((direct - formula).norm() / direct.norm().max(1.0))
    }

    pub fn check_inversion(&self, p: &CurvePoint) -> NumResult<InversionReport> {
        let (x, y) = match *p {
            CurvePoint::Infinity => {
                return Err(NumericError::Pole {
                    what: "f2 at I(infinity) = 0".into(),
                    magnitude: 0.0,
                })
            }
            CurvePoint::Affine { x, y } => (x, y),
        };
        let v = abel_jacobi(&self.ev.curve, p, self.tol)?;
        let rx = |f: NumResult<C64>| f.map(|f| (x - f).norm() / (1.0 + x.norm()));
        let ry = |f: NumResult<C64>| f.map(|f| (y - f).norm() / (1.0 + y.norm()));
        Ok(InversionReport {
            point: *p,
            v,
            f2: rx(self.f2(v)),
            g2: rx(self.g2(v)),
            f5: ry(self.f5(v)),
            g5: ry(self.g5(v)),
        })
    }

    /// Residuals of `f₅ − g₅ = σh/(2σ₁⁴)` and `f₂ − g₂ = σA/B` at `u`,
    /// each relative to the larger side.
    pub fn decomposition_residuals(&self, u: [C64; 2]) -> NumResult<(f64, f64)> {
        let j = self.ev.jet(u)?;
        let s = j.value();
        let s1 = j.d("1");
        let (f2, g2) = self.f2g2(u)?;
        let (f5, g5) = self.f5g5(u)?;
        let rhs5 = s * h_of(&j) / (s1.powi(4) * 2.0);
        let (a, b) = self.ab(u)?;
        pole_check("B", b, b.norm().max((s * a).norm()))?;
        let rhs2 = s * a / b;
        let rel = |l: C64, r: C64| (l - r).norm() / l.norm().max(r.norm()).max(1e-300);
        Ok((rel(f5 - g5, rhs5), rel(f2 - g2, rhs2)))
    }

    /// Uniform samples in the fundamental cell, rejecting points near the
    /// zero sets of σ, σ₁, σ(2u) and B.
    pub fn generic_samples(&self, n: usize, seed: u64) -> NumResult<Vec<[C64; 2]>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = self.ev.periods.generators();
        let mut out = Vec::new();
        let mut tries = 0;
        while out.len() < n {
            tries += 1;
            if tries > 50 * n + 50 {
                return Err(NumericError::Sampling(format!(
                    "only {} of {n} samples cleared the pole guards",
                    out.len()
                )));
            }
            let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-0.5..0.5));
            let u: [C64; 2] =
                std::array::from_fn(|i| (0..4).map(|k| g[k][i] * x[k]).sum());
            if self.is_generic(u) {
                out.push(u);
            }
        }
        Ok(out)
    }

    fn is_generic(&self, u: [C64; 2]) -> bool {
        let ok = || -> NumResult<()> {
            let j = self.ev.jet(u)?;
            pole_check("sigma", j.value(), 1e-3 * j.scale)?;
            self.f2g2(u)?;
            self.f5g5(u)?;
            let (_, b) = self.ab(u)?;
            pole_check("B", b, 1e-12)?;
            Ok(())
        };
        ok().is_ok()
    }

    /// Random affine points `P` with `|X| ≤ 2·scale`, both sheets.
    pub fn random_points(&self, n: usize, seed: u64) -> Vec<CurvePoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = &self.ev.curve;
        let mut out = Vec::new();
        while out.len() < n {
            let x = C64::from_polar(
                2.0 * c.scale * rng.gen::<f64>().sqrt(),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            if c.roots.iter().any(|r| (r - x).norm() < 1e-3 * c.scale) {
                continue;
            }
            let sheet = if rng.gen::<bool>() { Sheet::Plus } else { Sheet::Minus };
            out.push(CurvePoint::on_sheet(&c.params, x, sheet));
        }
        out
    }

    /// `combo(ta₁, t³a₃)/t^w` at `t`.
    fn scaled_value(&self, which: FitTarget, ray: [f64; 2], t: f64) -> NumResult<C64> {
        let u = [C64::from(t * ray[0]), C64::from(t.powi(3) * ray[1])];
        let (_, w) = which.basis();
        let v = match which {
            FitTarget::F2Combo => {
                let j = self.ev.jet(u)?;
                let d = self.ev.jet(Self::double(u))?;
                -j.d("3") * d.value().powi(2) * 2.0
                    - j.d("1") * (d.d("1").powi(2) - d.value() * d.d("11"))
            }
            FitTarget::F5Combo => {
                let j = self.ev.jet(u)?;
                let s2 = self.ev.eval(Self::double(u), crate::theta::DerivIndex::VALUE)?;
                let s1 = j.d("1");
                s2 * s1.powi(3) * 2.0 - s1.powi(4) * 2.0 * g5_numerator(&j)
            }
            FitTarget::A1 => self.a1_b1(u)?.0,
            FitTarget::B1 => self.a1_b1(u)?.1,
        };
        Ok(v / t.powi(w))
    }

    /// Leading coefficients of `which` on its printed monomial basis.
    ///
    /// Per ray, `L + Mt⁴ + Nt⁶` is fitted to `combo/t^w` over [`FIT_TS`] and
    /// `L` kept; the limits from all rays are then fitted to the basis.
    pub fn leading_coefficient_fit(&self, which: FitTarget) -> NumResult<Vec<f64>> {
        let (basis, _) = which.basis();
        if which == FitTarget::B1 {
            let v = self.a1_b1([C64::new(0.0, 0.0); 2])?.1;
            return Ok(vec![v.re]);
        }
        let mut limits = Vec::new();
        for ray in FIT_RAYS {
            let rows: Vec<(f64, C64)> = FIT_TS
                .iter()
                .map(|&t| self.scaled_value(which, ray, t).map(|v| (t, v)))
                .collect::<NumResult<_>>()?;
            let c = least_squares(&rows, &[0, 4, 6])?;
            limits.push((ray, c[0]));
        }
        let a = nalgebra::DMatrix::from_fn(limits.len(), basis.len(), |r, c| {
            let (i, j) = basis[c];
            limits[r].0[0].powi(i) * limits[r].0[1].powi(j)
        });
        let b = nalgebra::DVector::from_fn(limits.len(), |r, _| limits[r].1.re);
        let imag = limits.iter().map(|l| l.1.im.abs()).fold(0.0, f64::max);
        if imag > 1e-6 {
            return Err(NumericError::Precision {
                what: "leading limit should be real on real rays".into(),
                target: 1e-6,
                achieved: imag,
            });
        }
        let x = a
            .svd(true, true)
            .solve(&b, 1e-14)
            .map_err(|e| NumericError::Precision {
                what: format!("leading fit: {e}"),
                target: 0.0,
                achieved: f64::NAN,
            })?;
        Ok(x.iter().cloned().collect())
    }

    /// Pointwise checks of the inversion identities at `n` random points.
    pub fn inversion_suite(&self, n: usize, seed: u64) -> NumResult<Vec<ResidualCheck>> {
        let mut cols: [Vec<f64>; 4] = Default::default();
        for p in self.random_points(n, seed) {
            let r = self.check_inversion(&p)?;
            for (k, v) in r.all().into_iter().enumerate() {
                cols[k].push(v.clone()?);
            }
        }
        let t = 1e-8;
        Ok(vec![
            ResidualCheck::new("inversion_f2", &cols[0], t),
            ResidualCheck::new("inversion_g2", &cols[1], t),
            ResidualCheck::new("inversion_f5", &cols[2], t),
            ResidualCheck::new("inversion_g5", &cols[3], t),
        ])
    }

    /// Both decomposition residuals over the given samples.
    pub fn check_decompositions(&self, samples: &[[C64; 2]]) -> NumResult<Vec<ResidualCheck>> {
        let mut r5 = Vec::new();
        let mut r2 = Vec::new();
        for u in samples {
            if let Ok((a, b)) = self.decomposition_residuals(*u) {
                r5.push(a);
                r2.push(b);
            }
        }
        if r5.is_empty() {
            return Err(NumericError::Sampling("every sample hit a pole guard".into()));
        }
        Ok(vec![
            ResidualCheck::new("decomposition_f5_g5", &r5, 1e-8),
            ResidualCheck::new("decomposition_f2_g2", &r2, 1e-8),
        ])
    }

    /// Riemann vanishing at `n` random points, reduced into the fundamental cell.
    pub fn vanishing_suite(&self, n: usize, seed: u64) -> NumResult<ResidualCheck> {
        let mut res = Vec::new();
        for p in self.random_points(n, seed) {
            let u = abel_jacobi(&self.ev.curve, &p, self.tol)?;
            let (u, _) = lattice_reduce(&u, &self.ev.periods)?;
            let j = self.ev.jet(u)?;
            res.push(j.value().norm() / j.scale);
        }
        Ok(ResidualCheck::new("riemann_vanishing", &res, 1e-8))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "evaluator": self.ev.to_json(),
            "tol": self.tol,
            "pole_guard": POLE_GUARD,
        })
    }
}

fn g5_numerator(j: &SigmaJet) -> C64 {
    let (s1, s3) = (j.d("1"), j.d("3"));
    s1 * s1 * j.d("33") - s1 * s3 * j.d("13") * 2.0 + s3 * s3 * j.d("11")
}

/// `h = σ₁(σ₃σ₁₁₃ − σ₁σ₁₃₃ − σ₁₁σ₃₃ + 2σ₁₃²) − 2σ₃³ − σ₃σ₁₁σ₁₃
///      + σ(σ₁₁σ₁₃₃ − σ₁₃σ₁₁₃ + 3σ₃σ₃₃) − σ²σ₃₃₃`.
pub fn h_of(j: &SigmaJet) -> C64 {
    let d = |s: &str| j.d(s);
    let s = j.value();
    d("1") * (d("3") * d("113") - d("1") * d("133") - d("11") * d("33") + d("13").powi(2) * 2.0)
        - d("3").powi(3) * 2.0
        - d("3") * d("11") * d("13")
        + s * (d("11") * d("133") - d("13") * d("113") + d("3") * d("33") * 3.0)
        - s * s * d("333")
}
