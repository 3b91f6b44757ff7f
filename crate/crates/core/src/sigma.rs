//! The sigma function `σ(u) = C exp(½ᵗuη′ω′⁻¹u) θ[δ]((2ω′)⁻¹u, τ)` and its
//! derivatives through order three.

use std::collections::{HashSet, VecDeque};

use nalgebra::{DMatrix, DVector, Matrix2};
use serde_json::{json, Value};

use crate::curve::{
    abel_jacobi, c_json, compute_periods, mat_json, symplectic_generators, Curve, CurveParams,
    CurvePoint, PeriodData, Sheet, C64,
};
use crate::error::{NumResult, NumericError};
use crate::theta::{theta_jet_linear, DerivIndex, Jet, ThetaChar};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Relative threshold for `θ[δ](I(P))` when searching for the basis.
const VANISHING_GATE: f64 = 1e-8;

/// Relative agreement required between the calibration estimates.
pub const CALIBRATION_TOL: f64 = 1e-7;

/// Rays used to cross-check `C`.
pub const CALIBRATION_RAYS: [[f64; 2]; 2] = [[1.0, 0.3], [0.6, -0.9]];

/// σ and all derivatives to order three at one point.
#[derive(Debug, Clone, Copy)]
pub struct SigmaJet {
    pub jet: Jet,
    /// `|C|·|exp(½ᵗuKu)|·max|θ term|`, the size of the largest summand.
    pub scale: f64,
}

impl SigmaJet {
    pub fn d(&self, s: &str) -> C64 {
        self.jet
            .deriv(DerivIndex::from_subscript(s).expect("valid subscript"))
    }

    pub fn value(&self) -> C64 {
        self.jet.0[0]
    }

    /// `℘ᵢⱼ = (σᵢσⱼ − σσᵢⱼ)/σ²` for `ij ∈ {11, 13, 33}`.
    pub fn p(&self, ij: &str) -> C64 {
        let (i, j) = ij.split_at(1);
        let s = self.value();
        (self.d(i) * self.d(j) - s * self.d(ij)) / (s * s)
    }
}

#[derive(Debug, Clone)]
pub struct SigmaEvaluator {
    pub curve: Curve,
    pub periods: PeriodData,
    pub ch: ThetaChar,
    pub c: C64,
    /// `η′(ω′)⁻¹`, symmetrized.
    pub eta_w_inv: Matrix2<C64>,
    /// `(2ω′)⁻¹`
    pub w: Matrix2<C64>,
    pub theta_tol: f64,
    /// Added to the computed truncation radius (test hook).
    pub extra_radius: i64,
    /// BFS steps needed to reach a basis where the characteristic vanishes on `I(V)`.
    pub basis_search_steps: usize,
}

fn symmetrize(m: &Matrix2<C64>) -> Matrix2<C64> {
    (m + m.transpose()).map(|z| z * 0.5)
}

fn quad_form(k: &Matrix2<C64>, u: [C64; 2]) -> C64 {
    u[0] * (k[(0, 0)] * u[0] + k[(0, 1)] * u[1]) + u[1] * (k[(1, 0)] * u[0] + k[(1, 1)] * u[1])
}

fn mat_vec(m: &Matrix2<C64>, u: [C64; 2]) -> [C64; 2] {
    [
        m[(0, 0)] * u[0] + m[(0, 1)] * u[1],
        m[(1, 0)] * u[0] + m[(1, 1)] * u[1],
    ]
}

/// Fixed points used to test Riemann vanishing during the basis search.
fn probe_points(curve: &Curve) -> Vec<CurvePoint> {
    [C64::new(0.37, 0.61), C64::new(-0.83, 0.22), C64::new(0.15, -0.9)]
        .into_iter()
        .map(|x| CurvePoint::on_sheet(&curve.params, x * curve.scale, Sheet::Plus))
        .collect()
}

impl SigmaEvaluator {
    /// Periods, basis search and calibration of `C`.
    pub fn new(params: CurveParams, tol: f64, theta_tol: f64) -> NumResult<Self> {
        let curve = Curve::new(params)?;
        let base = compute_periods(&curve, tol)?;
        let probes: Vec<[C64; 2]> = probe_points(&curve)
            .iter()
            .map(|p| abel_jacobi(&curve, p, tol))
            .collect::<NumResult<_>>()?;
        let (periods, steps) = find_basis(&base, &probes, theta_tol)?;
        let mut ev = Self::with_periods(curve, periods, ThetaChar::default(), theta_tol)?;
        ev.basis_search_steps = steps;
        ev.calibrate()?;
        Ok(ev)
    }

    /// An uncalibrated evaluator (`C = 1`) on a fixed basis.
    pub fn with_periods(
        curve: Curve,
        periods: PeriodData,
        ch: ThetaChar,
        theta_tol: f64,
    ) -> NumResult<Self> {
        let wp_inv = periods
            .half_omega1()
            .try_inverse()
            .ok_or_else(|| NumericError::Domain("omega' is singular".into()))?;
        let w = periods
            .omega1
            .try_inverse()
            .ok_or_else(|| NumericError::Domain("omega' is singular".into()))?;
        Ok(Self {
            eta_w_inv: symmetrize(&(periods.eta1 * wp_inv)),
            w,
            curve,
            periods,
            ch,
            c: C64::new(1.0, 0.0),
            theta_tol,
            extra_radius: 0,
            basis_search_steps: 0,
        })
    }

    pub fn z_of(&self, u: [C64; 2]) -> [C64; 2] {
        mat_vec(&self.w, u)
    }

    pub fn jet(&self, u: [C64; 2]) -> NumResult<SigmaJet> {
        let th = theta_jet_linear(
            self.z_of(u),
            &self.w,
            &self.periods.tau,
            &self.ch,
            self.theta_tol,
            self.extra_radius,
        )?;
        let k = &self.eta_w_inv;
        let ku = mat_vec(k, u);
        let g0 = quad_form(k, u) * 0.5;
        // ½ᵗ(u+h)K(u+h) = g₀ + ᵗ(Ku)h + ½ᵗhKh
        let mut g = Jet::constant(g0);
        g.0[1] = ku[0];
        g.0[2] = ku[1];
        g.0[3] = k[(0, 0)] * 0.5;
        g.0[4] = k[(0, 1)];
        g.0[5] = k[(1, 1)] * 0.5;
        let jet = (g.exp() * th.jet).scale(self.c);
        Ok(SigmaJet {
            jet,
            scale: self.c.norm() * g0.exp().norm() * th.max_term,
        })
    }

    pub fn eval(&self, u: [C64; 2], d: DerivIndex) -> NumResult<C64> {
        Ok(self.jet(u)?.jet.deriv(d))
    }

    fn calibrate(&mut self) -> NumResult<()> {
        self.c = C64::new(1.0, 0.0);
        let s3 = self.eval([ZERO; 2], DerivIndex { i: 0, j: 1 })?;
        if s3.norm() == 0.0 || !s3.is_finite() {
            return Err(NumericError::Calibration(
                "theta gradient vanishes at the origin".into(),
            ));
        }
        let analytic = -1.0 / s3;
        for ray in CALIBRATION_RAYS {
            let r = self.ray_constant(ray)?;
            let rel = (r - analytic).norm() / analytic.norm();
            if rel > CALIBRATION_TOL {
                return Err(NumericError::Calibration(format!(
                    "ray ({}, {}) gives C = {r} but sigma_3(0) gives {analytic} (relative {rel:.2e})",
                    ray[0], ray[1]
                )));
            }
        }
        self.c = analytic;
        Ok(())
    }

    /// `lim_{t→0} (⅓(ta₁)³ − t³a₃)/σ̂(ta₁, t³a₃)` by Richardson extrapolation in
    /// `t⁴` from `t = 0.08, 0.04, 0.02`, with `σ̂` taken at the current `C`.
    pub fn ray_constant(&self, ray: [f64; 2]) -> NumResult<C64> {
        let [a1, a3] = ray;
        let lead = a1.powi(3) / 3.0 - a3;
        if lead.abs() <= 1e-12 * (a1.abs().powi(3) + a3.abs()) {
            return Err(NumericError::DegenerateRay(a1.to_string(), a3.to_string()));
        }
        let est = |t: f64| -> NumResult<C64> {
            let s = self.eval([C64::from(t * a1), C64::from(t.powi(3) * a3)], DerivIndex::VALUE)?;
            Ok(lead * t.powi(3) / s * self.c)
        };
        let (e0, e1, e2) = (est(0.08)?, est(0.04)?, est(0.02)?);
        // error terms in t⁴ and t⁸; halving t divides them by 16 and 256
        let r1 = (e1 * 16.0 - e0) / 15.0;
        let r2 = (e2 * 16.0 - e1) / 15.0;
        Ok((r2 * 256.0 - r1) / 255.0)
    }

    /// `|σ(u+Ω)/σ(u) − RHS|/|RHS|` for `Ω = 2ω′m₁ + 2ω″m₂`.
    pub fn quasiperiod_residual(&self, u: [C64; 2], m1: [i64; 2], m2: [i64; 2]) -> NumResult<f64> {
        self.quasiperiod_residual_with(u, m1, m2, true)
    }

    /// As [`Self::quasiperiod_residual`]; `with_sign = false` drops the `(−1)^…` factor.
    pub fn quasiperiod_residual_with(
        &self,
        u: [C64; 2],
        m1: [i64; 2],
        m2: [i64; 2],
        with_sign: bool,
    ) -> NumResult<f64> {
        let base = self.jet(u)?;
        if base.value().norm() <= 1e-6 * base.scale {
            return Err(NumericError::Domain("u is too close to the zero set of sigma".into()));
        }
        let p = &self.periods;
        let om = p.lattice_vector(m1, m2);
        let shifted = self.eval([u[0] + om[0], u[1] + om[1]], DerivIndex::VALUE)?;
        let m1c = [C64::from(m1[0] as f64), C64::from(m1[1] as f64)];
        let m2c = [C64::from(m2[0] as f64), C64::from(m2[1] as f64)];
        let e1 = mat_vec(&p.eta1, m1c);
        let e2 = mat_vec(&p.eta2, m2c);
        let eta = [(e1[0] + e2[0]) * 2.0, (e1[1] + e2[1]) * 2.0];
        let arg = [u[0] + om[0] * 0.5, u[1] + om[1] * 0.5];
        let mut rhs = (eta[0] * arg[0] + eta[1] * arg[1]).exp();
        let d1 = &self.ch.delta1;
        let d2 = &self.ch.delta2;
        let e = 2.0 * (d1[0] * m1[0] as f64 + d1[1] * m1[1] as f64
            - d2[0] * m2[0] as f64
            - d2[1] * m2[1] as f64)
            + (m1[0] * m2[0] + m1[1] * m2[1]) as f64;
        if with_sign && (e.round() as i64).rem_euclid(2) == 1 {
            rhs = -rhs;
        }
        Ok((shifted / base.value() - rhs).norm() / rhs.norm())
    }

    /// `|σ(I(P))|` relative to the largest summand of the theta series.
    pub fn vanishing_residual(&self, p: &CurvePoint, tol: f64) -> NumResult<f64> {
        let u = abel_jacobi(&self.curve, p, tol)?;
        let j = self.jet(u)?;
        Ok(j.value().norm() / j.scale)
    }

    /// Least-squares `c₃, c₇` in `σ(ta₁, t³a₃) ≈ c₃t³ + c₇t⁷`.
    pub fn leading_term_fit(&self, ray: [C64; 2], ts: &[f64]) -> NumResult<(C64, C64)> {
        let rows: Vec<(f64, C64)> = ts
            .iter()
            .map(|&t| {
                let u = [ray[0] * t, ray[1] * t.powi(3)];
                self.eval(u, DerivIndex::VALUE).map(|s| (t, s))
            })
            .collect::<NumResult<_>>()?;
        let c = least_squares(&rows, &[3, 7])?;
        Ok((c[0], c[1]))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "periods": self.periods.to_json(),
            "C": c_json(self.c),
            "eta_w_inv": mat_json(&self.eta_w_inv),
            "theta_tol": self.theta_tol,
            "radius": crate::theta::truncation_radius(&self.periods.tau, self.theta_tol).ok(),
            "basis_search_steps": self.basis_search_steps,
            "characteristic": {"delta1": self.ch.delta1, "delta2": self.ch.delta2},
        })
    }
}

/// Least squares for `Σ cₖ t^{pₖ}` with complex data; columns are scaled to
/// unit norm before solving.
pub fn least_squares(rows: &[(f64, C64)], powers: &[i32]) -> NumResult<Vec<C64>> {
    let n = rows.len();
    let k = powers.len();
    if n < k {
        return Err(NumericError::Precision {
            what: "fit has fewer samples than unknowns".into(),
            target: k as f64,
            achieved: n as f64,
        });
    }
    let a = DMatrix::from_fn(n, k, |r, c| rows[r].0.powi(powers[c]));
    let norms: Vec<f64> = (0..k).map(|c| a.column(c).norm()).collect();
    let a = DMatrix::from_fn(n, k, |r, c| a[(r, c)] / norms[c]);
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let cond = sv.max() / sv.min();
    if !(cond < 1e12) {
        return Err(NumericError::Precision {
            what: "fit conditioning".into(),
            target: 1e12,
            achieved: cond,
        });
    }
    let solve = |b: DVector<f64>| -> NumResult<DVector<f64>> {
        svd.solve(&b, 0.0)
            .map_err(|e| NumericError::Precision {
                what: format!("fit solve: {e}"),
                target: 0.0,
                achieved: f64::NAN,
            })
    };
    let re = solve(DVector::from_fn(n, |r, _| rows[r].1.re))?;
    let im = solve(DVector::from_fn(n, |r, _| rows[r].1.im))?;
    Ok((0..k).map(|c| C64::new(re[c], im[c]) / norms[c]).collect())
}

/// Breadth-first search over `Sp(4, ℤ/2)` for a basis in which `θ[δ]`
/// vanishes at the Abel–Jacobi images `probes`.
pub fn find_basis(
    base: &PeriodData,
    probes: &[[C64; 2]],
    theta_tol: f64,
) -> NumResult<(PeriodData, usize)> {
    let gens = symplectic_generators();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let key = |m: &[[i64; 4]; 4]| m.map(|r| r.map(|v| v.rem_euclid(2)));
    seen.insert(key(&base.cycle_matrix));
    queue.push_back(base.clone());
    let mut steps = 0;
    let mut best = f64::INFINITY;
    while let Some(pd) = queue.pop_front() {
        steps += 1;
        let worst = vanishing_on(&pd, probes, theta_tol)?;
        if worst < VANISHING_GATE {
            return Ok((pd, steps));
        }
        best = best.min(worst);
        for g in &gens {
            let next = pd.transform(g);
            if seen.insert(key(&next.cycle_matrix)) {
                queue.push_back(next);
            }
        }
    }
    Err(NumericError::Calibration(format!(
        "no symplectic basis makes the characteristic vanish on the curve (best residual {best:.2e} over {steps} bases)"
    )))
}

fn vanishing_on(pd: &PeriodData, probes: &[[C64; 2]], theta_tol: f64) -> NumResult<f64> {
    let w = pd
        .omega1
        .try_inverse()
        .ok_or_else(|| NumericError::Domain("omega' is singular".into()))?;
    let mut worst: f64 = 0.0;
    for u in probes {
        let th = theta_jet_linear(
            mat_vec(&w, *u),
            &Matrix2::identity(),
            &pd.tau,
            &ThetaChar::default(),
            theta_tol,
            0,
        )?;
        worst = worst.max(th.jet.0[0].norm() / th.max_term);
    }
    Ok(worst)
}
