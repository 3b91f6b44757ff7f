//! Riemann theta with characteristics, evaluated together with all partial
//! derivatives up to order three.

use std::ops::{Add, Mul};

use nalgebra::{Matrix2, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::curve::C64;
use crate::error::{NumResult, NumericError};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Exponents `(i, j)` of `h₁^i h₂^j` in jet storage order.
pub const JET_INDEX: [(u32, u32); 10] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

fn slot(i: u32, j: u32) -> Option<usize> {
    JET_INDEX.iter().position(|&p| p == (i, j))
}

fn fact(n: u32) -> f64 {
    (1..=n).product::<u32>() as f64
}

/// Partial derivative order `∂₁^i ∂₂^j` with `i + j ≤ 3`. For σ the
/// variables are `(u₁, u₃)`, so `DerivIndex::new(1, 2)` is `σ₁₃₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivIndex {
    pub i: u32,
    pub j: u32,
}

impl DerivIndex {
    pub const VALUE: Self = Self { i: 0, j: 0 };

    pub fn new(i: u32, j: u32) -> NumResult<Self> {
        if i + j > 3 {
            return Err(NumericError::UnsupportedOrder(i + j));
        }
        Ok(Self { i, j })
    }

    /// Parses subscripts like `""`, `"1"`, `"13"`, `"333"`.
    pub fn from_subscript(s: &str) -> NumResult<Self> {
        let i = s.chars().filter(|&c| c == '1').count() as u32;
        let j = s.chars().filter(|&c| c == '3').count() as u32;
        if i + j != s.chars().count() as u32 {
            return Err(NumericError::Input(format!("bad derivative subscript {s:?}")));
        }
        Self::new(i, j)
    }
}

/// Truncated Taylor polynomial of order 3 in two variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [C64; 10]);

impl Jet {
    pub fn constant(c: C64) -> Self {
        let mut v = [ZERO; 10];
        v[0] = c;
        Self(v)
    }

    /// `exp(k₁h₁ + k₂h₂)` times `c`.
    pub fn exp_linear(c: C64, k: [C64; 2]) -> Self {
        Self(JET_INDEX.map(|(i, j)| {
            c * k[0].powu(i) * k[1].powu(j) / (fact(i) * fact(j))
        }))
    }

    pub fn coeff(&self, i: u32, j: u32) -> C64 {
        slot(i, j).map_or(ZERO, |s| self.0[s])
    }

    pub fn deriv(&self, d: DerivIndex) -> C64 {
        self.coeff(d.i, d.j) * (fact(d.i) * fact(d.j))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(self.0.map(|v| v * c))
    }

    /// `exp` of the jet.
    pub fn exp(&self) -> Self {
        let a = self.0[0];
        let mut r = *self;
        r.0[0] = ZERO;
        let r2 = r * r;
        let r3 = r2 * r;
        let one = Self::constant(C64::new(1.0, 0.0));
        (one + r + r2.scale(0.5.into()) + r3.scale((1.0 / 6.0).into())).scale(a.exp())
    }

    /// Jet of `ĵ(h) = j(−h)`.
    pub fn reflect(&self) -> Self {
        Self(std::array::from_fn(|s| {
            let (i, j) = JET_INDEX[s];
            if (i + j) % 2 == 0 {
                self.0[s]
            } else {
                -self.0[s]
            }
        }))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet(std::array::from_fn(|s| self.0[s] + o.0[s]))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut out = [ZERO; 10];
        for (a, &(i1, j1)) in JET_INDEX.iter().enumerate() {
            for (b, &(i2, j2)) in JET_INDEX.iter().enumerate() {
                if let Some(s) = slot(i1 + i2, j1 + j2) {
                    out[s] += self.0[a] * o.0[b];
                }
            }
        }
        Jet(out)
    }
}

/// Theta characteristic `[δ′; δ″]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaChar {
    pub delta1: [f64; 2],
    pub delta2: [f64; 2],
}

impl Default for ThetaChar {
    fn default() -> Self {
        Self {
            delta1: [0.5, 0.5],
            delta2: [1.0, 0.5],
        }
    }
}

impl ThetaChar {
    /// `4ᵗδ′δ″ mod 2` for half-integer characteristics; 1 means odd.
    pub fn parity(&self) -> i64 {
        let s: f64 = (0..2).map(|i| 4.0 * self.delta1[i] * self.delta2[i]).sum();
        (s.round() as i64).rem_euclid(2)
    }
}

/// A theta value with derivatives, plus the data needed to judge it.
#[derive(Debug, Clone, Copy)]
pub struct ThetaJet {
    pub jet: Jet,
    /// Largest `|term|` in the lattice sum, the natural scale for residuals.
    pub max_term: f64,
    pub radius: i64,
}

/// Truncation radius `⌈√(−ln tol/(π λ_min))⌉ + 2` for `Im τ`.
pub fn truncation_radius(tau: &Matrix2<C64>, tol: f64) -> NumResult<i64> {
    let y = tau.map(|z| z.im);
    let lmin = SymmetricEigen::new((y + y.transpose()) * 0.5).eigenvalues.min();
    if !(lmin > 0.0) {
        return Err(NumericError::Domain(format!(
            "Im tau is not positive definite (smallest eigenvalue {lmin:.3e})"
        )));
    }
    let tol = tol.clamp(1e-300, 0.5);
    Ok((-tol.ln() / (std::f64::consts::PI * lmin)).sqrt().ceil() as i64 + 2)
}

/// Jet in `h` of `θ[δ](z₀ + W h, τ)`; `W = I` gives ordinary derivatives in `z`.
///
/// Each term `T_m = exp(πi ᵗmτm + 2πi ᵗm(z₀+δ″))`, `m = n + δ′`, contributes
/// `T_m·exp(ᵗk h)` with `k = 2πi ᵗW m`.
pub fn theta_jet_linear(
    z0: [C64; 2],
    w: &Matrix2<C64>,
    tau: &Matrix2<C64>,
    ch: &ThetaChar,
    tol: f64,
    extra_radius: i64,
) -> NumResult<ThetaJet> {
    let radius = truncation_radius(tau, tol)? + extra_radius;
    let y = tau.map(|z| z.im);
    let yinv = y
        .try_inverse()
        .ok_or_else(|| NumericError::Domain("Im tau is singular".into()))?;
    let imz = nalgebra::Vector2::new(z0[0].im, z0[1].im);
    let centre = -(yinv * imz);
    let c = [
        (centre[0] - ch.delta1[0]).round() as i64,
        (centre[1] - ch.delta1[1]).round() as i64,
    ];
    let two_pi_i = C64::new(0.0, 2.0 * std::f64::consts::PI);
    let pi_i = C64::new(0.0, std::f64::consts::PI);
    let mut acc = [ZERO; 10];
    let mut max_term: f64 = 0.0;
    for n1 in c[0] - radius..=c[0] + radius {
        for n2 in c[1] - radius..=c[1] + radius {
            let m = [n1 as f64 + ch.delta1[0], n2 as f64 + ch.delta1[1]];
            let quad = tau[(0, 0)] * m[0] * m[0]
                + tau[(0, 1)] * m[0] * m[1]
                + tau[(1, 0)] * m[1] * m[0]
                + tau[(1, 1)] * m[1] * m[1];
            let lin = (z0[0] + ch.delta2[0]) * m[0] + (z0[1] + ch.delta2[1]) * m[1];
            let t = (pi_i * quad + two_pi_i * lin).exp();
            max_term = max_term.max(t.norm());
            let k = [
                two_pi_i * (w[(0, 0)] * m[0] + w[(1, 0)] * m[1]),
                two_pi_i * (w[(0, 1)] * m[0] + w[(1, 1)] * m[1]),
            ];
            let term = Jet::exp_linear(t, k);
            for s in 0..10 {
                acc[s] += term.0[s];
            }
        }
    }
    Ok(ThetaJet {
        jet: Jet(acc),
        max_term,
        radius,
    })
}

/// `∂^d θ[δ](z, τ)` with respect to `z`.
pub fn theta_eval(
    z: [C64; 2],
    tau: &Matrix2<C64>,
    ch: &ThetaChar,
    d: DerivIndex,
    tol: f64,
) -> NumResult<C64> {
    let j = theta_jet_linear(z, &Matrix2::identity(), tau, ch, tol, 0)?;
    Ok(j.jet.deriv(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tau() -> Matrix2<C64> {
        Matrix2::new(
            C64::new(0.3, 1.1),
            C64::new(-0.2, 0.35),
            C64::new(-0.2, 0.35),
            C64::new(0.1, 0.9),
        )
    }

    #[test]
    fn default_char_is_odd() {
        assert_eq!(ThetaChar::default().parity(), 1);
        let even = ThetaChar {
            delta1: [0.5, 0.5],
            delta2: [0.0, 0.0],
        };
        assert_eq!(even.parity(), 0);
    }

    #[test]
    fn order_four_is_rejected() {
        assert_eq!(DerivIndex::new(2, 2), Err(NumericError::UnsupportedOrder(4)));
        assert_eq!(DerivIndex::from_subscript("133").unwrap(), DerivIndex { i: 1, j: 2 });
    }

    #[test]
    fn radius_increase_changes_nothing() {
        let z = [C64::new(0.2, -0.1), C64::new(-0.3, 0.25)];
        let ch = ThetaChar::default();
        let a = theta_jet_linear(z, &Matrix2::identity(), &tau(), &ch, 1e-15, 0).unwrap();
        let b = theta_jet_linear(z, &Matrix2::identity(), &tau(), &ch, 1e-15, 2).unwrap();
        for s in 0..10 {
            assert!((a.jet.0[s] - b.jet.0[s]).norm() < 1e-14 * a.max_term);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let z = [C64::new(0.2, -0.1), C64::new(-0.3, 0.25)];
        let ch = ThetaChar::default();
        let t = tau();
        let f = |z: [C64; 2]| theta_eval(z, &t, &ch, DerivIndex::VALUE, 1e-15).unwrap();
        let h = 1e-5;
        for (idx, d) in [(0, DerivIndex { i: 1, j: 0 }), (1, DerivIndex { i: 0, j: 1 })] {
            let mut zp = z;
            let mut zm = z;
            zp[idx] += h;
            zm[idx] -= h;
            let fd = (f(zp) - f(zm)) / (2.0 * h);
            let an = theta_eval(z, &t, &ch, d, 1e-15).unwrap();
            assert!((fd - an).norm() < 1e-6 * an.norm().max(1.0));
        }
    }

    #[test]
    fn non_positive_imaginary_part_is_a_domain_error() {
        let mut t = tau();
        t[(1, 1)] = C64::new(0.0, -0.5);
        let r = theta_eval([ZERO; 2], &t, &ThetaChar::default(), DerivIndex::VALUE, 1e-12);
        assert!(matches!(r, Err(NumericError::Domain(_))));
    }

    proptest! {
        #[test]
        fn odd_characteristic_gives_odd_theta(a in -0.5f64..0.5, b in -0.5f64..0.5, c in -0.3f64..0.3, d in -0.3f64..0.3) {
            let z = [C64::new(a, c), C64::new(b, d)];
            let ch = ThetaChar::default();
            let p = theta_jet_linear(z, &Matrix2::identity(), &tau(), &ch, 1e-15, 0).unwrap();
            let m = theta_jet_linear(z.map(|v| -v), &Matrix2::identity(), &tau(), &ch, 1e-15, 0).unwrap();
            let r = m.jet.reflect();
            for s in 0..10 {
                prop_assert!((p.jet.0[s] + r.0[s]).norm() < 1e-12 * p.max_term);
            }
        }

        #[test]
        fn jet_exp_is_a_homomorphism(x in prop::array::uniform10(-1.0f64..1.0), y in prop::array::uniform10(-1.0f64..1.0)) {
            let a = Jet(x.map(|v| C64::new(v, 0.3 * v)));
            let b = Jet(y.map(|v| C64::new(-0.5 * v, v)));
            let l = (a + b).exp();
            let r = a.exp() * b.exp();
            for s in 0..10 {
                prop_assert!((l.0[s] - r.0[s]).norm() < 1e-10 * (1.0 + l.0[s].norm()));
            }
        }
    }
}
