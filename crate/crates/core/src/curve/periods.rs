use nalgebra::{Matrix2, SymmetricEigen};
use serde_json::{json, Value};

use super::homology::{standard_j, HomologyBasis, CHAIN_TO_CANONICAL};
use super::quad::{segment_converged, Scheme};
use super::{c_json, mat_json, Curve, C64};
use crate::error::{NumResult, NumericError};

/// Orientation `±1` of each chain cycle `cᵢ` relative to `2∫_{eᵢ}^{eᵢ₊₁}`.
pub type SignChoice = [i8; 4];

/// Period matrices for one canonical basis.
#[derive(Debug, Clone)]
pub struct PeriodData {
    pub roots: [C64; 5],
    pub homology: HomologyBasis,
    pub signs: SignChoice,
    /// Rows `a₁, a₂, b₁, b₂` over the signed chain cycles.
    pub cycle_matrix: [[i64; 4]; 4],
    /// `chain_periods[i][f]`: form `f` (ω₁, ω₃, η₁, η₃) over signed `cᵢ`.
    pub chain_periods: [[C64; 4]; 4],
    /// `2ω′`
    pub omega1: Matrix2<C64>,
    /// `2ω″`
    pub omega2: Matrix2<C64>,
    /// `η′`
    pub eta1: Matrix2<C64>,
    /// `η″`
    pub eta2: Matrix2<C64>,
    pub tau: Matrix2<C64>,
    /// `‖ᵗω′η″ − ᵗη′ω″ + (πi/2)·I‖` after division by the matrix scale.
    pub legendre_residual: f64,
    /// Chebyshev nodes used on the hardest cut.
    pub nodes: usize,
}

pub(crate) fn imag_part(m: &Matrix2<C64>) -> Matrix2<f64> {
    m.map(|z| z.im)
}

/// Smallest eigenvalue of the symmetrized imaginary part.
pub(crate) fn im_min_eigen(tau: &Matrix2<C64>) -> f64 {
    let y = imag_part(tau);
    let ys = (y + y.transpose()) * 0.5;
    SymmetricEigen::new(ys).eigenvalues.min()
}

fn norm(m: &Matrix2<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Generators of `Sp(4, ℤ)` acting on cycle rows `(a₁, a₂, b₁, b₂)`.
pub fn symplectic_generators() -> Vec<[[i64; 4]; 4]> {
    let block = |a: [[i64; 2]; 2], b: [[i64; 2]; 2], c: [[i64; 2]; 2], d: [[i64; 2]; 2]| {
        let mut m = [[0; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][j];
                m[i][j + 2] = b[i][j];
                m[i + 2][j] = c[i][j];
                m[i + 2][j + 2] = d[i][j];
            }
        }
        m
    };
    let id = [[1, 0], [0, 1]];
    let zero = [[0, 0], [0, 0]];
    let mut gens = Vec::new();
    for s in [[[1, 0], [0, 0]], [[0, 0], [0, 1]], [[0, 1], [1, 0]]] {
        gens.push(block(id, zero, s, id));
        gens.push(block(id, s, zero, id));
    }
    // U and U^{-T}
    gens.push(block([[1, 1], [0, 1]], zero, zero, [[1, 0], [-1, 1]]));
    gens.push(block([[0, 1], [1, 0]], zero, zero, [[0, 1], [1, 0]]));
    gens.push(standard_j());
    gens
}

pub(crate) fn mat_mul4(a: &[[i64; 4]; 4], b: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

impl PeriodData {
    fn from_chain(
        roots: [C64; 5],
        homology: HomologyBasis,
        signs: SignChoice,
        chain_periods: [[C64; 4]; 4],
        cycle_matrix: [[i64; 4]; 4],
        nodes: usize,
    ) -> Self {
        let cyc: [[C64; 4]; 4] = std::array::from_fn(|k| {
            std::array::from_fn(|f| {
                (0..4)
                    .map(|i| chain_periods[i][f] * cycle_matrix[k][i] as f64)
                    .sum()
            })
        });
        // rows are forms (ω₁, ω₃), columns are cycles
        let omega1 = Matrix2::from_fn(|i, j| cyc[j][i]);
        let omega2 = Matrix2::from_fn(|i, j| cyc[j + 2][i]);
        let eta1 = Matrix2::from_fn(|i, j| cyc[j][i + 2] * -0.5);
        let eta2 = Matrix2::from_fn(|i, j| cyc[j + 2][i + 2] * -0.5);
        let tau = omega1
            .try_inverse()
            .map(|w| w * omega2)
            .unwrap_or_else(|| Matrix2::from_element(C64::new(f64::NAN, 0.0)));
        let mut pd = Self {
            roots,
            homology,
            signs,
            cycle_matrix,
            chain_periods,
            omega1,
            omega2,
            eta1,
            eta2,
            tau,
            legendre_residual: f64::NAN,
            nodes,
        };
        pd.legendre_residual = pd.legendre_residual_value();
        pd
    }

    /// `ω′`
    pub fn half_omega1(&self) -> Matrix2<C64> {
        self.omega1.map(|z| z * 0.5)
    }

    /// `ω″`
    pub fn half_omega2(&self) -> Matrix2<C64> {
        self.omega2.map(|z| z * 0.5)
    }

    /// `ᵗω′η″ − ᵗη′ω″`, which equals `−(πi/2)·I` in these conventions.
    pub fn legendre_matrix(&self) -> Matrix2<C64> {
        let w1 = self.half_omega1();
        let w2 = self.half_omega2();
        w1.transpose() * self.eta2 - self.eta1.transpose() * w2
    }

    fn legendre_residual_value(&self) -> f64 {
        let target = Matrix2::identity() * C64::new(0.0, -std::f64::consts::FRAC_PI_2);
        let s = 1.0 + norm(&self.half_omega1()) * (norm(&self.eta1) + norm(&self.eta2));
        norm(&(self.legendre_matrix() - target)) / s
    }

    pub fn tau_symmetry_residual(&self) -> f64 {
        norm(&(self.tau - self.tau.transpose())) / norm(&self.tau).max(1.0)
    }

    pub fn im_tau_min_eigenvalue(&self) -> f64 {
        im_min_eigen(&self.tau)
    }

    /// The basis `c′ = M·c` for a symplectic `M`.
    pub fn transform(&self, m: &[[i64; 4]; 4]) -> Self {
        Self::from_chain(
            self.roots,
            self.homology.clone(),
            self.signs,
            self.chain_periods,
            mat_mul4(m, &self.cycle_matrix),
            self.nodes,
        )
    }

    /// The four lattice generators: columns of `2ω′` then of `2ω″`.
    pub fn generators(&self) -> [[C64; 2]; 4] {
        [
            [self.omega1[(0, 0)], self.omega1[(1, 0)]],
            [self.omega1[(0, 1)], self.omega1[(1, 1)]],
            [self.omega2[(0, 0)], self.omega2[(1, 0)]],
            [self.omega2[(0, 1)], self.omega2[(1, 1)]],
        ]
    }

    /// `Ω = 2ω′m₁ + 2ω″m₂`.
    pub fn lattice_vector(&self, m1: [i64; 2], m2: [i64; 2]) -> [C64; 2] {
        let g = self.generators();
        let k = [m1[0], m1[1], m2[0], m2[1]];
        std::array::from_fn(|i| (0..4).map(|j| g[j][i] * k[j] as f64).sum())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "roots": self.roots.iter().map(|z| c_json(*z)).collect::<Vec<_>>(),
            "chain_order": self.homology.order,
            "angular_chain": self.homology.angular,
            "signs": self.signs,
            "cycle_matrix": self.cycle_matrix,
            "omega1": mat_json(&self.omega1),
            "omega2": mat_json(&self.omega2),
            "eta1": mat_json(&self.eta1),
            "eta2": mat_json(&self.eta2),
            "tau": mat_json(&self.tau),
            "tau_symmetry_residual": self.tau_symmetry_residual(),
            "im_tau_min_eigenvalue": self.im_tau_min_eigenvalue(),
            "legendre_residual": self.legendre_residual,
            "nodes": self.nodes,
        })
    }
}

/// Chain-cycle integrals `2∫_{eᵢ}^{eᵢ₊₁}` of the four forms.
pub(crate) fn chain_integrals(
    curve: &Curve,
    homology: &HomologyBasis,
    tol: f64,
    scheme: Scheme,
) -> NumResult<([[C64; 4]; 4], usize)> {
    let mut out = [[C64::new(0.0, 0.0); 4]; 4];
    let mut nodes = 0;
    for (i, row) in out.iter_mut().enumerate() {
        let (a, b) = homology.segment(i);
        let others: Vec<C64> = homology
            .chain
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i && k != i + 1)
            .map(|(_, z)| *z)
            .collect();
        let others = [others[0], others[1], others[2]];
        let (v, n) = segment_converged(&curve.params, a, b, &others, tol, scheme)?;
        *row = v.map(|z| z * 2.0);
        nodes = nodes.max(n);
    }
    Ok((out, nodes))
}

/// Periods in the chain basis, with cycle orientations chosen so that `τ`
/// is symmetric with positive definite imaginary part.
pub fn compute_periods(curve: &Curve, tol: f64) -> NumResult<PeriodData> {
    let homology = HomologyBasis::new(&curve.roots);
    let (raw, nodes) = chain_integrals(curve, &homology, tol, Scheme::Chebyshev)?;
    let mut best: Option<PeriodData> = None;
    for bits in 0..8u8 {
        let signs: SignChoice = [
            1,
            if bits & 1 == 0 { 1 } else { -1 },
            if bits & 2 == 0 { 1 } else { -1 },
            if bits & 4 == 0 { 1 } else { -1 },
        ];
        let chain: [[C64; 4]; 4] =
            std::array::from_fn(|i| raw[i].map(|z| z * signs[i] as f64));
        let pd = PeriodData::from_chain(
            curve.roots,
            homology.clone(),
            signs,
            chain,
            CHAIN_TO_CANONICAL,
            nodes,
        );
        if !(pd.im_tau_min_eigenvalue() > 0.0) {
            continue;
        }
        let better = best
            .as_ref()
            .is_none_or(|b| pd.tau_symmetry_residual() < b.tau_symmetry_residual());
        if better {
            best = Some(pd);
        }
    }
    let pd = best.ok_or_else(|| NumericError::Precision {
        what: "period matrix (no orientation gives Im tau > 0)".into(),
        target: tol,
        achieved: f64::NAN,
    })?;
    let sym = pd.tau_symmetry_residual();
    if sym > 1e-9_f64.max(100.0 * tol) {
        return Err(NumericError::Precision {
            what: "tau symmetry".into(),
            target: 1e-9,
            achieved: sym,
        });
    }
    let w = pd.half_omega1();
    let cond = w
        .try_inverse()
        .map(|inv| norm(&w) * norm(&inv))
        .unwrap_or(f64::INFINITY);
    if cond > 1e8 {
        return Err(NumericError::Precision {
            what: "conditioning of omega'".into(),
            target: 1e8,
            achieved: cond,
        });
    }
    Ok(pd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveParams;

    #[test]
    fn generators_are_symplectic() {
        let j = standard_j();
        for g in symplectic_generators() {
            let gt: [[i64; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|k| g[k][i]));
            assert_eq!(mat_mul4(&mat_mul4(&g, &j), &gt), j);
        }
    }

    #[test]
    fn x5_minus_1_periods() {
        let c = Curve::new(CurveParams::x5_minus_1()).unwrap();
        let p = compute_periods(&c, 1e-13).unwrap();
        assert!(p.tau_symmetry_residual() < 1e-9);
        assert!(p.im_tau_min_eigenvalue() > 0.0);
        assert!(p.legendre_residual < 1e-8, "{}", p.legendre_residual);
    }

    #[test]
    fn node_doubling_is_stable() {
        let c = Curve::new(CurveParams::real(0.3, -0.2, 0.5, -1.1)).unwrap();
        let h = HomologyBasis::new(&c.roots);
        let (a, _) = chain_integrals(&c, &h, 1e-12, Scheme::Chebyshev).unwrap();
        let (b, _) = chain_integrals(&c, &h, 1e-12, Scheme::LegendreTheta).unwrap();
        for i in 0..4 {
            for f in 0..4 {
                assert!((a[i][f] - b[i][f]).norm() < 1e-10 * (1.0 + a[i][f].norm()));
            }
        }
    }
}
