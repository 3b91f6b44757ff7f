use serde::Serialize;

use super::{segment_distance, C64};

/// Rows `a₁, a₂, b₁, b₂` as integer combinations of the chain cycles
/// `c₁..c₄`, where `cᵢ` encircles the segment `[eᵢ, eᵢ₊₁]`.
pub const CHAIN_TO_CANONICAL: [[i64; 4]; 4] = [
    [1, 0, 0, 0],
    [0, 0, 1, 0],
    [0, 1, 0, 1],
    [0, 0, 0, 1],
];

/// Branch points arranged in a chain `e₁ → e₂ → … → e₅ → ∞`.
///
/// Cuts join `(e₁, e₂)`, `(e₃, e₄)` and `(e₅, ∞)`. The loop `cᵢ` around
/// `[eᵢ, eᵢ₊₁]` meets only its neighbours, once each, which fixes the
/// intersection form used by the audit below.
#[derive(Debug, Clone, Serialize)]
pub struct HomologyBasis {
    /// Positions in the sorted root list, in chain order.
    pub order: [usize; 5],
    #[serde(skip)]
    pub chain: [C64; 5],
    /// Chain positions joined by cuts; `None` stands for `∞`.
    pub cuts: [(usize, Option<usize>); 3],
    /// True when the sorted polyline self-intersected and the angular
    /// order around the centroid was used instead.
    pub angular: bool,
}

fn orient(a: C64, b: C64, c: C64) -> f64 {
    let u = b - a;
    let v = c - a;
    u.re * v.im - u.im * v.re
}

fn segments_cross(p1: C64, p2: C64, q1: C64, q2: C64) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 <= 0.0 && d3 * d4 <= 0.0
}

/// No two non-adjacent segments meet and no branch point lies on a
/// segment it is not an endpoint of.
fn polyline_is_simple(pts: &[C64; 5], scale: f64) -> bool {
    for i in 0..4 {
        for j in i + 2..4 {
            if segments_cross(pts[i], pts[i + 1], pts[j], pts[j + 1]) {
                return false;
            }
        }
        for (k, p) in pts.iter().enumerate() {
            if k != i && k != i + 1 && segment_distance(*p, pts[i], pts[i + 1]) < 1e-6 * scale {
                return false;
            }
        }
    }
    true
}

impl HomologyBasis {
    /// Deterministic chain from the sorted roots.
    pub fn new(roots: &[C64; 5]) -> Self {
        let scale = roots.iter().map(|r| r.norm()).fold(1.0, f64::max);
        let mut order = [0, 1, 2, 3, 4];
        let mut angular = false;
        if !polyline_is_simple(roots, scale) {
            let centroid: C64 = roots.iter().sum::<C64>() / 5.0;
            order.sort_by(|&i, &j| {
                (roots[i] - centroid)
                    .arg()
                    .total_cmp(&(roots[j] - centroid).arg())
            });
            angular = true;
        }
        Self {
            order,
            chain: order.map(|i| roots[i]),
            cuts: [(0, Some(1)), (2, Some(3)), (4, None)],
            angular,
        }
    }

    /// Endpoints of the segment encircled by `c_{i+1}`.
    pub fn segment(&self, i: usize) -> (C64, C64) {
        (self.chain[i], self.chain[i + 1])
    }

    /// `cᵢ·cⱼ`: `+1` for `j = i + 1`, `−1` for `j = i − 1`, else 0.
    pub fn chain_intersection() -> [[i64; 4]; 4] {
        let mut m = [[0; 4]; 4];
        for i in 0..3 {
            m[i][i + 1] = 1;
            m[i + 1][i] = -1;
        }
        m
    }

    /// `M·I·Mᵀ` for cycles given as rows of `m` over the chain.
    pub fn intersection_matrix(m: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
        let ic = Self::chain_intersection();
        let mut out = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        out[i][j] += m[i][k] * ic[k][l] * m[j][l];
                    }
                }
            }
        }
        out
    }

    /// Segments (with multiplicity) making up cycle row `k` of `m`.
    pub fn cycle_segments(&self, m: &[[i64; 4]; 4], k: usize) -> Vec<(i64, (C64, C64))> {
        (0..4)
            .filter(|&i| m[k][i] != 0)
            .map(|i| (m[k][i], self.segment(i)))
            .collect()
    }
}

/// `[[0, I], [−I, 0]]`.
pub(crate) fn standard_j() -> [[i64; 4]; 4] {
    [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
}
