//! Exact derivation and certification of the ℘₁₁(2u) duplication formula
//! and the σ-decomposition of `f₂ − g₂`.
//!
//! Polynomials over `{x, y, z, λ₄, λ₆, λ₈, λ₁₀}` stand for polynomials in
//! `x = ℘₁₁`, `y = ℘₁₃`, `z = ℘₃₃`; the odd functions `℘₁₁₁`, `℘₁₁₃` never
//! become variables and are carried by [`OddLinearElement`] instead.

mod duplication;
mod kummer;
mod odd;
mod rational_limit;
mod report;
mod tables;
mod theorem;

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::algebra::{AlgebraError, VarSet};

pub use duplication::{build_phi_family, duplication_p11, verify_duplication_tables, PhiFamily};
pub use kummer::{kummer_reduce, kummer_reduce_by_powers, reduce_poly, KummerData};
pub use odd::{formal_u1_derivative, odd_mul, OddLinearElement, PRelations};
pub use rational_limit::{rational_limit_sides, verify_rational_limit, verify_rational_limit_with};
pub use report::CertReport;
pub use tables::{PaperTables, Quad};
pub use theorem::{
    extract_leading_a1_b1, sigma_substitution, verify_theorem_ab, verify_theorem_ab_with,
    TheoremForms, TheoremPolys,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolicError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("product has a nonzero odd part; expected a pure polynomial")]
    NotEven,
    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, SymbolicError>;

/// Ring of `x, y, z` and the curve moduli, weighted `(2, 4, 6, 4, 6, 8, 10)`.
pub fn p_ring() -> &'static Arc<VarSet> {
    static RING: OnceLock<Arc<VarSet>> = OnceLock::new();
    RING.get_or_init(|| {
        VarSet::new(
            &["x", "y", "z", "l4", "l6", "l8", "l10"],
            &[2, 4, 6, 4, 6, 8, 10],
        )
        .unwrap()
    })
}

/// Ring of σ and its derivatives through second order, plus the moduli.
///
/// Weights follow `σ(u) = u₁³/3 − u₃ + …` with `u₁, u₃` of weight `−1, −3`:
/// σ has weight −3 and each `∂_{u_i}` adds `i`.
pub fn sigma_ring() -> &'static Arc<VarSet> {
    static RING: OnceLock<Arc<VarSet>> = OnceLock::new();
    RING.get_or_init(|| {
        VarSet::new(
            &["s", "s1", "s3", "s11", "s13", "s33", "l4", "l6", "l8", "l10"],
            &[-3, -2, 0, -1, 1, 3, 4, 6, 8, 10],
        )
        .unwrap()
    })
}

/// Ring of the rational-limit variables `u₁, u₃`.
pub fn u_ring() -> &'static Arc<VarSet> {
    static RING: OnceLock<Arc<VarSet>> = OnceLock::new();
    RING.get_or_init(|| VarSet::new(&["u1", "u3"], &[-1, -3]).unwrap())
}

pub(crate) const X: usize = 0;
pub(crate) const Y: usize = 1;
pub(crate) const Z: usize = 2;
