//! Ground-truth coefficient tables of the ℘₁₁(2u) duplication formula.
//!
//! Numerator:   `c₀ + Σ λ_k c_k + Σ λ₄^i λ₆^j λ₈^k λ₁₀^ℓ a_{ijkℓ}`
//! Denominator: `d₀ + Σ λ_k d_k + Σ λ₄^i λ₆^j λ₈^k λ₁₀^ℓ b_{ijkℓ}`
//! with `x = ℘₁₁(u)`, `y = ℘₁₃(u)`, `z = ℘₃₃(u)`. Entries not listed are zero.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::p_ring;
use crate::algebra::{MultiPoly, PolyJson};

pub type Quad = [u8; 4];

const C_TABLE: [(u8, &str); 5] = [
    (0, "x^2*y^4*(5*x*z-3*y^2)"),
    (4, "x^4*y^2*(3*x*z-y^2)"),
    (6, "-2*x^6*y*z"),
    (8, "x^6*(x*z+y^2)"),
    (10, "-2*x^7*y"),
];

const D_TABLE: [(u8, &str); 5] = [
    (0, "-x^3*y^5"),
    (4, "-x^5*y^3"),
    (6, "x^6*y^2"),
    (8, "-x^7*y"),
    (10, "x^8"),
];

const A_TABLE: [(Quad, &str); 30] = [
    ([0, 0, 0, 0], "4*y^5*(x*z-y^2)"),
    ([1, 0, 0, 0], "y^3*(4*y+3*x^2)*(2*x*z-3*y^2)"),
    ([0, 1, 0, 0], "2*y^2*(24*y^2*z+6*x^2*y*z-2*x^4*z+6*x*y^3+5*x^3*y^2)"),
    ([0, 0, 1, 0], "-y^2*(56*x*y*z+22*x^3*z+76*y^3+41*x^2*y^2+8*x^4*y)"),
    ([2, 0, 0, 0], "y^2*(20*x*y*z+9*x^3*z+4*y^3-x^2*y^2-x^4*y)"),
    ([0, 0, 0, 1], "2*(40*y^3*z+50*x^2*y^2*z+20*x^4*y*z+3*x^6*z+70*x*y^4+30*x^3*y^3+2*x^5*y^2)"),
    ([1, 1, 0, 0], "2*y*(2*y+x^2)*(4*y*z-3*x^2*z-6*x*y^2+x^3*y)"),
    ([1, 0, 1, 0], "8*x*y^2*z+6*x^3*y*z+3*x^5*z-88*y^4-50*x^2*y^3-10*x^4*y^2-3*x^6*y"),
    ([0, 2, 0, 0], "-4*y*(4*x*y*z+2*x^3*z-16*y^3-12*x^2*y^2-3*x^4*y)"),
    ([3, 0, 0, 0], "y^3*(12*y+5*x^2)"),
    ([1, 0, 0, 1], "2*(24*y^2*z+18*x^2*y*z+5*x^4*z+60*x*y^3+44*x^3*y^2+11*x^5*y+2*x^7)"),
    ([0, 1, 1, 0], "-4*(4*y^2*z+x^2*y*z-x^4*z+14*x*y^3+10*x^3*y^2+3*x^5*y)"),
    ([2, 1, 0, 0], "-2*x*y^2*(2*y+x^2)"),
    ([0, 1, 0, 1], "4*(4*x*y*z+3*x^3*z+36*y^3+27*x^2*y^2+8*x^4*y+2*x^6)"),
    ([0, 0, 2, 0], "4*x*y*z+5*x^3*z-76*y^3-41*x^2*y^2-8*x^4*y+x^6"),
    ([2, 0, 1, 0], "y*(4*y^2-x^2*y-x^4)"),
    ([0, 0, 1, 1], "4*(4*y*z+5*x^2*z+18*x*y^2+11*x^3*y+4*x^5)"),
    ([2, 0, 0, 1], "4*x*(3*y^2+3*x^2*y+x^4)"),
    ([1, 1, 1, 0], "-4*x*y*(2*y+x^2)"),
    ([0, 0, 0, 2], "4*(4*x*z+16*y^2+12*x^2*y+5*x^4)"),
    ([1, 1, 0, 1], "4*(y+x^2)*(4*y+3*x^2)"),
    ([1, 0, 2, 0], "-12*y^2-9*x^2*y-x^4"),
    ([1, 0, 1, 1], "4*x*(2*y+3*x^2)"),
    ([0, 2, 0, 1], "8*x*(2*y+x^2)"),
    ([0, 1, 2, 0], "-2*x*(2*y+x^2)"),
    ([1, 0, 0, 2], "16*x^2"),
    ([0, 1, 1, 1], "4*(4*y+3*x^2)"),
    ([0, 0, 3, 0], "-4*y-3*x^2"),
    ([0, 1, 0, 2], "16*x"),
    ([0, 0, 2, 1], "-4*x"),
];

const B_TABLE: [(Quad, &str); 30] = [
    ([0, 0, 0, 0], "-y^4*(36*y*z+5*x^2*z+6*x*y^2)"),
    ([1, 0, 0, 0], "-y^2*(24*y^2*z+26*x^2*y*z+3*x^4*z+26*x*y^3+10*x^3*y^2)"),
    ([0, 1, 0, 0], "x*y*(24*y^2*z+18*x^2*y*z+2*x^4*z+39*x*y^3+12*x^3*y^2)"),
    ([0, 0, 1, 0], "24*y^3*z-2*x^2*y^2*z-8*x^4*y*z-x^6*z-46*x*y^4-58*x^3*y^3-14*x^5*y^2"),
    ([2, 0, 0, 0], "-y^2*(4*y*z-3*x^2*z+2*x*y^2+x^3*y)"),
    ([0, 0, 0, 1], "-4*(20*x*y^2*z+10*x^3*y*z+x^5*z-15*y^4-30*x^2*y^3-20*x^4*y^2-4*x^6*y)"),
    ([1, 1, 0, 0], "2*x*y*(4*y*z-x^2*z-5*x*y^2)"),
    ([1, 0, 1, 0], "8*y^2*z-2*x^2*y*z+x^4*z+4*x*y^3+14*x^3*y^2+x^5*y"),
    ([0, 2, 0, 0], "-4*x^2*y*(z-x*y)"),
    ([3, 0, 0, 0], "2*x*y^3"),
    ([1, 0, 0, 1], "2*(2*x^3*z+28*y^3+8*x^2*y^2-8*x^4*y-x^6)"),
    ([0, 1, 1, 0], "-2*x*(4*y*z-x^2*z-3*x*y^2+2*x^3*y)"),
    ([2, 1, 0, 0], "-x^2*y^2"),
    ([0, 1, 0, 1], "4*x*(2*x*z-22*y^2-14*x^2*y-x^4)"),
    ([0, 0, 2, 0], "-4*y*z+3*x^2*z+22*x*y^2+7*x^3*y+2*x^5"),
    ([2, 0, 1, 0], "2*x*y^2"),
    ([0, 0, 1, 1], "8*(2*x*z-y^2-x^2*y+x^4)"),
    ([2, 0, 0, 1], "12*y^2+x^4"),
    ([1, 1, 1, 0], "-2*x^2*y"),
    ([0, 0, 0, 2], "16*(z+x*y+x^3)"),
    ([1, 1, 0, 1], "-4*x*(2*y-x^2)"),
    ([1, 0, 2, 0], "-2*x*y"),
    ([1, 0, 1, 1], "-8*(y-x^2)"),
    ([0, 2, 0, 1], "4*x^2"),
    ([0, 1, 2, 0], "-x^2"),
    ([1, 0, 0, 2], "16*x"),
    ([0, 1, 1, 1], "8*x"),
    ([0, 0, 3, 0], "-2*x"),
    ([0, 1, 0, 2], "16"),
    ([0, 0, 2, 1], "-4"),
];

/// The c/d/a/b coefficient tables as exact polynomials over
/// `{x, y, z, λ₄, λ₆, λ₈, λ₁₀}`.
#[derive(Clone, Debug)]
pub struct PaperTables {
    pub c: BTreeMap<u8, MultiPoly>,
    pub d: BTreeMap<u8, MultiPoly>,
    pub a: BTreeMap<Quad, MultiPoly>,
    pub b: BTreeMap<Quad, MultiPoly>,
}

fn parse(src: &str) -> MultiPoly {
    MultiPoly::parse(p_ring(), src).expect("table entry parses")
}

impl PaperTables {
    pub fn printed() -> Self {
        let mut a = BTreeMap::new();
        for (k, s) in A_TABLE {
            assert!(a.insert(k, parse(s)).is_none(), "duplicate a-entry {k:?}");
        }
        let mut b = BTreeMap::new();
        for (k, s) in B_TABLE {
            assert!(b.insert(k, parse(s)).is_none(), "duplicate b-entry {k:?}");
        }
        Self {
            c: C_TABLE.iter().map(|(k, s)| (*k, parse(s))).collect(),
            d: D_TABLE.iter().map(|(k, s)| (*k, parse(s))).collect(),
            a,
            b,
        }
    }

    /// `a_{ijkℓ}` with the (0,0,3,0) entry's sign pattern changed from
    /// `−4y−3x²` to `+4y−3x²`. Used to exercise failure reporting.
    pub fn with_a0030_mutated(mut self) -> Self {
        self.a.insert([0, 0, 3, 0], parse("4*y-3*x^2"));
        self
    }

    /// λ-prefactor `λ₄^i λ₆^j λ₈^k λ₁₀^ℓ`.
    pub fn lambda_monomial(q: &Quad) -> MultiPoly {
        parse(&format!("l4^{}*l6^{}*l8^{}*l10^{}", q[0], q[1], q[2], q[3]))
    }

    /// Weight `4i + 6j + 8k + 10ℓ` of the λ-prefactor.
    pub fn lambda_weight(q: &Quad) -> i64 {
        4 * q[0] as i64 + 6 * q[1] as i64 + 8 * q[2] as i64 + 10 * q[3] as i64
    }

    fn lambda_single(k: u8) -> MultiPoly {
        match k {
            0 => MultiPoly::one(p_ring()),
            k => parse(&format!("l{k}")),
        }
    }

    fn assemble(single: &BTreeMap<u8, MultiPoly>, quad: &BTreeMap<Quad, MultiPoly>) -> MultiPoly {
        let mut acc = MultiPoly::zero(p_ring());
        for (k, p) in single {
            acc = &acc + &(&Self::lambda_single(*k) * p);
        }
        for (q, p) in quad {
            acc = &acc + &(&Self::lambda_monomial(q) * p);
        }
        acc
    }

    /// `N = c₀ + Σ λ_k c_k + Σ λ^q a_q`.
    pub fn numerator(&self) -> MultiPoly {
        Self::assemble(&self.c, &self.a)
    }

    /// `D = d₀ + Σ λ_k d_k + Σ λ^q b_q`.
    pub fn denominator(&self) -> MultiPoly {
        Self::assemble(&self.d, &self.b)
    }

    pub fn quad_label(prefix: char, q: &Quad) -> String {
        format!("{prefix}_{{{}{}{}{}}}", q[0], q[1], q[2], q[3])
    }

    /// Every entry keyed `c_{k}`, `d_{k}`, `a_{ijkl}`, `b_{ijkl}` as a
    /// display string and as a polynomial JSON object.
    pub fn to_json(&self) -> Value {
        let mut entries = serde_json::Map::new();
        let mut put = |label: String, p: &MultiPoly| {
            entries.insert(
                label,
                json!({ "expr": p.to_string(), "poly": PolyJson::from(p) }),
            );
        };
        for (k, p) in &self.c {
            put(format!("c_{{{k}}}"), p);
        }
        for (k, p) in &self.d {
            put(format!("d_{{{k}}}"), p);
        }
        for (q, p) in &self.a {
            put(Self::quad_label('a', q), p);
        }
        for (q, p) in &self.b {
            put(Self::quad_label('b', q), p);
        }
        Value::Object(entries)
    }
}
