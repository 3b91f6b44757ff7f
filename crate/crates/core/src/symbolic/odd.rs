use std::ops::{Add, Neg, Sub};

use super::{p_ring, Result, SymbolicError, X, Y, Z};
use crate::algebra::MultiPoly;

fn parse(src: &str) -> MultiPoly {
    MultiPoly::parse(p_ring(), src).expect("relation parses")
}

/// Element `c₁ + c₁₁₁·℘₁₁₁ + c₁₁₃·℘₁₁₃` of the rank-3 module over
/// `Q[x, y, z, λ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddLinearElement {
    pub coef_1: MultiPoly,
    pub coef_p111: MultiPoly,
    pub coef_p113: MultiPoly,
}

impl OddLinearElement {
    pub fn new(coef_1: MultiPoly, coef_p111: MultiPoly, coef_p113: MultiPoly) -> Self {
        Self {
            coef_1,
            coef_p111,
            coef_p113,
        }
    }

    pub fn zero() -> Self {
        let z = MultiPoly::zero(p_ring());
        Self::new(z.clone(), z.clone(), z)
    }

    pub fn pure(p: MultiPoly) -> Self {
        let z = MultiPoly::zero(p_ring());
        Self::new(p, z.clone(), z)
    }

    /// `a·℘₁₁₁ + b·℘₁₁₃`.
    pub fn odd(a: MultiPoly, b: MultiPoly) -> Self {
        Self::new(MultiPoly::zero(p_ring()), a, b)
    }

    pub fn p111() -> Self {
        Self::odd(MultiPoly::one(p_ring()), MultiPoly::zero(p_ring()))
    }

    pub fn p113() -> Self {
        Self::odd(MultiPoly::zero(p_ring()), MultiPoly::one(p_ring()))
    }

    pub fn is_zero(&self) -> bool {
        self.coef_1.is_zero() && self.coef_p111.is_zero() && self.coef_p113.is_zero()
    }

    pub fn is_even(&self) -> bool {
        self.coef_p111.is_zero() && self.coef_p113.is_zero()
    }

    pub fn scale(&self, p: &MultiPoly) -> Self {
        Self::new(&self.coef_1 * p, &self.coef_p111 * p, &self.coef_p113 * p)
    }

    /// Full product, with the three quadratic odd monomials replaced by
    /// their relation right-hand sides.
    pub fn mul(&self, other: &Self, rel: &PRelations) -> Self {
        let (a0, a1, a2) = (&self.coef_1, &self.coef_p111, &self.coef_p113);
        let (b0, b1, b2) = (&other.coef_1, &other.coef_p111, &other.coef_p113);
        let even = &(&(a0 * b0) + &(&(a1 * b1) * &rel.rel_p111_sq))
            + &(&(&(&(a1 * b2) + &(a2 * b1)) * &rel.rel_p111_p113)
                + &(&(a2 * b2) * &rel.rel_p113_sq));
        Self::new(even, &(a0 * b1) + &(a1 * b0), &(a0 * b2) + &(a2 * b0))
    }
}

impl Add for &OddLinearElement {
    type Output = OddLinearElement;
    fn add(self, rhs: &OddLinearElement) -> OddLinearElement {
        OddLinearElement::new(
            &self.coef_1 + &rhs.coef_1,
            &self.coef_p111 + &rhs.coef_p111,
            &self.coef_p113 + &rhs.coef_p113,
        )
    }
}

impl Sub for &OddLinearElement {
    type Output = OddLinearElement;
    fn sub(self, rhs: &OddLinearElement) -> OddLinearElement {
        self + &(-rhs)
    }
}

impl Neg for &OddLinearElement {
    type Output = OddLinearElement;
    fn neg(self) -> OddLinearElement {
        OddLinearElement::new(-&self.coef_1, -&self.coef_p111, -&self.coef_p113)
    }
}

/// Differential relations among the Kleinian ℘-functions, encoded as axioms.
#[derive(Clone, Debug)]
pub struct PRelations {
    /// `℘₁₁₁²`
    pub rel_p111_sq: MultiPoly,
    /// `℘₁₁₁℘₁₁₃`
    pub rel_p111_p113: MultiPoly,
    /// `℘₁₁₃²`
    pub rel_p113_sq: MultiPoly,
    /// `℘₁₃₃ = ℘₁₁₁℘₁₃ − ℘₁₁℘₁₁₃`
    pub p133: OddLinearElement,
    /// `℘₃₃₃ = 2℘₁₁℘₁₃₃ − ℘₃₃℘₁₁₁ − ℘₁₃℘₁₁₃ − λ₄℘₁₁₃`
    pub p333: OddLinearElement,
    /// `℘₁₁₁₁`
    pub p1111: MultiPoly,
    /// `℘₁₁₁₃`
    pub p1113: MultiPoly,
}

impl PRelations {
    pub fn printed() -> Self {
        let p133 = OddLinearElement::odd(parse("y"), parse("-x"));
        let p333 = &(&p133.scale(&parse("2*x")) - &OddLinearElement::odd(parse("z"), parse("y")))
            - &OddLinearElement::odd(parse("0"), parse("l4"));
        Self {
            rel_p111_sq: parse("4*z + 4*l4*x + 4*x^3 + 4*y*x + 4*l6"),
            rel_p111_p113: parse("2*l8 + 2*y^2 - 2*z*x + 2*l4*y + 4*y*x^2"),
            rel_p113_sq: parse("4*l10 - 4*z*y + 4*x*y^2"),
            p133,
            p333,
            p1111: parse("6*x^2 + 4*y + 2*l4"),
            p1113: parse("6*x*y - 2*z"),
        }
    }
}

/// Product of two module elements that must reduce to a pure polynomial.
pub fn odd_mul(
    e1: &OddLinearElement,
    e2: &OddLinearElement,
    rel: &PRelations,
) -> Result<MultiPoly> {
    let prod = e1.mul(e2, rel);
    if !prod.is_even() {
        return Err(SymbolicError::NotEven);
    }
    Ok(prod.coef_1)
}

/// `∂/∂u₁` of a polynomial in `x, y, z, λ`, as an odd element.
fn derive_poly(c: &MultiPoly, rel: &PRelations) -> OddLinearElement {
    let base = OddLinearElement::odd(c.derivative(X), c.derivative(Y));
    &base + &rel.p133.scale(&c.derivative(Z))
}

/// Formal `∂/∂u₁`: `∂x = ℘₁₁₁`, `∂y = ℘₁₁₃`, `∂z = ℘₁₃₃`, `∂℘₁₁₁ = ℘₁₁₁₁`,
/// `∂℘₁₁₃ = ℘₁₁₁₃`, with quadratic odd products reduced on the fly.
pub fn formal_u1_derivative(e: &OddLinearElement, rel: &PRelations) -> OddLinearElement {
    let d0 = derive_poly(&e.coef_1, rel);
    let d1 = derive_poly(&e.coef_p111, rel).mul(&OddLinearElement::p111(), rel);
    let d2 = derive_poly(&e.coef_p113, rel).mul(&OddLinearElement::p113(), rel);
    let chain = OddLinearElement::pure(
        &(&e.coef_p111 * &rel.p1111) + &(&e.coef_p113 * &rel.p1113),
    );
    &(&(&d0 + &d1) + &d2) + &chain
}
