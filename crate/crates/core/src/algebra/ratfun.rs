use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::{AlgebraError, MultiPoly, Rat, Result, VarSet};

/// Numerator/denominator pair. No GCD cancellation is attempted; equality
/// is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl RationalFunction {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if num.vars() != den.vars() {
            return Err(AlgebraError::VarSetMismatch);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.vars());
        Self { num: p, den }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        self.num.vars()
    }

    /// `f.num·g.den − g.num·f.den` is the zero polynomial.
    ///
    /// Panics if the two live over different variable sets.
    pub fn cross_equal(&self, other: &Self) -> bool {
        self.cross_residual(other).is_zero()
    }

    pub fn cross_residual(&self, other: &Self) -> MultiPoly {
        &(&self.num * &other.den) - &(&other.num * &self.den)
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn eval_rat(&self, point: &[Rat]) -> Option<Rat> {
        let d = self.den.eval_rat(point);
        if num_traits::Zero::is_zero(&d) {
            return None;
        }
        Some(self.num.eval_rat(point) / d)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        self.num.eval_complex(point) / self.den.eval_complex(point)
    }
}

impl MultiPoly {
    /// Compose with rational functions over `target`.
    ///
    /// Every variable occurring in `self` must be assigned (by name). The
    /// result's denominator is `∏ den_v^{E_v}` with `E_v` the degree of
    /// `self` in `v`; variables of degree zero may be left unassigned.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, RationalFunction>,
        target: &Arc<VarSet>,
    ) -> Result<RationalFunction> {
        let n = self.vars().len();
        let mut num_pows: Vec<Vec<MultiPoly>> = Vec::with_capacity(n);
        let mut den_pows: Vec<Vec<MultiPoly>> = Vec::with_capacity(n);
        let mut top: Vec<u32> = Vec::with_capacity(n);
        for (i, name) in self.vars().names().iter().enumerate() {
            let e = self.degree_in(i);
            top.push(e);
            if e == 0 {
                num_pows.push(vec![MultiPoly::one(target)]);
                den_pows.push(vec![MultiPoly::one(target)]);
                continue;
            }
            let rf = assignment
                .get(name)
                .ok_or_else(|| AlgebraError::MissingAssignment(name.clone()))?;
            if rf.vars() != target {
                return Err(AlgebraError::VarSetMismatch);
            }
            if rf.den.is_zero() {
                return Err(AlgebraError::ZeroDenominator);
            }
            num_pows.push(powers(&rf.num, e));
            den_pows.push(powers(&rf.den, e));
        }
        let mut den = MultiPoly::one(target);
        for i in 0..n {
            den = &den * &den_pows[i][top[i] as usize];
        }
        let mut num = MultiPoly::zero(target);
        for (m, c) in self.terms() {
            let mut t = MultiPoly::constant(target, c.clone());
            for i in 0..n {
                let e = m.0[i] as usize;
                if top[i] == 0 {
                    continue;
                }
                t = &t * &num_pows[i][e];
                t = &t * &den_pows[i][top[i] as usize - e];
            }
            num = &num + &t;
        }
        RationalFunction::new(num, den)
    }
}

fn powers(p: &MultiPoly, e: u32) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::one(p.vars())];
    for k in 1..=e as usize {
        out.push(&out[k - 1] * p);
    }
    out
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        RationalFunction {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics when dividing by the zero function.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self * &rhs.inverse().expect("division by the zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
