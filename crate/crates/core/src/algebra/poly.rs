use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{AlgebraError, Rat, Result, VarSet};

/// Exponent vector, one entry per variable of the owning [`VarSet`].
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// vectors lexicographically. The largest monomial is the leading one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Result of a weighted-degree audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightReport {
    pub homogeneous: bool,
    /// Shared weight of all terms; `None` for the zero polynomial or when
    /// the terms disagree.
    pub weight: Option<i64>,
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality of the term
/// maps is polynomial equality.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Arc<VarSet>,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: &Arc<VarSet>) -> Self {
        Self {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Arc<VarSet>, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Arc<VarSet>) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn var(vars: &Arc<VarSet>, name: &str) -> Result<Self> {
        let i = vars.index_of(name)?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Ok(Self::monomial(vars, Monomial(e), Rat::one()))
    }

    pub fn monomial(vars: &Arc<VarSet>, m: Monomial, c: Rat) -> Self {
        assert_eq!(m.0.len(), vars.len());
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I>(vars: &Arc<VarSet>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rat)>,
    {
        let mut acc: HashMap<Monomial, Rat> = HashMap::new();
        for (e, c) in terms {
            if e.len() != vars.len() {
                return Err(AlgebraError::ExponentLength {
                    expected: vars.len(),
                    got: e.len(),
                });
            }
            *acc.entry(Monomial(e)).or_insert_with(Rat::zero) += c;
        }
        Ok(Self::from_accumulator(vars, acc))
    }

    fn from_accumulator(vars: &Arc<VarSet>, acc: HashMap<Monomial, Rat>) -> Self {
        Self {
            vars: vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial::one(self.vars.len()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(AlgebraError::VarSetMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.vars));
        }
        let mut acc: HashMap<Monomial, Rat> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        Ok(Self::from_accumulator(&self.vars, acc))
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Plain total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Highest exponent of variable `idx`; zero for the zero polynomial.
    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).max().unwrap_or(0)
    }

    pub fn degree_in_var(&self, name: &str) -> Result<u32> {
        Ok(self.degree_in(self.vars.index_of(name)?))
    }

    pub fn weight_of(&self, m: &Monomial) -> i64 {
        m.0.iter()
            .zip(self.vars.weights())
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }

    pub fn weighted_degree(&self) -> WeightReport {
        let mut weights = self.terms.keys().map(|m| self.weight_of(m));
        let Some(first) = weights.next() else {
            return WeightReport {
                homogeneous: true,
                weight: None,
            };
        };
        if weights.all(|w| w == first) {
            WeightReport {
                homogeneous: true,
                weight: Some(first),
            }
        } else {
            WeightReport {
                homogeneous: false,
                weight: None,
            }
        }
    }

    pub fn derivative(&self, idx: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[idx] -= 1;
            out.terms.insert(m2, c * Rat::from_integer(e.into()));
        }
        out
    }

    pub fn derivative_var(&self, name: &str) -> Result<Self> {
        Ok(self.derivative(self.vars.index_of(name)?))
    }

    /// Coefficients of `self` viewed as a univariate polynomial in variable
    /// `idx`; entry `k` multiplies `var^k` and does not contain the variable.
    pub fn coeffs_in(&self, idx: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(&self.vars); self.degree_in(idx) as usize + 1];
        for (m, c) in &self.terms {
            let k = m.0[idx] as usize;
            let mut m2 = m.clone();
            m2.0[idx] = 0;
            out[k].terms.insert(m2, c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in): `Σ coeffs[k] · var^k`.
    pub fn from_coeffs_in(vars: &Arc<VarSet>, idx: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero(vars);
        for (k, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                let mut m2 = m.clone();
                m2.0[idx] += k as u32;
                out.add_term(m2, c.clone());
            }
        }
        out
    }

    /// Multiply by `var^k`.
    pub fn shift(&self, idx: usize, k: u32) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut m2 = m.clone();
                    m2.0[idx] += k;
                    (m2, c.clone())
                })
                .collect(),
        }
    }

    /// Substitute the rational value `v` for variable `idx`.
    pub fn set_var(&self, idx: usize, v: &Rat) -> Self {
        let mut acc: HashMap<Monomial, Rat> = HashMap::new();
        for (m, c) in &self.terms {
            let e = m.0[idx];
            let mut m2 = m.clone();
            m2.0[idx] = 0;
            let f = if e == 0 { Rat::one() } else { num_traits::pow(v.clone(), e as usize) };
            *acc.entry(m2).or_insert_with(Rat::zero) += c * f;
        }
        Self::from_accumulator(&self.vars, acc)
    }

    /// Multiply each variable by a rational factor, `p(f₀x₀, f₁x₁, …)`.
    pub fn scale_vars(&self, factors: &[Rat]) -> Self {
        assert_eq!(factors.len(), self.vars.len());
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut v = c.clone();
                    for (&e, f) in m.0.iter().zip(factors) {
                        if e > 0 {
                            v *= num_traits::pow(f.clone(), e as usize);
                        }
                    }
                    (m.clone(), v)
                })
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Re-express over `target`, matching variables by name. Fails if a
    /// variable that actually occurs is absent from `target`.
    pub fn embed(&self, target: &Arc<VarSet>) -> Result<Self> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, n) in self.vars.names().iter().enumerate() {
            match target.index_of(n) {
                Ok(j) => map.push(Some(j)),
                Err(e) => {
                    if self.degree_in(i) > 0 {
                        return Err(e);
                    }
                    map.push(None);
                }
            }
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] += k;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Exact quotient by a monomial, or `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (t, c) in &self.terms {
            if !m.divides(t) {
                return None;
            }
            terms.insert(t.div(m), c.clone());
        }
        Some(Self {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Exact multivariate division: `Some(q)` with `self = q·d`, else `None`.
    ///
    /// If `d` divides `self` then the leading monomial of every intermediate
    /// remainder is divisible by the leading monomial of `d`, so the first
    /// non-divisible leading term proves non-divisibility.
    pub fn try_exact_div(&self, d: &Self) -> Option<Self> {
        self.check(d).ok()?;
        let (dm, dc) = d.leading_term()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut r = self.clone();
        let mut q = Self::zero(&self.vars);
        while let Some((rm, rc)) = r.leading_term() {
            if !dm.divides(rm) {
                return None;
            }
            let t = Self::monomial(&self.vars, rm.div(&dm), rc / &dc);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    fn check_len<T>(&self, point: &[T]) {
        assert_eq!(point.len(), self.vars.len(), "one value per variable");
    }

    pub fn eval_rat(&self, point: &[Rat]) -> Rat {
        self.check_len(point);
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (&e, v) in m.0.iter().zip(point) {
                if e > 0 {
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_rat_map(&self, point: &BTreeMap<String, Rat>) -> Result<Rat> {
        let values = self.assignment(point)?;
        Ok(self.eval_rat(&values))
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        self.check_len(point);
        let maxdeg: Vec<u32> = (0..self.vars.len()).map(|i| self.degree_in(i)).collect();
        let powers: Vec<Vec<Complex64>> = point
            .iter()
            .zip(&maxdeg)
            .map(|(v, &d)| {
                let mut p = Vec::with_capacity(d as usize + 1);
                let mut cur = Complex64::new(1.0, 0.0);
                for _ in 0..=d {
                    p.push(cur);
                    cur *= v;
                }
                p
            })
            .collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= powers[i][e as usize];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex_map(&self, point: &BTreeMap<String, Complex64>) -> Result<Complex64> {
        let values = self.assignment(point)?;
        Ok(self.eval_complex(&values))
    }

    fn assignment<T: Clone>(&self, point: &BTreeMap<String, T>) -> Result<Vec<T>> {
        self.vars
            .names()
            .iter()
            .map(|n| {
                point
                    .get(n)
                    .cloned()
                    .ok_or_else(|| AlgebraError::MissingAssignment(n.clone()))
            })
            .collect()
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl fmt::Display for MultiPoly {
    /// Terms from the leading monomial down, e.g. `4*x^3 - 2*x*y + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.degree() == 0 {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.names()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars.names()[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$checked(rhs).expect("mismatched variable sets")
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};

    fn xyz() -> Arc<VarSet> {
        VarSet::new(&["x", "y", "z"], &[2, 4, 6]).unwrap()
    }

    fn p(vars: &Arc<VarSet>, s: &str) -> MultiPoly {
        MultiPoly::parse(vars, s).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let v = xyz();
        let prod = &p(&v, "x+y") * &p(&v, "x-y");
        assert_eq!(prod, p(&v, "x^2-y^2"));
    }

    #[test]
    fn printed_c0_expands() {
        let v = xyz();
        let c0 = &p(&v, "x^2*y^4") * &p(&v, "5*x*z-3*y^2");
        assert_eq!(c0, p(&v, "5*x^3*y^4*z-3*x^2*y^6"));
        let one = vec![rat(1); 3];
        assert_eq!(c0.eval_rat(&one), rat(2));
    }

    #[test]
    fn annihilator() {
        let v = xyz();
        let z = &p(&v, "x^3+7") * &MultiPoly::zero(&v);
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn mismatched_varsets_are_rejected() {
        let a = MultiPoly::var(&xyz(), "x").unwrap();
        let b = MultiPoly::var(&VarSet::unweighted(&["x", "w"]).unwrap(), "x").unwrap();
        assert_eq!(a.checked_add(&b), Err(AlgebraError::VarSetMismatch));
        assert_eq!(a.checked_mul(&b), Err(AlgebraError::VarSetMismatch));
    }

    #[test]
    fn evaluation() {
        let v = xyz();
        let d10 = p(&v, "x^8");
        assert_eq!(d10.eval_rat(&[rat(2), rat(0), rat(0)]), rat(256));
        let q = p(&v, "3*x*y - 5/2 + z^2");
        assert_eq!(q.eval_rat(&[rat(0), rat(0), rat(0)]), ratio(-5, 2));
        let mut map = BTreeMap::new();
        map.insert("x".to_string(), rat(1));
        assert_eq!(
            q.eval_rat_map(&map),
            Err(AlgebraError::MissingAssignment("y".into()))
        );
        let c = q.eval_complex(&[Complex64::new(1.0, 1.0), Complex64::new(0.0, 2.0), Complex64::new(1.0, 0.0)]);
        // 3(1+i)(2i) - 5/2 + 1 = -6 + 6i - 3/2
        assert!((c - Complex64::new(-7.5, 6.0)).norm() < 1e-14);
    }

    #[test]
    fn weight_audit() {
        let v = xyz();
        assert_eq!(
            p(&v, "-x^3*y^5").weighted_degree(),
            WeightReport { homogeneous: true, weight: Some(26) }
        );
        assert_eq!(
            MultiPoly::one(&v).weighted_degree(),
            WeightReport { homogeneous: true, weight: Some(0) }
        );
        assert!(!p(&v, "x+y").weighted_degree().homogeneous);
    }

    #[test]
    fn derivative_and_coefficients() {
        let v = xyz();
        let q = p(&v, "x^3*z^2 + 2*y*z - 4");
        assert_eq!(q.derivative(2), p(&v, "2*x^3*z + 2*y"));
        let cs = q.coeffs_in(2);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], p(&v, "-4"));
        assert_eq!(cs[1], p(&v, "2*y"));
        assert_eq!(cs[2], p(&v, "x^3"));
        assert_eq!(MultiPoly::from_coeffs_in(&v, 2, &cs), q);
    }

    #[test]
    fn exact_division() {
        let v = xyz();
        let a = p(&v, "x^2 + 3*y*z - 1");
        let b = p(&v, "x*y - z^3 + 2");
        let prod = &a * &b;
        assert_eq!(prod.try_exact_div(&b), Some(a.clone()));
        assert_eq!((&prod + &MultiPoly::one(&v)).try_exact_div(&b), None);
        let m = Monomial(vec![1, 0, 0]);
        assert_eq!(p(&v, "x^2*y + x").div_monomial(&m), Some(p(&v, "x*y + 1")));
        assert_eq!(p(&v, "x^2*y + y").div_monomial(&m), None);
    }

    #[test]
    fn display_is_readable() {
        let v = xyz();
        assert_eq!(p(&v, "4*x^3 - 2*x*y + 1").to_string(), "4*x^3 - 2*x*y + 1");
        assert_eq!(MultiPoly::zero(&v).to_string(), "0");
    }
}
