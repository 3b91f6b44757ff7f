use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{AlgebraError, MultiPoly, Rat, Result, VarSet};

/// Wire form `{vars: [...], terms: [{exps: [...], num: "...", den: "..."}]}`.
///
/// Terms are written from the leading monomial down so dumps are stable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exps: Vec<u32>,
    pub num: String,
    pub den: String,
}

impl From<&MultiPoly> for PolyJson {
    fn from(p: &MultiPoly) -> Self {
        PolyJson {
            vars: p.vars().names().to_vec(),
            terms: p
                .terms()
                .rev()
                .map(|(m, c)| TermJson {
                    exps: m.0.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl PolyJson {
    /// Rebuild over `vars`, which must list the same names in the same order.
    pub fn to_poly(&self, vars: &Arc<VarSet>) -> Result<MultiPoly> {
        if self.vars.as_slice() != vars.names() {
            return Err(AlgebraError::VarSetMismatch);
        }
        let bad = |s: &str| AlgebraError::Parse {
            pos: 0,
            msg: format!("invalid integer `{s}`"),
        };
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let n: BigInt = t.num.parse().map_err(|_| bad(&t.num))?;
            let d: BigInt = t.den.parse().map_err(|_| bad(&t.den))?;
            if d == BigInt::from(0) {
                return Err(AlgebraError::ZeroDenominator);
            }
            terms.push((t.exps.clone(), Rat::new(n, d)));
        }
        MultiPoly::from_terms(vars, terms)
    }
}
