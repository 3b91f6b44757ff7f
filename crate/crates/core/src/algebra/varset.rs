use std::sync::Arc;

use super::{AlgebraError, Result};

/// Ordered, named variables with an integer weight per variable.
///
/// Polynomials are only combined when their variable sets compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarSet {
    names: Vec<String>,
    weights: Vec<i64>,
}

impl VarSet {
    pub fn new(names: &[&str], weights: &[i64]) -> Result<Arc<Self>> {
        assert_eq!(names.len(), weights.len(), "one weight per variable");
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(AlgebraError::DuplicateVariable((*n).to_string()));
            }
        }
        Ok(Arc::new(Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            weights: weights.to_vec(),
        }))
    }

    /// All weights equal to one, i.e. plain total degree.
    pub fn unweighted(names: &[&str]) -> Result<Arc<Self>> {
        Self::new(names, &vec![1; names.len()])
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))
    }
}
