use crate::error::{Error, Result};
use crate::tolerance::TOL;

use super::linalg::{identity, max_abs_diff, CMatrix};

/// A trace-preserving set of Kraus operators, `Σ Kᵢ†Kᵢ = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<CMatrix>,
}

impl KrausSet {
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let dim = match operators.first() {
            Some(k) => k.nrows(),
            None => return Err(Error::NotTracePreserving(1.0)),
        };
        let mut completeness = CMatrix::zeros(dim, dim);
        for k in &operators {
            if k.nrows() != dim || k.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: k.nrows().max(k.ncols()),
                });
            }
            completeness += k.adjoint() * k;
        }
        let err = max_abs_diff(&completeness, &identity(dim));
        if err > TOL.operator {
            return Err(Error::NotTracePreserving(err));
        }
        Ok(KrausSet { operators })
    }

    /// The single-operator set `{I}`.
    pub fn identity(dim: usize) -> Self {
        KrausSet {
            operators: vec![identity(dim)],
        }
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    /// Largest entrywise deviation of `Σ Kᵢ†Kᵢ` from the identity.
    pub fn completeness_error(&self) -> f64 {
        let dim = self.dim();
        let sum = self
            .operators
            .iter()
            .fold(CMatrix::zeros(dim, dim), |acc, k| acc + k.adjoint() * k);
        max_abs_diff(&sum, &identity(dim))
    }
}
