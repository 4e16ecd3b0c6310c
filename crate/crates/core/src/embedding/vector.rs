use serde::{Deserialize, Serialize};

use super::EmbeddingError;

/// Tolerance on the L2 norm of a stored vector.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-6;

/// A finite, L2-normalized dense vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct EmbeddingVector(Vec<f64>);

impl EmbeddingVector {
    /// Scales `values` to unit length. Fails on empty, non-finite or zero input.
    pub fn normalized(mut values: Vec<f64>) -> Result<Self, EmbeddingError> {
        if values.is_empty() {
            return Err(EmbeddingError::Degenerate("empty vector".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(EmbeddingError::Degenerate("non-finite component".into()));
        }
        let norm = l2_norm(&values);
        if norm == 0.0 || !norm.is_finite() {
            return Err(EmbeddingError::Degenerate("zero vector".into()));
        }
        for v in &mut values {
            *v /= norm;
        }
        Ok(Self(values))
    }

    /// Accepts values that are already unit length, keeping them bit-exact.
    pub fn from_unit(values: Vec<f64>) -> Result<Self, EmbeddingError> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(EmbeddingError::Degenerate("empty or non-finite vector".into()));
        }
        let norm = l2_norm(&values);
        if (norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
            return Err(EmbeddingError::Degenerate(format!("norm {norm} is not 1")));
        }
        Ok(Self(values))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.0)
    }
}

impl TryFrom<Vec<f64>> for EmbeddingVector {
    type Error = EmbeddingError;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        EmbeddingVector::from_unit(v)
    }
}

impl From<EmbeddingVector> for Vec<f64> {
    fn from(v: EmbeddingVector) -> Self {
        v.0
    }
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
