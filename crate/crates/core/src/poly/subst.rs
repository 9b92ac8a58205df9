use crate::arith::{ExactMatrix, Field, Scalar};
use crate::error::{Error, Result};

/// Linear map from `m` new variables into `N` old variables.
///
/// Column `j` is the image of the `j`-th new basis vector, so a polynomial in the old
/// variables pulls back to one in the new variables by `x_i -> sum_j S[i][j] y_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSubstitution {
    matrix: ExactMatrix,
}

impl LinearSubstitution {
    pub fn new(matrix: ExactMatrix) -> Self {
        LinearSubstitution { matrix }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::new(ExactMatrix::identity(field, n))
    }

    /// Substitution whose columns are the given vectors of length `old_vars`.
    pub fn from_columns(field: Field, old_vars: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        Ok(Self::new(ExactMatrix::from_columns(field, old_vars, columns)?))
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn old_vars(&self) -> usize {
        self.matrix.rows()
    }

    pub fn new_vars(&self) -> usize {
        self.matrix.cols()
    }

    /// `self` followed by `inner`: pulling back along the result equals pulling back along
    /// `self` and then along `inner`.
    pub fn compose(&self, inner: &LinearSubstitution) -> Result<LinearSubstitution> {
        if self.new_vars() != inner.old_vars() {
            return Err(Error::VariableCountMismatch(self.new_vars(), inner.old_vars()));
        }
        Ok(Self::new(self.matrix.mul(&inner.matrix)?))
    }

    /// Image of a point given in the new coordinates.
    pub fn apply(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.matrix.mul_vec(v)
    }

    pub fn to_field(&self, target: Field) -> Result<Self> {
        Ok(Self::new(self.matrix.to_field(target)?))
    }
}
