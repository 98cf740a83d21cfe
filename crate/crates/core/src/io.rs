//! JSON schemas for matrices and problem instances.
//!
//! A matrix is `{"dim": d, "matrix": [[[re, im], ...], ...]}` — `dim` rows
//! of `dim` entries, each a two-element `[re, im]` array of doubles. An
//! instance file carries a Hamiltonian, a state, an optional estimator and
//! an optional label; all matrices must share one dimension, the state
//! must validate as a density matrix and the others as Hermitian
//! operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Complex64, DensityMatrix, HermitianOperator};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { dim, matrix }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.dim == 0 {
            return Err(Error::InvalidInput("matrix dim must be positive".into()));
        }
        if self.matrix.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "expected {} rows, got {}",
                self.dim,
                self.matrix.len()
            )));
        }
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != self.dim {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    self.dim
                )));
            }
            for (j, e) in row.iter().enumerate() {
                if !e[0].is_finite() || !e[1].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            Complex64::new(self.matrix[i][j][0], self.matrix[i][j][1])
        }))
    }

    pub fn to_hermitian(&self) -> Result<HermitianOperator> {
        HermitianOperator::new(self.to_matrix()?)
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.to_hermitian()?)
    }
}

/// One problem instance on disk.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub hamiltonian: MatrixJson,
    pub state: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimator: Option<MatrixJson>,
}

/// A validated instance ready for computation.
#[derive(Debug, Clone)]
pub struct ValidatedInstance {
    pub label: Option<String>,
    pub hamiltonian: HermitianOperator,
    pub state: DensityMatrix,
    pub estimator: Option<HermitianOperator>,
}

impl InstanceFile {
    pub fn validate(&self) -> Result<ValidatedInstance> {
        let hamiltonian = self.hamiltonian.to_hermitian()?;
        let state = self.state.to_density()?;
        if hamiltonian.dim() != state.dim() {
            return Err(Error::DimMismatch {
                left: hamiltonian.dim(),
                right: state.dim(),
            });
        }
        let estimator = match &self.estimator {
            Some(m) => {
                let t = m.to_hermitian()?;
                if t.dim() != state.dim() {
                    return Err(Error::DimMismatch {
                        left: t.dim(),
                        right: state.dim(),
                    });
                }
                Some(t)
            }
            None => None,
        };
        Ok(ValidatedInstance {
            label: self.label.clone(),
            hamiltonian,
            state,
            estimator,
        })
    }
}
