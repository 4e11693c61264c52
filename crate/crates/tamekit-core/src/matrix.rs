//! JSON wire format for matrices: `{ "dim": m, "rows": [[...], ...] }`
//! row-major, 64-bit floats. Complex matrices carry paired `re`/`im` row
//! arrays. Rectangular matrices omit `dim`.

use crate::linalg::{CMat, RMat};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexMatrixJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, thiserror::Error)]
pub enum MatrixJsonError {
    #[error("rows are empty")]
    Empty,
    #[error("ragged rows: row {row} has {got} entries, expected {expected}")]
    Ragged { row: usize, got: usize, expected: usize },
    #[error("declared dim {dim} does not match a {rows}x{cols} matrix")]
    DimMismatch { dim: usize, rows: usize, cols: usize },
    #[error("re/im shapes differ")]
    ReImShape,
}

impl MatrixJson {
    pub fn from_matrix(m: &RMat) -> Self {
        let rows = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect();
        let dim = if m.nrows() == m.ncols() { Some(m.nrows()) } else { None };
        MatrixJson { dim, rows }
    }

    pub fn to_matrix(&self) -> Result<RMat, MatrixJsonError> {
        let nrows = self.rows.len();
        if nrows == 0 {
            return Err(MatrixJsonError::Empty);
        }
        let ncols = self.rows[0].len();
        for (i, r) in self.rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(MatrixJsonError::Ragged { row: i, got: r.len(), expected: ncols });
            }
        }
        if let Some(d) = self.dim {
            if d != nrows || d != ncols {
                return Err(MatrixJsonError::DimMismatch { dim: d, rows: nrows, cols: ncols });
            }
        }
        Ok(RMat::from_fn(nrows, ncols, |i, j| self.rows[i][j]))
    }
}

impl ComplexMatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let re = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
            .collect();
        let im = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
            .collect();
        let dim = if m.nrows() == m.ncols() { Some(m.nrows()) } else { None };
        ComplexMatrixJson { dim, re, im }
    }

    pub fn to_matrix(&self) -> Result<CMat, MatrixJsonError> {
        let re = MatrixJson { dim: self.dim, rows: self.re.clone() }.to_matrix()?;
        let im = MatrixJson { dim: self.dim, rows: self.im.clone() }.to_matrix()?;
        if re.shape() != im.shape() {
            return Err(MatrixJsonError::ReImShape);
        }
        Ok(CMat::from_fn(re.nrows(), re.ncols(), |i, j| {
            Complex64::new(re[(i, j)], im[(i, j)])
        }))
    }
}
