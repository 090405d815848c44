use super::linalg::CMatrix;
use crate::error::{domain, Result};
use num_complex::Complex64;

/// Dense complex Hermitian matrix. Constructors write both triangles from one
/// source, so `entry(i,j) == conj(entry(j,i))` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: CMatrix,
}

impl HermitianMatrix {
    /// Builds from the upper triangle (`i <= j`); diagonal imaginary parts are dropped.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = CMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..=j {
                let z = f(i, j);
                if i == j {
                    data[(i, i)] = Complex64::new(z.re, 0.0);
                } else {
                    data[(i, j)] = z;
                    data[(j, i)] = z.conj();
                }
            }
        }
        Self { data }
    }

    /// Accepts `m` if it is Hermitian within `tol` (absolute, entrywise), then
    /// symmetrizes it exactly.
    pub fn try_from_matrix(m: &CMatrix, tol: f64) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return domain(format!("matrix is {}x{}, not square", m.nrows(), m.ncols()));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in i..n {
                if (m[(i, j)] - m[(j, i)].conj()).norm() > tol {
                    return domain(format!("matrix is not Hermitian at ({i},{j})"));
                }
            }
        }
        Ok(Self::symmetrize(m))
    }

    /// The Hermitian part `(m + m*)/2`.
    pub fn symmetrize(m: &CMatrix) -> Self {
        Self::from_upper(m.nrows(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self::from_upper(values.len(), |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }
}
