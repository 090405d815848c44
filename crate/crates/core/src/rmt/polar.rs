use super::eigen::hermitian_eigen;
use super::hermitian::HermitianMatrix;
use super::linalg::{c, cmul, frobenius, CMatrix};
use crate::error::{domain, Result};

const KERNEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct PolarDecomposition {
    pub u: CMatrix,
    pub h: HermitianMatrix,
    /// Smallest singular value of `C`.
    pub sigma_min: f64,
    /// Columns of `U` completed on the numerical kernel.
    pub kernel_dim: usize,
}

/// `C = U·H` with `H = √(C*C)` and `U` unitary.
pub fn polar_decompose(cm: &CMatrix) -> Result<PolarDecomposition> {
    let n = cm.nrows();
    if n != cm.ncols() {
        return domain("polar decomposition needs a square matrix");
    }
    let gram = HermitianMatrix::symmetrize(&cmul(&cm.adjoint(), cm));
    let eig = hermitian_eigen(&gram)?;
    let fro2 = frobenius(cm).powi(2);
    let cut = KERNEL_TOL * fro2;
    let sig: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    // Eigenvalues on the numerical kernel are rounding noise of size
    // eps·‖C‖²; their square roots would not be, so they are set to zero.
    let h = HermitianMatrix::symmetrize(&eig.apply(|l| if l > cut { l.sqrt() } else { 0.0 }));

    // U = Σ (C v_j / σ_j) v_j* on the range, completed on the kernel.
    let cv = cmul(cm, &eig.vectors);
    let mut w = CMatrix::zeros(n, n);
    let mut kernel = Vec::new();
    for j in 0..n {
        if eig.values[j] > cut && fro2 > 0.0 {
            let s = sig[j];
            for i in 0..n {
                w[(i, j)] = cv[(i, j)] / s;
            }
        } else {
            kernel.push(j);
        }
    }
    let mut done: Vec<usize> = (0..n).filter(|j| !kernel.contains(j)).collect();
    let mut candidate = 0;
    for &j in &kernel {
        loop {
            assert!(candidate < n, "Gram-Schmidt completion exhausted the basis");
            let mut x = CMatrix::zeros(n, 1);
            x[(candidate, 0)] = c(1.0, 0.0);
            candidate += 1;
            for _ in 0..2 {
                for &d in &done {
                    let mut dot = c(0.0, 0.0);
                    for i in 0..n {
                        dot += w[(i, d)].conj() * x[(i, 0)];
                    }
                    for i in 0..n {
                        x[(i, 0)] -= dot * w[(i, d)];
                    }
                }
            }
            let nx = frobenius(&x);
            if nx > 1e-3 {
                for i in 0..n {
                    w[(i, j)] = x[(i, 0)] / nx;
                }
                done.push(j);
                break;
            }
        }
    }
    let u = cmul(&w, &eig.vectors.adjoint());
    Ok(PolarDecomposition {
        u,
        h,
        sigma_min: sig.first().copied().unwrap_or(0.0),
        kernel_dim: kernel.len(),
    })
}

impl PolarDecomposition {
    /// `‖C − U·H‖_F`.
    pub fn residual(&self, cm: &CMatrix) -> f64 {
        frobenius(&(cm - cmul(&self.u, self.h.matrix())))
    }

    pub fn unitarity_defect(&self) -> f64 {
        let n = self.u.nrows();
        frobenius(&(cmul(&self.u.adjoint(), &self.u) - CMatrix::identity(n, n)))
    }
}
