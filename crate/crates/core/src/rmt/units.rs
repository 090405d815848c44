use super::eigen::hermitian_eigen;
use super::hermitian::HermitianMatrix;
use super::linalg::{c, cmul, frobenius, ntrace, CMatrix};
use crate::error::{domain, Result};

/// A `k×k` system of matrix units in `M_N` built from an orthonormal frame.
///
/// With `m = N/k` and `W_i` the `i`-th group of `m` frame columns,
/// `f_ij = W_i·W_j*`. Units are materialized on demand; operations on the
/// generated subalgebra work on the frame directly.
#[derive(Debug, Clone)]
pub struct MatrixUnits {
    k: usize,
    frame: CMatrix,
}

impl MatrixUnits {
    pub fn from_frame(frame: CMatrix, k: usize) -> Result<Self> {
        let n = frame.nrows();
        if frame.ncols() != n {
            return domain("frame must be square");
        }
        if k == 0 || !n.is_multiple_of(k) {
            return domain(format!("k = {k} does not divide N = {n}"));
        }
        Ok(Self { k, frame })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.frame.nrows()
    }

    fn block_size(&self) -> usize {
        self.dim() / self.k
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    fn columns(&self, i: usize) -> CMatrix {
        let m = self.block_size();
        self.frame.columns(i * m, m).into_owned()
    }

    /// `f_ij`.
    pub fn unit(&self, i: usize, j: usize) -> CMatrix {
        cmul(&self.columns(i), &self.columns(j).adjoint())
    }

    /// All `k²` units, row-major.
    pub fn materialize(&self) -> Vec<Vec<CMatrix>> {
        (0..self.k).map(|i| (0..self.k).map(|j| self.unit(i, j)).collect()).collect()
    }

    /// Largest Frobenius defect over the matrix-unit relations:
    /// `f_ij f_pq = δ_jp f_iq`, `f_ij* = f_ji`, `Σ f_ii = I`, `τ(f_ii) = 1/k`.
    pub fn relation_defects(&self) -> UnitDefects {
        let k = self.k;
        let n = self.dim();
        let f = self.materialize();
        let mut product: f64 = 0.0;
        let mut adjoint: f64 = 0.0;
        let mut trace: f64 = 0.0;
        let mut sum = CMatrix::zeros(n, n);
        for i in 0..k {
            sum += &f[i][i];
            trace = trace.max((ntrace(&f[i][i]) - c(1.0 / k as f64, 0.0)).norm());
            for j in 0..k {
                adjoint = adjoint.max(frobenius(&(f[i][j].adjoint() - &f[j][i])));
                for p in 0..k {
                    for q in 0..k {
                        let lhs = cmul(&f[i][j], &f[p][q]);
                        let d = if j == p { frobenius(&(lhs - &f[i][q])) } else { frobenius(&lhs) };
                        product = product.max(d);
                    }
                }
            }
        }
        UnitDefects {
            product,
            adjoint,
            partition: frobenius(&(sum - CMatrix::identity(n, n))),
            trace,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitDefects {
    pub product: f64,
    pub adjoint: f64,
    pub partition: f64,
    pub trace: f64,
}

impl UnitDefects {
    pub fn max(&self) -> f64 {
        self.product.max(self.adjoint).max(self.partition)
    }
}

/// Matrix units whose diagonal projections are the spectral projections of
/// `a` onto consecutive groups of `N/k` eigenvectors (ascending eigenvalues).
pub fn build_ik_factor(a: &HermitianMatrix, k: usize) -> Result<MatrixUnits> {
    if k == 0 || !a.dim().is_multiple_of(k) {
        return domain(format!("k = {k} does not divide N = {}", a.dim()));
    }
    MatrixUnits::from_frame(hermitian_eigen(a)?.vectors, k)
}

/// `k×k` coefficient matrix `T_ij = k·τ(f_ji·b)` of `E(b) = Σ T_ij f_ij`.
pub fn ik_coefficients(b: &CMatrix, units: &MatrixUnits) -> Result<CMatrix> {
    let n = units.dim();
    if b.nrows() != n || b.ncols() != n {
        return domain("operand dimension does not match the matrix units");
    }
    let k = units.k;
    let m = units.block_size();
    let bw = cmul(&units.frame.adjoint(), &cmul(b, &units.frame));
    Ok(CMatrix::from_fn(k, k, |i, j| {
        let mut t = c(0.0, 0.0);
        for l in 0..m {
            t += bw[(i * m + l, j * m + l)];
        }
        t / m as f64
    }))
}

/// Trace-preserving conditional expectation onto the span of the `f_ij`.
pub fn conditional_expectation_onto_ik(b: &HermitianMatrix, units: &MatrixUnits) -> Result<HermitianMatrix> {
    let t = ik_coefficients(b.matrix(), units)?;
    Ok(HermitianMatrix::symmetrize(&expand(&t, units)))
}

/// `Σ T_ij f_ij = W (T ⊗ I_m) W*`.
fn expand(t: &CMatrix, units: &MatrixUnits) -> CMatrix {
    let (k, m, n) = (units.k, units.block_size(), units.dim());
    let w = &units.frame;
    let mut y = CMatrix::zeros(n, n);
    for j in 0..k {
        for i in 0..k {
            let tij = t[(i, j)];
            if tij == c(0.0, 0.0) {
                continue;
            }
            for l in 0..m {
                for r in 0..n {
                    y[(r, j * m + l)] += w[(r, i * m + l)] * tij;
                }
            }
        }
    }
    cmul(&y, &w.adjoint())
}
