use super::ensembles::{haar_unitary, sample_ginibre, sample_gue};
use super::eigen::hermitian_eigen;
use super::hermitian::HermitianMatrix;
use super::linalg::{c, cmul, frobenius, CMatrix};
use super::polar::polar_decompose;
use crate::error::{domain, resource, Result};
use crate::wick::EntryModel;
use num_complex::Complex64;
use rand::Rng;

pub const MAX_INNER: usize = 512;
pub const MAX_TOTAL: usize = 2048;

/// `B = Σ b_ij ⊗ e_ij` stored as one `(nN)×(nN)` matrix; block `(i,j)` occupies
/// rows `iN..(i+1)N` and columns `jN..(j+1)N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    n: usize,
    inner: usize,
    data: CMatrix,
}

pub(crate) fn guard(n: usize, inner: usize) -> Result<()> {
    if inner > MAX_INNER || n * inner > MAX_TOTAL {
        return resource(format!(
            "block model n={n}, N={inner} exceeds N <= {MAX_INNER}, nN <= {MAX_TOTAL}"
        ));
    }
    Ok(())
}

impl BlockMatrix {
    pub fn zeros(n: usize, inner: usize) -> Self {
        Self { n, inner, data: CMatrix::zeros(n * inner, n * inner) }
    }

    pub fn from_blocks(n: usize, inner: usize, mut f: impl FnMut(usize, usize) -> CMatrix) -> Result<Self> {
        let mut b = Self::zeros(n, inner);
        for i in 0..n {
            for j in 0..n {
                b.set_block(i, j, &f(i, j))?;
            }
        }
        Ok(b)
    }

    /// `I_N ⊗ M₀`.
    pub fn lift_scalar(m0: &CMatrix, inner: usize) -> Self {
        let n = m0.nrows();
        let mut b = Self::zeros(n, inner);
        for i in 0..n {
            for j in 0..n {
                for k in 0..inner {
                    b.data[(i * inner + k, j * inner + k)] = m0[(i, j)];
                }
            }
        }
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn inner(&self) -> usize {
        self.inner
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        let m = self.inner;
        self.data.view((i * m, j * m), (m, m)).into_owned()
    }

    pub fn set_block(&mut self, i: usize, j: usize, x: &CMatrix) -> Result<()> {
        let m = self.inner;
        if x.nrows() != m || x.ncols() != m || i >= self.n || j >= self.n {
            return domain(format!("block ({i},{j}) of shape {}x{} does not fit", x.nrows(), x.ncols()));
        }
        self.data.view_mut((i * m, j * m), (m, m)).copy_from(x);
        Ok(())
    }

    pub fn is_selfadjoint(&self) -> bool {
        self.data == self.data.adjoint()
    }

    /// `τ_M(B^p)` with `τ_M = (1/(nN))·Tr`.
    pub fn normalized_trace(&self) -> Complex64 {
        super::linalg::ntrace(&self.data)
    }

    /// `U*BU` with `U = Σ u_i ⊗ e_ii`.
    pub fn conjugate_diag(&self, us: &[CMatrix]) -> Result<Self> {
        self.check_unitaries(us)?;
        Self::from_blocks(self.n, self.inner, |i, j| {
            cmul(&us[i].adjoint(), &cmul(&self.block(i, j), &us[j]))
        })
    }

    fn check_unitaries(&self, us: &[CMatrix]) -> Result<()> {
        if us.len() != self.n || us.iter().any(|u| u.nrows() != self.inner || u.ncols() != self.inner) {
            return domain("need one N x N unitary per diagonal block");
        }
        Ok(())
    }
}

/// Voiculescu block model with entry variance `1/n`: GUE diagonal blocks,
/// Ginibre off-diagonal blocks, and in the quarter-column model `|GUE|`
/// blocks in the last column above the diagonal.
pub fn build_voiculescu_blocks<R: Rng + ?Sized>(
    n: usize,
    inner: usize,
    model: EntryModel,
    rng: &mut R,
) -> Result<BlockMatrix> {
    if n < 2 || inner < 2 {
        return domain(format!("block model needs n >= 2 and N >= 2, got n={n}, N={inner}"));
    }
    guard(n, inner)?;
    let v = 1.0 / n as f64;
    let mut b = BlockMatrix::zeros(n, inner);
    for i in 0..n {
        for j in i..n {
            let x = if i == j {
                sample_gue(inner, v, rng)?.into_matrix()
            } else if j == n - 1 && model == EntryModel::QuarterColumn {
                let h = sample_gue(inner, v, rng)?;
                HermitianMatrix::symmetrize(&hermitian_eigen(&h)?.apply(f64::abs)).into_matrix()
            } else {
                sample_ginibre(inner, v, rng)?
            };
            b.set_block(i, j, &x)?;
            if i != j {
                b.set_block(j, i, &x.adjoint())?;
            }
        }
    }
    Ok(b)
}

/// `E_n(B)`: the `n×n` matrix of normalized block traces `τ_N(b_ij)`.
pub fn conditional_expectation_en(b: &BlockMatrix) -> CMatrix {
    let (n, m) = (b.n, b.inner);
    CMatrix::from_fn(n, n, |i, j| {
        let mut t = c(0.0, 0.0);
        for k in 0..m {
            t += b.data[(i * m + k, j * m + k)];
        }
        t / m as f64
    })
}

/// `‖E_n(B)‖₂` through the block traces: `√((1/n)Σ|τ_N(b_ij)|²)`.
pub fn en_norm(e: &CMatrix) -> f64 {
    frobenius(e) / (e.nrows() as f64).sqrt()
}

/// `E_n(U*BU)` without forming the conjugate.
pub fn en_of_conjugate(b: &BlockMatrix, us: &[CMatrix]) -> Result<CMatrix> {
    b.check_unitaries(us)?;
    let n = b.n;
    let mut e = CMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let mj = cmul(&b.block(i, j), &us[j]);
            e[(i, j)] = tau_adj(&us[i], &mj);
        }
    }
    Ok(e)
}

/// `τ(u*·m)` as an elementwise sum.
fn tau_adj(u: &CMatrix, m: &CMatrix) -> Complex64 {
    let mut t = c(0.0, 0.0);
    for (a, b) in u.iter().zip(m.iter()) {
        t += a.conj() * b;
    }
    t / u.nrows() as f64
}

pub fn random_diagonal_unitaries<R: Rng + ?Sized>(n: usize, inner: usize, rng: &mut R) -> Result<Vec<CMatrix>> {
    (0..n).map(|_| haar_unitary(inner, rng)).collect()
}

#[derive(Debug, Clone)]
pub struct AdversarialResult {
    pub unitaries: Vec<CMatrix>,
    /// `‖E_n(U*BU)‖₂` at the final point.
    pub norm: f64,
    /// Norm after each step, starting with the initial point.
    pub history: Vec<f64>,
    pub accepted: usize,
}

/// Block-coordinate ascent of `Φ(u) = Σ_ij |τ(u_i* b_ij u_j)|²` over diagonal
/// unitaries, starting from Haar draws. One iteration updates one block:
/// with `c_j = τ(u_i* b_ij u_j)` the linearized objective is maximized by the
/// unitary polar factor of `G = Σ_{j≠i} conj(c_j)·b_ij·u_j`. Steps that do not
/// raise `Φ` are rejected.
pub fn adversarial_diag_search<R: Rng + ?Sized>(
    b: &BlockMatrix,
    iterations: usize,
    rng: &mut R,
) -> Result<AdversarialResult> {
    let start = random_diagonal_unitaries(b.n, b.inner, rng)?;
    adversarial_diag_search_from(b, start, iterations)
}

/// The same ascent from a given starting point.
pub fn adversarial_diag_search_from(
    b: &BlockMatrix,
    start: Vec<CMatrix>,
    iterations: usize,
) -> Result<AdversarialResult> {
    if iterations == 0 {
        return domain("adversarial search needs at least one iteration");
    }
    let n = b.n;
    let mut us = start;
    let mut z = en_of_conjugate(b, &us)?;
    let phi = |z: &CMatrix| z.iter().map(|w| w.norm_sqr()).sum::<f64>();
    let mut cur = phi(&z);
    let mut history = vec![(cur / n as f64).sqrt()];
    let mut accepted = 0;
    for it in 0..iterations {
        let i = it % n;
        let ms: Vec<Option<CMatrix>> = (0..n)
            .map(|j| (j != i).then(|| cmul(&b.block(i, j), &us[j])))
            .collect();
        let mut g = CMatrix::zeros(b.inner, b.inner);
        for (j, mj) in ms.iter().enumerate() {
            if let Some(mj) = mj {
                g += mj * z[(i, j)].conj();
            }
        }
        if frobenius(&g) > 0.0 {
            let cand = polar_decompose(&g)?.u;
            let mut z_new = z.clone();
            for (j, mj) in ms.iter().enumerate() {
                if let Some(mj) = mj {
                    let w = tau_adj(&cand, mj);
                    z_new[(i, j)] = w;
                    z_new[(j, i)] = w.conj();
                }
            }
            let val = phi(&z_new);
            if val > cur {
                cur = val;
                z = z_new;
                us[i] = cand;
                accepted += 1;
            }
        }
        history.push((cur / n as f64).sqrt());
    }
    Ok(AdversarialResult { unitaries: us, norm: (cur / n as f64).sqrt(), history, accepted })
}
