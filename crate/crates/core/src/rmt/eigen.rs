use super::hermitian::HermitianMatrix;
use super::linalg::{frobenius, CMatrix};
use crate::error::{Error, Result};
use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;
const OFF_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: CMatrix,
    pub sweeps: usize,
}

impl EigenDecomposition {
    /// `V·f(Λ)·V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let s = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= s;
            }
        }
        super::linalg::cmul(&scaled, &self.vectors.adjoint())
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| x)
    }

    /// `‖A − VΛV*‖_F`.
    pub fn residual(&self, a: &HermitianMatrix) -> f64 {
        frobenius(&(a.matrix() - self.reconstruct()))
    }

    /// `‖V*V − I‖_F`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.values.len();
        let g = super::linalg::cmul(&self.vectors.adjoint(), &self.vectors);
        frobenius(&(g - CMatrix::identity(n, n)))
    }
}

/// Cyclic complex Jacobi. Each rotation removes the phase of `a_pq` with
/// `diag(1, e^{-iφ})` and then zeroes it with a real Givens rotation.
///
/// Pairs are visited in round-robin order: every round rotates `⌊N/2⌋`
/// disjoint pairs at once, so the left and right updates each become a single
/// column-major pass. A sweep is `N − 1` rounds and covers every pair once.
pub fn hermitian_eigen(a: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = a.dim();
    // Real and imaginary parts in separate column-major arrays so that the
    // rotation loops vectorize.
    let mut m = Split::from_complex(a.matrix().as_slice());
    let mut v = Split::zeros(n * n);
    for i in 0..n {
        v.re[i + i * n] = 1.0;
    }
    let fro = frobenius(a.matrix());
    let target = OFF_TOL * fro;
    let skip = 1e-3 * target / (n.max(1) as f64);

    let off = |m: &Split| -> f64 {
        let mut s = 0.0;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    let k = i + j * n;
                    s += m.re[k] * m.re[k] + m.im[k] * m.im[k];
                }
            }
        }
        s.sqrt()
    };

    let players = n + n % 2;
    let mut rots: Vec<Rotation> = Vec::with_capacity(players / 2);
    let mut sweeps = 0;
    loop {
        if off(&m) <= target {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "Jacobi did not converge in {MAX_SWEEPS} sweeps (N = {n})"
            )));
        }
        sweeps += 1;
        for round in 0..players.saturating_sub(1) {
            rots.clear();
            for i in 0..players / 2 {
                let (x, y) = (seat(i, round, players), seat(players - 1 - i, round, players));
                let (p, q) = (x.min(y), x.max(y));
                if q >= n {
                    continue;
                }
                let apq = Complex64::new(m.re[p + q * n], m.im[p + q * n]);
                let r = apq.norm();
                if r <= skip {
                    continue;
                }
                let app = m.re[p + p * n];
                let aqq = m.re[q + q * n];
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let e = (apq / r).conj();
                rots.push(Rotation { p, q, c: cs, s: t * cs, er: e.re, ei: e.im, dp: app - t * r, dq: aqq + t * r });
            }
            for rot in &rots {
                rotate_columns(&mut m, n, rot);
                rotate_columns(&mut v, n, rot);
            }
            // Left multiplication by J*: rows p, q of every column.
            for (cre, cim) in m.re.chunks_exact_mut(n).zip(m.im.chunks_exact_mut(n)) {
                for rot in &rots {
                    let (ar, ai) = (cre[rot.p], cim[rot.p]);
                    let (qr, qi) = (cre[rot.q], cim[rot.q]);
                    // b = x_q·conj(e)
                    let br = qr * rot.er + qi * rot.ei;
                    let bi = qi * rot.er - qr * rot.ei;
                    cre[rot.p] = ar * rot.c - br * rot.s;
                    cim[rot.p] = ai * rot.c - bi * rot.s;
                    cre[rot.q] = ar * rot.s + br * rot.c;
                    cim[rot.q] = ai * rot.s + bi * rot.c;
                }
            }
            for rot in &rots {
                let (p, q) = (rot.p, rot.q);
                m.re[p + p * n] = rot.dp;
                m.re[q + q * n] = rot.dq;
                for k in [p + p * n, q + q * n, p + q * n, q + p * n] {
                    m.im[k] = 0.0;
                }
                m.re[p + q * n] = 0.0;
                m.re[q + p * n] = 0.0;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.re[i + i * n]).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| {
        let k = i + order[j] * n;
        Complex64::new(v.re[k], v.im[k])
    });
    Ok(EigenDecomposition { values, vectors, sweeps })
}

struct Split {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Split {
    fn zeros(len: usize) -> Self {
        Self { re: vec![0.0; len], im: vec![0.0; len] }
    }

    fn from_complex(z: &[Complex64]) -> Self {
        Self { re: z.iter().map(|w| w.re).collect(), im: z.iter().map(|w| w.im).collect() }
    }
}

struct Rotation {
    p: usize,
    q: usize,
    c: f64,
    s: f64,
    /// `e^{-iφ}` where `φ = arg a_pq`.
    er: f64,
    ei: f64,
    dp: f64,
    dq: f64,
}

/// Player at table position `pos` in round `round` of a circle-method
/// tournament: position 0 is fixed, the rest rotate.
fn seat(pos: usize, round: usize, players: usize) -> usize {
    if pos == 0 {
        0
    } else {
        1 + (pos - 1 + round) % (players - 1)
    }
}

/// `X ← X·J` on columns `p, q`, with `J = [[c, s], [−s·e, c·e]]`.
#[inline]
fn rotate_columns(x: &mut Split, n: usize, rot: &Rotation) {
    let (pr, qr) = column_pair(&mut x.re, n, rot.p, rot.q);
    let (pi, qi) = column_pair(&mut x.im, n, rot.p, rot.q);
    let (c, s, er, ei) = (rot.c, rot.s, rot.er, rot.ei);
    for ((xpr, xqr), (xpi, xqi)) in pr.iter_mut().zip(qr.iter_mut()).zip(pi.iter_mut().zip(qi.iter_mut())) {
        let (ar, ai) = (*xpr, *xpi);
        let br = *xqr * er - *xqi * ei;
        let bi = *xqr * ei + *xqi * er;
        *xpr = ar * c - br * s;
        *xpi = ai * c - bi * s;
        *xqr = ar * s + br * c;
        *xqi = ai * s + bi * c;
    }
}

fn column_pair(x: &mut [f64], n: usize, p: usize, q: usize) -> (&mut [f64], &mut [f64]) {
    let (lo, hi) = x.split_at_mut(q * n);
    (&mut lo[p * n..p * n + n], &mut hi[..n])
}
