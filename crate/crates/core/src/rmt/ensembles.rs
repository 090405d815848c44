use super::hermitian::HermitianMatrix;
use super::linalg::{c, CMatrix};
use crate::error::{domain, Error, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

fn check(n: usize, v: f64) -> Result<()> {
    if n == 0 {
        return domain("matrix dimension must be at least 1");
    }
    if !(v > 0.0 && v.is_finite()) {
        return domain(format!("variance must be positive and finite, got {v}"));
    }
    Ok(())
}

/// Complex Gaussian with `E|z|² = var`.
fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, var: f64) -> Complex64 {
    let s = (var / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(s * re, s * im)
}

/// GUE with `E|h_ij|² = v/N`, so `E τ(H²) = v`.
pub fn sample_gue<R: Rng + ?Sized>(n: usize, v: f64, rng: &mut R) -> Result<HermitianMatrix> {
    check(n, v)?;
    let var = v / n as f64;
    Ok(HermitianMatrix::from_upper(n, |i, j| {
        if i == j {
            let x: f64 = rng.sample(StandardNormal);
            c(var.sqrt() * x, 0.0)
        } else {
            complex_gaussian(rng, var)
        }
    }))
}

/// Ginibre with i.i.d. entries, `E|c_ij|² = v/N`.
pub fn sample_ginibre<R: Rng + ?Sized>(n: usize, v: f64, rng: &mut R) -> Result<CMatrix> {
    check(n, v)?;
    let var = v / n as f64;
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] = complex_gaussian(rng, var);
        }
    }
    Ok(m)
}

const PANEL: usize = 32;

/// Haar unitary: the Q factor of a Ginibre matrix with `R`'s diagonal made
/// positive. Computed by block Gram–Schmidt with one reorthogonalization
/// pass (which yields exactly that normalization); panels are projected with
/// real GEMMs on split real/imaginary parts.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CMatrix> {
    let g = sample_ginibre(n, 1.0, rng)?;
    let mut re = g.map(|z| z.re);
    let mut im = g.map(|z| z.im);
    let mut j0 = 0;
    while j0 < n {
        let b = PANEL.min(n - j0);
        if j0 > 0 {
            let mut vr = re.columns(j0, b).clone_owned();
            let mut vi = im.columns(j0, b).clone_owned();
            // owned operands keep nalgebra on its blocked GEMM path
            let (qr, qi) = (re.columns(0, j0).clone_owned(), im.columns(0, j0).clone_owned());
            let (qrt, qit) = (qr.transpose(), qi.transpose());
            for _ in 0..2 {
                let cr = &qrt * &vr + &qit * &vi;
                let ci = &qrt * &vi - &qit * &vr;
                vr -= &qr * &cr - &qi * &ci;
                vi -= &qr * &ci + &qi * &cr;
            }
            re.columns_mut(j0, b).copy_from(&vr);
            im.columns_mut(j0, b).copy_from(&vi);
        }
        orthonormalize_panel(re.as_mut_slice(), im.as_mut_slice(), n, j0, b)?;
        j0 += b;
    }
    Ok(CMatrix::from_fn(n, n, |i, j| c(re[(i, j)], im[(i, j)])))
}

/// `⟨q, v⟩ = Σ conj(q_l)·v_l` with lane-split accumulators so the loop
/// vectorizes.
fn inner(qr: &[f64], qi: &[f64], vr: &[f64], vi: &[f64]) -> (f64, f64) {
    const L: usize = 4;
    let (mut ar, mut ai) = ([0.0; L], [0.0; L]);
    let chunks = qr.len() / L * L;
    for base in (0..chunks).step_by(L) {
        for k in 0..L {
            let l = base + k;
            ar[k] += qr[l] * vr[l] + qi[l] * vi[l];
            ai[k] += qr[l] * vi[l] - qi[l] * vr[l];
        }
    }
    let (mut pr, mut pi) = (ar.iter().sum::<f64>(), ai.iter().sum::<f64>());
    for l in chunks..qr.len() {
        pr += qr[l] * vr[l] + qi[l] * vi[l];
        pi += qr[l] * vi[l] - qi[l] * vr[l];
    }
    (pr, pi)
}

/// Modified Gram–Schmidt, applied twice, on columns `j0..j0+b` of a
/// column-major `n×n` split matrix whose first `j0` columns are orthonormal
/// and already projected out.
fn orthonormalize_panel(re: &mut [f64], im: &mut [f64], n: usize, j0: usize, b: usize) -> Result<()> {
    for j in j0..j0 + b {
        let (done_re, rest_re) = re.split_at_mut(j * n);
        let (done_im, rest_im) = im.split_at_mut(j * n);
        let (vr, vi) = (&mut rest_re[..n], &mut rest_im[..n]);
        for _ in 0..2 {
            for i in j0..j {
                let (qr, qi) = (&done_re[i * n..(i + 1) * n], &done_im[i * n..(i + 1) * n]);
                let (pr, pi) = inner(qr, qi, vr, vi);
                for l in 0..n {
                    vr[l] -= pr * qr[l] - pi * qi[l];
                    vi[l] -= pr * qi[l] + pi * qr[l];
                }
            }
        }
        let norm = vr.iter().chain(vi.iter()).map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 1e-10) {
            return Err(Error::Numeric("Ginibre draw is numerically rank deficient".into()));
        }
        vr.iter_mut().chain(vi.iter_mut()).for_each(|x| *x /= norm);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::linalg::{cmul, frobenius, ntrace};
    use crate::rmt::RngStream;

    fn moment(h: &HermitianMatrix, p: u32) -> f64 {
        let m = h.matrix();
        let mut acc = m.clone();
        for _ in 1..p {
            acc = cmul(&acc, m);
        }
        ntrace(&acc).re
    }

    #[test]
    fn gue_scalar_case() {
        let h = sample_gue(1, 3.0, &mut RngStream::new(0, 0)).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.entry(0, 0).im, 0.0);
    }

    #[test]
    fn gue_moments_at_256() {
        let h = sample_gue(256, 1.0, &mut RngStream::new(11, 0)).unwrap();
        assert!((moment(&h, 2) - 1.0).abs() <= 0.05);
        assert!((moment(&h, 4) - 2.0).abs() <= 0.15);
        assert!((moment(&h, 6) - 5.0).abs() <= 10.0 * 36.0 / 256.0);
    }

    #[test]
    fn ginibre_concentration() {
        let m = sample_ginibre(256, 1.0, &mut RngStream::new(12, 0)).unwrap();
        let cc = cmul(&m, &m.adjoint());
        assert!((ntrace(&cc).re - 1.0).abs() <= 0.05);
        assert!(ntrace(&m).norm() <= 0.1);
    }

    #[test]
    fn scalar_variances() {
        let mut rng = RngStream::new(13, 0);
        let trials = 20_000;
        let (mut g2, mut c2) = (0.0, 0.0);
        for _ in 0..trials {
            g2 += sample_gue(1, 2.0, &mut rng).unwrap().entry(0, 0).norm_sqr();
            c2 += sample_ginibre(1, 2.0, &mut rng).unwrap()[(0, 0)].norm_sqr();
        }
        assert!((g2 / trials as f64 - 2.0).abs() < 0.1);
        assert!((c2 / trials as f64 - 2.0).abs() < 0.1);
    }

    #[test]
    fn haar_is_normalized_qr_factor() {
        // Q*G must be upper triangular with a positive real diagonal
        let n = 100;
        let u = haar_unitary(n, &mut RngStream::new(3, 1)).unwrap();
        let g = sample_ginibre(n, 1.0, &mut RngStream::new(3, 1)).unwrap();
        let r = cmul(&u.adjoint(), &g);
        let scale = frobenius(&g);
        for j in 0..n {
            assert!(r[(j, j)].re > 0.0 && r[(j, j)].im.abs() <= 1e-12 * scale);
            for i in j + 1..n {
                assert!(r[(i, j)].norm() <= 1e-12 * scale, "({i},{j})");
            }
        }
        let defect = frobenius(&(cmul(&u.adjoint(), &u) - CMatrix::identity(n, n)));
        assert!(defect <= 1e-12 * n as f64);
    }

    #[test]
    fn haar_is_unitary() {
        let u = haar_unitary(32, &mut RngStream::new(14, 0)).unwrap();
        let g = cmul(&u.adjoint(), &u);
        assert!(frobenius(&(g - CMatrix::identity(32, 32))) < 1e-12);
    }

    #[test]
    fn haar_first_moment_vanishes() {
        // E Tr(U) = 0 and E|Tr U|² = 1 for Haar unitaries.
        let mut rng = RngStream::new(15, 0);
        let trials = 400;
        let mut s2 = 0.0;
        for _ in 0..trials {
            let u = haar_unitary(8, &mut rng).unwrap();
            s2 += u.trace().norm_sqr();
        }
        assert!((s2 / trials as f64 - 1.0).abs() < 0.25);
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut rng = RngStream::new(0, 0);
        assert!(sample_gue(0, 1.0, &mut rng).is_err());
        assert!(sample_ginibre(3, 0.0, &mut rng).is_err());
    }

    #[test]
    fn deterministic() {
        let a = sample_gue(16, 1.0, &mut RngStream::new(5, 2)).unwrap();
        let b = sample_gue(16, 1.0, &mut RngStream::new(5, 2)).unwrap();
        assert_eq!(a, b);
    }
}
