//! Dense complex matrix helpers on top of `nalgebra`.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Product of two complex matrices via four real GEMMs, which lets the
/// vectorized real kernel do the work.
pub fn cmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions differ");
    if a.nrows() * a.ncols() * b.ncols() < 32 * 32 * 32 {
        return a * b;
    }
    let (ar, ai) = (a.map(|z| z.re), a.map(|z| z.im));
    let (br, bi) = (b.map(|z| z.re), b.map(|z| z.im));
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    CMatrix::from_fn(a.nrows(), b.ncols(), |i, j| c(re[(i, j)], im[(i, j)]))
}

/// `a* b`.
pub fn cmul_adj_left(a: &CMatrix, b: &CMatrix) -> CMatrix {
    cmul(&a.adjoint(), b)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalized trace `(1/N)·Tr`.
pub fn ntrace(a: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut t = c(0.0, 0.0);
    for i in 0..n {
        t += a[(i, i)];
    }
    t / n as f64
}

/// `‖a‖₂ = √τ(a*a)` with the normalized trace.
pub fn norm2(a: &CMatrix) -> f64 {
    frobenius(a) / (a.nrows() as f64).sqrt()
}

/// `Tr(a·b)` without forming the product.
pub fn trace_of_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut t = c(0.0, 0.0);
    for i in 0..n {
        for k in 0..a.ncols() {
            t += a[(i, k)] * b[(k, i)];
        }
    }
    t
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_product_matches_direct() {
        let a = CMatrix::from_fn(40, 37, |i, j| c((i * 3 + j) as f64 * 0.01, (i as f64 - j as f64) * 0.02));
        let b = CMatrix::from_fn(37, 45, |i, j| c(((i * j) % 7) as f64, 0.5 - (i + j) as f64 * 0.01));
        let d = &a * &b;
        assert!(frobenius(&(cmul(&a, &b) - d)) < 1e-10);
    }

    #[test]
    fn traces() {
        let a = CMatrix::from_fn(3, 3, |i, j| c(i as f64, j as f64));
        let b = CMatrix::from_fn(3, 3, |i, j| c(1.0, (i * j) as f64));
        let direct = (&a * &b).trace();
        assert!((trace_of_product(&a, &b) - direct).norm() < 1e-12);
        assert!((ntrace(&identity(5)) - c(1.0, 0.0)).norm() < 1e-15);
    }
}
