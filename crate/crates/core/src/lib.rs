//! A computational free-probability laboratory.
//!
//! The crate is split into independent modules:
//!
//! * [`scdist`]: semicircle and quarter-circle laws (density, moments, CDF, quantile, sampling).
//! * [`wick`]: an exact rational moment engine for free semicircular/circular families,
//!   symbolic matrices over the free algebra, and exact freeness checks.
//! * [`rmt`]: finite-N random matrix models, a complex Jacobi eigensolver, polar
//!   decomposition, conditional expectations and the associated Monte Carlo experiments.
//! * [`perturb`]: the perturbed quantile function of a semicircular element and its
//!   Fourier analysis.
//! * [`fgroup`]: reduced words in free groups, the group algebra, and the
//!   ending/starting decompositions with their norms.
//! * [`commands`]: the batch harness shared by the CLI and the C ABI.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod fgroup;
pub mod perturb;
pub mod quad;
pub mod report;
pub mod rmt;
pub mod scdist;
pub mod wick;

pub use error::{Error, Result};

/// The n-th Catalan number, `binom(2n, n) / (n + 1)`.
///
/// # Panics
/// If the value does not fit in a `u64` (`n > 36`).
pub fn catalan(n: u32) -> u64 {
    let mut c: u128 = 1;
    for i in 0..n as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    u64::try_from(c).unwrap_or_else(|_| panic!("Catalan({n}) overflows u64"))
}
