//! Finite-N random matrix models: samplers, a Jacobi eigensolver, polar
//! decomposition, Voiculescu block matrices and conditional expectations.

mod blocks;
mod eigen;
mod ensembles;
mod experiments;
mod hermitian;
pub mod linalg;
mod polar;
mod rng;
mod units;

pub use blocks::*;
pub use eigen::*;
pub use ensembles::*;
pub use experiments::*;
pub use hermitian::HermitianMatrix;
pub use linalg::CMatrix;
pub use polar::*;
pub use rng::RngStream;
pub use units::*;
