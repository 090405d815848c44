//! Exact moment engine for free families of semicircular and circular
//! generators.
//!
//! Moments of words are evaluated by the free Wick formula (sum over
//! non-crossing pairings of pairwise covariances) in exact rational
//! arithmetic. Matrices over the free algebra model `N ⊗ M_n` with the
//! canonical trace `τ_M = (1/n)·Σ τ(a_ii)`.

mod algebra;
mod claims;
mod freeness;
mod matrix;
mod pairing;

pub use algebra::{
    alg_trace, covariance, format_rational, rat, wick_moment, AlgElement, AlgWord, Coefficient, GaussianRational,
    GeneratorKind, GeneratorLabel, LabelAllocator, Letter, Rational,
};
pub use claims::{prop31_claims, ClaimItem, ClaimReport, MAX_CLAIM_ORDER};
pub use freeness::{
    check_freeness, corollary32_check, standard_families, CorollaryReport, EntryFreeness, Family, FreenessReport,
    Violation, MAX_COROLLARY_DEGREE, MAX_FREENESS_DEGREE,
};
pub use matrix::{build_voiculescu_symbolic, build_voiculescu_symbolic_with, matrix_trace, EntryModel, SymbolicMatrix};
pub use pairing::{enumerate_nc_pairings, NCPairing, MAX_PAIRING_SIZE};
