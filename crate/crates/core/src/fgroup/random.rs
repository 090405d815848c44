use super::element::{gaussian_to_complex, GroupAlgElement};
use super::element::brute_force_trace;
use super::split::{compute_i123, verify_lemma43, y_element, TraceSplitReport, YCoeffs};
use super::word::FGWord;
use crate::error::{domain, Result};
use crate::rmt::RngStream;
use crate::wick::{GaussianRational, Rational};
use num_bigint::BigInt;
use num_complex::Complex;
use rand::Rng;
use serde::Serialize;

/// Reduced word with at most 4 syllables over `gens` generators and
/// exponents in `[−max_exp, max_exp]`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, gens: u32, max_exp: i32) -> FGWord {
    let len = rng.random_range(0..=4);
    let mut syl = Vec::with_capacity(len);
    let mut prev = None;
    for _ in 0..len {
        let mut g = rng.random_range(0..gens);
        if gens > 1 {
            while Some(g) == prev {
                g = rng.random_range(0..gens);
            }
        } else if prev.is_some() {
            break;
        }
        let mut e = rng.random_range(1..=max_exp);
        if rng.random::<bool>() {
            e = -e;
        }
        syl.push((g, e));
        prev = Some(g);
    }
    FGWord::from_syllables(syl)
}

fn random_gaussian<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    let mut q = || Rational::new(BigInt::from(rng.random_range(-6i64..=6)), BigInt::from(rng.random_range(1i64..=4)));
    Complex::new(q(), q())
}

/// Up to `max_words` terms with Gaussian-rational coefficients.
pub fn random_element_exact<R: Rng + ?Sized>(rng: &mut R, max_words: usize, gens: u32, max_exp: i32) -> GroupAlgElement<GaussianRational> {
    let count = rng.random_range(1..=max_words);
    GroupAlgElement::from_terms((0..count).map(|_| (random_word(rng, gens, max_exp), random_gaussian(rng))))
}

pub fn random_element<R: Rng + ?Sized>(rng: &mut R, max_words: usize, gens: u32, max_exp: i32) -> GroupAlgElement {
    random_element_exact(rng, max_words, gens, max_exp).map(gaussian_to_complex)
}

/// `y_k` for a few nonzero `k` with `|k| ≤ max_k`.
pub fn random_y_exact<R: Rng + ?Sized>(rng: &mut R, max_k: i32) -> YCoeffs<GaussianRational> {
    let count = rng.random_range(0..=4);
    let mut y = YCoeffs::new();
    for _ in 0..count {
        let mut k = rng.random_range(1..=max_k);
        if rng.random::<bool>() {
            k = -k;
        }
        y.insert(k, random_gaussian(rng));
    }
    y
}

#[derive(Debug, Clone, Serialize)]
pub struct FGroupTrial {
    pub trial: usize,
    pub words: (usize, usize),
    #[serde(flatten)]
    pub report: TraceSplitReport,
    /// `I₁+I₂+I₃` equals the brute-force trace in exact arithmetic.
    pub exact_identity: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FGroupRun {
    pub trials: usize,
    pub seed: u64,
    pub violations: usize,
    pub exact_mismatches: usize,
    pub results: Vec<FGroupTrial>,
    pub pass: bool,
}

/// Random sparse triples (≤ 20 words, 3 generators, exponents ≤ 3). Trial
/// `t` draws from `RngStream::new(seed, t)`.
pub fn fgroup_trials(trials: usize, seed: u64) -> Result<FGroupRun> {
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    let mut results = Vec::with_capacity(trials);
    for t in 0..trials {
        let mut rng = RngStream::new(seed, t as u64);
        let w1 = random_element_exact(&mut rng, 20, 3, 3);
        let w2 = random_element_exact(&mut rng, 20, 3, 3);
        let alpha = rng.random_range(0..3);
        let y = random_y_exact(&mut rng, 6);
        let exact = compute_i123(&w1, &w2, alpha, &y)?;
        let exact_identity = exact.total() == brute_force_trace(&w1, &y_element(alpha, &y), &w2);
        let yf: YCoeffs = y.iter().map(|(&k, c)| (k, gaussian_to_complex(c))).collect();
        let report = verify_lemma43(&w1.map(gaussian_to_complex), &w2.map(gaussian_to_complex), alpha, &yf)?;
        results.push(FGroupTrial { trial: t, words: (w1.len(), w2.len()), report, exact_identity });
    }
    let violations = results.iter().filter(|r| !r.report.pass).count();
    let exact_mismatches = results.iter().filter(|r| !r.exact_identity).count();
    Ok(FGroupRun { trials, seed, violations, exact_mismatches, pass: violations == 0 && exact_mismatches == 0, results })
}
