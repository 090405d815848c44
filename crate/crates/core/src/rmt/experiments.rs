use super::blocks::{
    adversarial_diag_search, build_voiculescu_blocks, en_norm, en_of_conjugate, guard,
    random_diagonal_unitaries, BlockMatrix,
};
use super::eigen::hermitian_eigen;
use super::ensembles::sample_gue;
use super::hermitian::HermitianMatrix;
use super::linalg::{cmul, frobenius, norm2, ntrace, trace_of_product, CMatrix};
use super::polar::polar_decompose;
use super::rng::RngStream;
use super::units::{conditional_expectation_onto_ik, MatrixUnits};
use crate::error::{domain, Result};
use crate::scdist::{qc_moment, QuarterCircleLaw};
use crate::wick::EntryModel;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conjugation {
    None,
    RandomDiagonal,
    Adversarial,
}

impl FromStr for Conjugation {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "random-diagonal" | "random" => Ok(Self::RandomDiagonal),
            "adversarial" => Ok(Self::Adversarial),
            _ => domain(format!("unknown conjugation mode '{s}' (none, random-diagonal, adversarial)")),
        }
    }
}

impl fmt::Display for Conjugation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::RandomDiagonal => "random-diagonal",
            Self::Adversarial => "adversarial",
        })
    }
}

/// `7/n^{1/8}`.
pub fn en_bound(n: usize) -> f64 {
    7.0 / (n as f64).powf(0.125)
}

#[derive(Debug, Clone, Serialize)]
pub struct EnNormOptions {
    pub n: usize,
    #[serde(rename = "N")]
    pub inner: usize,
    pub trials: usize,
    pub conjugation: Conjugation,
    pub model: EntryModel,
    /// Block updates per adversarial search.
    pub adversarial_iterations: usize,
}

impl EnNormOptions {
    pub fn new(n: usize, inner: usize, trials: usize, conjugation: Conjugation) -> Self {
        Self { n, inner, trials, conjugation, model: EntryModel::AllCircular, adversarial_iterations: 200 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnNormStats {
    pub options: EnNormOptions,
    pub seed: u64,
    pub values: Vec<f64>,
    pub mean: f64,
    pub max: f64,
    pub std_error: f64,
    pub bound: f64,
    /// `max²` against the squared form `49/n^{1/4}`.
    pub max_squared: f64,
    pub squared_bound: f64,
    pub pass: bool,
}

/// Samples `B`, conjugates it by diagonal unitaries per `conjugation`, and
/// records `‖E_n(U*BU)‖₂`. Trial `t` draws from `RngStream::new(seed, t)`.
pub fn estimate_en_norm(n: usize, inner: usize, trials: usize, conjugation: Conjugation, seed: u64) -> Result<EnNormStats> {
    estimate_en_norm_with(&EnNormOptions::new(n, inner, trials, conjugation), seed)
}

pub fn estimate_en_norm_with(opts: &EnNormOptions, seed: u64) -> Result<EnNormStats> {
    if opts.trials == 0 {
        return domain("trials must be at least 1");
    }
    let mut values = Vec::with_capacity(opts.trials);
    for t in 0..opts.trials {
        let mut rng = RngStream::new(seed, t as u64);
        let b = build_voiculescu_blocks(opts.n, opts.inner, opts.model, &mut rng)?;
        let value = match opts.conjugation {
            Conjugation::None => en_norm(&super::blocks::conditional_expectation_en(&b)),
            Conjugation::RandomDiagonal => {
                let us = random_diagonal_unitaries(opts.n, opts.inner, &mut rng)?;
                en_norm(&en_of_conjugate(&b, &us)?)
            }
            Conjugation::Adversarial => {
                if opts.adversarial_iterations == 0 {
                    return domain("adversarial search needs at least one iteration");
                }
                adversarial_diag_search(&b, opts.adversarial_iterations, &mut rng)?.norm
            }
        };
        values.push(value);
    }
    let (mean, std_error) = mean_and_error(&values);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let bound = en_bound(opts.n);
    let squared_bound = 49.0 / (opts.n as f64).powf(0.25);
    Ok(EnNormStats {
        options: opts.clone(),
        seed,
        mean,
        max,
        std_error,
        bound,
        max_squared: max * max,
        squared_bound,
        pass: max <= bound && max * max <= squared_bound,
        values,
    })
}

pub(crate) fn mean_and_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct MatDistRow {
    pub k: usize,
    /// Mean of `‖E_k(b)‖₂`.
    pub mean_ek_norm: f64,
    pub ek_norm_std_error: f64,
    /// Mean of `‖b − E_k(b)‖₂ / ‖b‖₂`.
    pub mean_ratio: f64,
    pub min_ratio: f64,
    /// Largest Pythagoras defect `|‖b‖² − ‖E(b)‖² − ‖b − E(b)‖²|` seen.
    pub pythagoras_defect: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatDistTable {
    #[serde(rename = "N")]
    pub inner: usize,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<MatDistRow>,
}

/// Finite-N matricial distance curve. Each trial draws independent GUE `a`
/// and `b` (variance 1), builds spectral matrix units from `a` for every `k`,
/// and measures how much of `b` the `k×k` algebra captures.
pub fn matdist_curve(inner: usize, ks: &[usize], trials: usize, seed: u64) -> Result<MatDistTable> {
    if trials == 0 {
        return domain("trials must be at least 1");
    }
    guard(1, inner)?;
    for &k in ks {
        if k == 0 || !inner.is_multiple_of(k) {
            return domain(format!("k = {k} does not divide N = {inner}"));
        }
    }
    let mut ek = vec![Vec::with_capacity(trials); ks.len()];
    let mut ratio = vec![Vec::with_capacity(trials); ks.len()];
    let mut defect = vec![0.0f64; ks.len()];
    for t in 0..trials {
        let mut rng = RngStream::new(seed, t as u64);
        let a = sample_gue(inner, 1.0, &mut rng)?;
        let b = sample_gue(inner, 1.0, &mut rng)?;
        let frame = hermitian_eigen(&a)?.vectors;
        let nb = norm2(b.matrix());
        for (idx, &k) in ks.iter().enumerate() {
            let units = MatrixUnits::from_frame(frame.clone(), k)?;
            let e = conditional_expectation_onto_ik(&b, &units)?;
            let ne = norm2(e.matrix());
            let nr = norm2(&(b.matrix() - e.matrix()));
            ek[idx].push(ne);
            ratio[idx].push(nr / nb);
            defect[idx] = defect[idx].max((nb * nb - ne * ne - nr * nr).abs());
        }
    }
    let rows = ks
        .iter()
        .enumerate()
        .map(|(idx, &k)| {
            let (mean_ek_norm, ek_norm_std_error) = mean_and_error(&ek[idx]);
            MatDistRow {
                k,
                mean_ek_norm,
                ek_norm_std_error,
                mean_ratio: mean_and_error(&ratio[idx]).0,
                min_ratio: ratio[idx].iter().cloned().fold(f64::INFINITY, f64::min),
                pythagoras_defect: defect[idx],
            }
        })
        .collect();
    Ok(MatDistTable { inner, trials, seed, rows })
}

/// Monte Carlo mean of `τ_M(B^m)` for `m = 1..=max_order` over the block
/// model. Trial `t` draws from `RngStream::new(seed, t)`.
pub fn block_moments(
    n: usize,
    inner: usize,
    model: EntryModel,
    max_order: u32,
    trials: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if trials == 0 || max_order == 0 {
        return domain("trials and max_order must be at least 1");
    }
    let half = max_order.div_ceil(2) as usize;
    let mut sums = vec![0.0; max_order as usize];
    for t in 0..trials {
        let b = build_voiculescu_blocks(n, inner, model, &mut RngStream::new(seed, t as u64))?;
        let dim = (n * inner) as f64;
        let mut powers = vec![b.matrix().clone()];
        for _ in 1..half {
            let next = cmul(powers.last().unwrap(), b.matrix());
            powers.push(next);
        }
        for m in 1..=max_order as usize {
            let value = if m == 1 {
                ntrace(&powers[0]).re
            } else {
                let lo = m / 2;
                trace_of_product(&powers[lo - 1], &powers[m - lo - 1]).re / dim
            };
            sums[m - 1] += value;
        }
    }
    Ok(sums.into_iter().map(|s| s / trials as f64).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct PolarBlock {
    pub i: usize,
    pub sigma_min: f64,
    pub skipped: bool,
    /// Smallest eigenvalue of the Hermitian part of the conjugated block.
    pub min_eigenvalue: f64,
    /// `‖b′ − b′*‖_F` of the conjugated block.
    pub hermitian_defect: f64,
    pub psd: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentCheck {
    pub class: String,
    pub order: u32,
    pub empirical: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolarConjugationReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub inner: usize,
    pub blocks: Vec<PolarBlock>,
    pub moments: Vec<MomentCheck>,
    pub all_psd: bool,
    pub pass: bool,
}

const SINGULAR_TOL: f64 = 1e-8;

/// `(u_i, U*BU, (σ_min, skipped) per block)`.
pub type PolarConjugation = (Vec<CMatrix>, BlockMatrix, Vec<(f64, bool)>);

/// Diagonal unitaries `u_i` (polar factors of the last-column blocks,
/// `u_n = I`) and the conjugated matrix `U*BU`.
pub fn polar_conjugation(b: &BlockMatrix) -> Result<PolarConjugation> {
    let (n, m) = (b.n(), b.inner());
    let mut us = Vec::with_capacity(n);
    let mut info = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let p = polar_decompose(&b.block(i, n - 1))?;
        let skipped = p.sigma_min < SINGULAR_TOL;
        info.push((p.sigma_min, skipped));
        us.push(if skipped { CMatrix::identity(m, m) } else { p.u });
    }
    us.push(CMatrix::identity(m, m));
    let conj = b.conjugate_diag(&us)?;
    Ok((us, conj, info))
}

/// Conjugates `B` by the polar factors of its last-column blocks and checks
/// that the new last column is positive and that low moments of each entry
/// class match the variance-`1/n` laws within `5/√N`.
pub fn verify_polar_conjugation(b: &BlockMatrix) -> Result<PolarConjugationReport> {
    let (n, m) = (b.n(), b.inner());
    if n < 2 {
        return domain("polar conjugation needs n >= 2");
    }
    let (_, conj, info) = polar_conjugation(b)?;
    let mut blocks = Vec::new();
    for (i, &(sigma_min, skipped)) in info.iter().enumerate() {
        let x = conj.block(i, n - 1);
        let hermitian_defect = frobenius(&(&x - x.adjoint()));
        let min_eigenvalue = hermitian_eigen(&HermitianMatrix::symmetrize(&x))?.values[0];
        let scale = frobenius(&x).max(1.0);
        let psd = skipped || (min_eigenvalue >= -1e-10 && hermitian_defect <= 1e-8 * scale);
        blocks.push(PolarBlock { i, sigma_min, skipped, min_eigenvalue, hermitian_defect, psd });
    }

    let v = 1.0 / n as f64;
    let tol = 5.0 / (m as f64).sqrt();
    let mut moments = Vec::new();
    let mut push = |class: &str, order: u32, samples: &[f64], expected: f64| {
        if samples.is_empty() {
            return;
        }
        let empirical = samples.iter().sum::<f64>() / samples.len() as f64;
        moments.push(MomentCheck {
            class: class.to_string(),
            order,
            empirical,
            expected,
            tolerance: tol,
            pass: (empirical - expected).abs() <= tol,
        });
    };

    let diag: Vec<[f64; 4]> = (0..n).map(|i| self_moments(&conj.block(i, i))).collect();
    let semicircle = [0.0, v, 0.0, 2.0 * v * v];
    for p in 0..4 {
        push("diagonal", p as u32 + 1, &diag.iter().map(|d| d[p]).collect::<Vec<_>>(), semicircle[p]);
    }

    let mut circ = Vec::new();
    for i in 0..n {
        for j in i + 1..n - 1 {
            circ.push(star_moments(&conj.block(i, j)));
        }
    }
    let circular = [0.0, v, 2.0 * v * v];
    for (p, order) in [1u32, 2, 4].into_iter().enumerate() {
        push("off-diagonal", order, &circ.iter().map(|d| d[p]).collect::<Vec<_>>(), circular[p]);
    }

    let last: Vec<[f64; 4]> = blocks
        .iter()
        .filter(|blk| !blk.skipped)
        .map(|blk| self_moments(&HermitianMatrix::symmetrize(&conj.block(blk.i, n - 1)).into_matrix()))
        .collect();
    let qc = QuarterCircleLaw::new(2.0 * v.sqrt())?;
    for p in 0..4 {
        push("last-column", p as u32 + 1, &last.iter().map(|d| d[p]).collect::<Vec<_>>(), qc_moment(&qc, p as u32 + 1));
    }

    let all_psd = blocks.iter().all(|blk| blk.psd);
    let pass = all_psd && moments.iter().all(|mc| mc.pass);
    Ok(PolarConjugationReport { n, inner: m, blocks, moments, all_psd, pass })
}

/// `τ(x^p)` for `p = 1..4` (real parts).
fn self_moments(x: &CMatrix) -> [f64; 4] {
    let n = x.nrows() as f64;
    let x2 = cmul(x, x);
    [
        ntrace(x).re,
        ntrace(&x2).re,
        trace_of_product(&x2, x).re / n,
        trace_of_product(&x2, &x2).re / n,
    ]
}

/// `|τ(c)|`, `τ(cc*)`, `τ((cc*)²)`.
fn star_moments(x: &CMatrix) -> [f64; 3] {
    let n = x.nrows() as f64;
    let cc = cmul(x, &x.adjoint());
    [ntrace(x).norm(), ntrace(&cc).re, trace_of_product(&cc, &cc).re / n]
}
