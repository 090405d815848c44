//! Perturbation of a centered semicircular element of radius `r`.
//!
//! With `g` the quantile function of the semicircle law on `[−r, r]`, the
//! perturbed profile `f` agrees with `g` on `[r, 1−r]` and replaces the steep
//! ends by parabolas: `f(s) = g(r)/r²·s²` on `[0, r]` and
//! `f(s) = g(1−r)/r²·(1−s)²` on `[1−r, 1]`. Functions of `s ∈ [0, 1]` model
//! diagonal operators over a Haar unitary `u` with `τ(u^k) = δ_k0`, so
//! `τ(x̃ u^k) = ∫₀¹ f(s) e^{2πiks} ds`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::quad::{integrate, QuadOptions};
use crate::rmt::{haar_unitary, CMatrix, RngStream};
use crate::scdist::{sc_quantile, SemicircleLaw};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationProfile {
    r: f64,
    tol: f64,
    #[serde(skip)]
    law: SemicircleLaw,
    #[serde(skip)]
    g_r: f64,
}

impl PerturbationProfile {
    pub fn new(r: f64) -> Result<Self> {
        Self::with_tolerance(r, 1e-12)
    }

    pub fn with_tolerance(r: f64, tol: f64) -> Result<Self> {
        if !(r > 0.0 && r < 0.5) {
            return domain(format!("perturbation radius must lie in (0, 1/2), got {r}"));
        }
        if !(tol > 0.0) {
            return domain(format!("quadrature tolerance must be positive, got {tol}"));
        }
        let law = SemicircleLaw::centered(r)?;
        let g_r = sc_quantile(&law, r)?;
        let g_1r = sc_quantile(&law, 1.0 - r)?;
        if g_r > 0.0 || g_1r < 0.0 {
            return Err(Error::Numeric(format!("expected g(r) <= 0 <= g(1-r), got {g_r}, {g_1r}")));
        }
        Ok(Self { r, tol, law, g_r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// `g(r)`; by symmetry `g(1−r) = −g(r)`.
    pub fn g_at_r(&self) -> f64 {
        self.g_r
    }

    fn quad(&self) -> QuadOptions {
        QuadOptions::with_abs_tol(self.tol)
    }

    /// `θ ∈ [−π/2, π/2]` with `g(s(θ)) = r·sinθ` at the left junction.
    fn theta_r(&self) -> f64 {
        (self.g_r / self.r).clamp(-1.0, 1.0).asin()
    }
}

fn check_unit(s: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&s) {
        return domain(format!("s must lie in [0, 1], got {s}"));
    }
    Ok(())
}

/// `s(θ) = 1/2 + (θ + sinθ·cosθ)/π`, the semicircle distribution function
/// at `t = r·sinθ`; `ds/dθ = (2/π)·cos²θ`.
fn s_of_theta(theta: f64) -> f64 {
    0.5 + (theta + theta.sin() * theta.cos()) / PI
}

fn ds_dtheta(theta: f64) -> f64 {
    2.0 / PI * theta.cos().powi(2)
}

pub fn g_of_s(p: &PerturbationProfile, s: f64) -> Result<f64> {
    check_unit(s)?;
    sc_quantile(&p.law, s)
}

pub fn f_of_s(p: &PerturbationProfile, s: f64) -> Result<f64> {
    check_unit(s)?;
    let r = p.r;
    Ok(if s <= r {
        p.g_r / (r * r) * s * s
    } else if s >= 1.0 - r {
        -p.g_r / (r * r) * (1.0 - s) * (1.0 - s)
    } else {
        sc_quantile(&p.law, s)?
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FPrimeL2 {
    pub left: f64,
    pub middle: f64,
    pub right: f64,
    pub total: f64,
}

/// `∫₀¹ |f′(s)|² ds` piece by piece. The parabolas give `(4/3)·g(r)²/r`
/// each; on the middle piece `g′ = (πr²/2)/√(r² − g²)`, so
/// `∫|g′|² ds = (πr²/2)·∫ dt/√(r²−t²) = (πr²/2)·(asin(g(1−r)/r) − asin(g(r)/r))`.
pub fn fprime_l2(p: &PerturbationProfile) -> FPrimeL2 {
    let r = p.r;
    let left = 4.0 / 3.0 * p.g_r * p.g_r / r;
    let right = left;
    let middle = PI * r * r / 2.0 * (-2.0 * p.theta_r());
    FPrimeL2 { left, middle, right, total: left + middle + right }
}

/// `c_k = ∫₀¹ f(s) e^{2πiks} ds`.
pub fn fourier_coeff(p: &PerturbationProfile, k: i64) -> Result<Complex64> {
    let r = p.r;
    let w = 2.0 * PI * k as f64;
    let opts = p.quad();
    let a = p.g_r / (r * r);
    let left = integrate(|s: f64| Complex64::from_polar(a * s * s, w * s), 0.0, r, opts)?.value;
    let right = integrate(
        |s: f64| Complex64::from_polar(-a * (1.0 - s) * (1.0 - s), w * s),
        1.0 - r,
        1.0,
        opts,
    )?
    .value;
    let th = p.theta_r();
    let middle = integrate(
        |t: f64| Complex64::from_polar(r * t.sin() * ds_dtheta(t), w * s_of_theta(t)),
        th,
        -th,
        opts,
    )?
    .value;
    Ok(left + middle + right)
}

/// `∫₀¹ g(s) e^{2πiks} ds` for the unperturbed profile.
pub fn fourier_coeff_g(p: &PerturbationProfile, k: i64) -> Result<Complex64> {
    let r = p.r;
    let w = 2.0 * PI * k as f64;
    Ok(integrate(
        |t: f64| Complex64::from_polar(r * t.sin() * ds_dtheta(t), w * s_of_theta(t)),
        -FRAC_PI_2,
        FRAC_PI_2,
        p.quad(),
    )?
    .value)
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierCoefficient {
    pub k: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierReport {
    pub r: f64,
    #[serde(rename = "K")]
    pub cutoff: usize,
    /// `c_k` for `−K ≤ k ≤ K`.
    pub coefficients: Vec<FourierCoefficient>,
    /// `Σ_{0<|k|≤K} |c_k|`.
    pub partial: f64,
    /// Upper bound for `Σ_{|k|>K} |c_k|`.
    pub tail: f64,
    pub sum_abs: f64,
    /// `√5·√r`.
    pub bound: f64,
    /// `max_k |c_{−k} − conj(c_k)|`.
    pub symmetry_defect: f64,
    pub pass: bool,
}

/// `√(Σ_{|k|>K} 1/(2πk)²)`.
pub fn tail_weight(cutoff: usize) -> f64 {
    let partial: f64 = (1..=cutoff).map(|k| 1.0 / (k as f64 * k as f64)).sum();
    let rest = (PI * PI / 6.0 - partial).max(0.0);
    (2.0 * rest).sqrt() / (2.0 * PI)
}

/// Sums `|c_k|` over `0 < |k| ≤ K` and bounds the rest by Cauchy–Schwarz:
/// `|c_k| = |∫f′e^{2πiks}|/(2π|k|)`, so `Σ_{|k|>K}|c_k| ≤ tail_weight(K)·‖f′‖₂`.
pub fn sum_abs_coeffs(p: &PerturbationProfile, cutoff: usize) -> Result<FourierReport> {
    if cutoff == 0 {
        return domain("cutoff K must be at least 1");
    }
    let k_max = cutoff as i64;
    let mut coefficients = Vec::with_capacity(2 * cutoff + 1);
    let mut partial = 0.0;
    let mut symmetry_defect: f64 = 0.0;
    let mut positive = vec![Complex64::new(0.0, 0.0); cutoff + 1];
    for k in 0..=k_max {
        positive[k as usize] = fourier_coeff(p, k)?;
    }
    for k in -k_max..=k_max {
        let c = if k < 0 {
            let c = fourier_coeff(p, k)?;
            symmetry_defect = symmetry_defect.max((c - positive[(-k) as usize].conj()).norm());
            c
        } else {
            positive[k as usize]
        };
        if k != 0 {
            partial += c.norm();
        }
        coefficients.push(FourierCoefficient { k, re: c.re, im: c.im });
    }
    let tail = tail_weight(cutoff) * fprime_l2(p).total.sqrt();
    let sum_abs = partial + tail;
    let bound = 5f64.sqrt() * p.r.sqrt();
    Ok(FourierReport {
        r: p.r,
        cutoff,
        coefficients,
        partial,
        tail,
        sum_abs,
        bound,
        symmetry_defect,
        pass: sum_abs <= bound,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct L2Distance {
    pub value: f64,
    /// `2r³`.
    pub bound: f64,
    pub pass: bool,
}

/// `‖g − f‖₂² = ∫₀¹ |g(s) − f(s)|² ds`, supported on the two end pieces.
/// Integrated in `θ` with `g = r·sinθ` and `s = s(θ)`.
pub fn l2_distance_g_f(p: &PerturbationProfile) -> Result<L2Distance> {
    let r = p.r;
    let a = p.g_r / (r * r);
    let th = p.theta_r();
    let opts = p.quad();
    let left = integrate(
        |t: f64| {
            let s = s_of_theta(t);
            (r * t.sin() - a * s * s).powi(2) * ds_dtheta(t)
        },
        -FRAC_PI_2,
        th,
        opts,
    )?
    .value;
    let right = integrate(
        |t: f64| {
            let s = s_of_theta(t);
            (r * t.sin() + a * (1.0 - s) * (1.0 - s)).powi(2) * ds_dtheta(t)
        },
        -th,
        FRAC_PI_2,
        opts,
    )?
    .value;
    let value = left + right;
    let bound = 2.0 * r.powi(3);
    Ok(L2Distance { value, bound, pass: value <= bound })
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    pub r: f64,
    #[serde(rename = "N")]
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    /// `6r^{5/2}`.
    pub slack: f64,
    /// Largest `|τ(w₁xw₂)|² − |τ(w₁x̃w₂)|² − 6r^{5/2}` seen (including the
    /// identity and zero cases).
    pub max_excess: f64,
    pub identity_holds: bool,
    pub zero_holds: bool,
    pub violations: usize,
    pub pass: bool,
}

const CONTRACTION_SLACK: f64 = 1e-8;

/// `τ(w₁·diag(d)·w₂) = (1/N)·Σ_ij w₁[j,i]·d_i·w₂[i,j]`.
fn tau_sandwich(w1: &CMatrix, d: &[f64], w2: &CMatrix) -> Complex64 {
    let n = d.len();
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let mut row = Complex64::new(0.0, 0.0);
        for j in 0..n {
            row += w1[(j, i)] * w2[(i, j)];
        }
        t += row * d[i];
    }
    t / n as f64
}

/// Checks `|τ(w₁xw₂)|² ≤ |τ(w₁x̃w₂)|² + 6r^{5/2}` in a diagonal model:
/// `x = diag(g((i−½)/N))`, `x̃ = diag(f((i−½)/N))`, and contractions
/// `w = λ·U` with `U` Haar and `λ` uniform on `[0, 1]`. Trial `t` draws from
/// `RngStream::new(seed, t)`.
pub fn verify_lemma42(p: &PerturbationProfile, dim: usize, trials: usize, seed: u64) -> Result<ContractionReport> {
    if dim < 8 {
        return domain(format!("matrix dimension must be at least 8, got {dim}"));
    }
    let grid: Vec<f64> = (0..dim).map(|i| (i as f64 + 0.5) / dim as f64).collect();
    let x = grid.iter().map(|&s| g_of_s(p, s)).collect::<Result<Vec<_>>>()?;
    let xt = grid.iter().map(|&s| f_of_s(p, s)).collect::<Result<Vec<_>>>()?;
    let slack = 6.0 * p.r.powf(2.5);
    let excess = |w1: &CMatrix, w2: &CMatrix| {
        tau_sandwich(w1, &x, w2).norm_sqr() - tau_sandwich(w1, &xt, w2).norm_sqr() - slack
    };

    let id = CMatrix::identity(dim, dim);
    let zero = CMatrix::zeros(dim, dim);
    let e_id = excess(&id, &id);
    let e_zero = excess(&zero, &id);
    let mut max_excess = e_id.max(e_zero);
    let mut violations = 0;
    for t in 0..trials {
        let mut rng = RngStream::new(seed, t as u64);
        let l1: f64 = rng.random();
        let w1 = haar_unitary(dim, &mut rng)? * Complex64::new(l1, 0.0);
        let l2: f64 = rng.random();
        let w2 = haar_unitary(dim, &mut rng)? * Complex64::new(l2, 0.0);
        let e = excess(&w1, &w2);
        max_excess = max_excess.max(e);
        if e > CONTRACTION_SLACK {
            violations += 1;
        }
    }
    let identity_holds = e_id <= CONTRACTION_SLACK;
    let zero_holds = e_zero <= CONTRACTION_SLACK;
    Ok(ContractionReport {
        r: p.r,
        dim,
        trials,
        seed,
        slack,
        max_excess,
        identity_holds,
        zero_holds,
        violations,
        pass: violations == 0 && identity_holds && zero_holds,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Thresholds {
    /// Largest `r` such that the middle piece of `∫|f′|²` is `≤ r` for
    /// every radius up to it (`None` if it holds on all of `(0, 1/2)`).
    pub middle_le_r: Option<f64>,
    /// Same for `∫|f′|² ≤ 5r`.
    pub total_le_5r: Option<f64>,
    /// Largest grid value of `middle/r` and where it occurs.
    pub max_middle_ratio: f64,
    pub argmax_middle_ratio: f64,
}

/// Scans `r` on a grid of step `1e-3` and refines the first failure by
/// bisection.
pub fn measure_thresholds() -> Result<Thresholds> {
    let middle = |r: f64| -> Result<bool> {
        let p = PerturbationProfile::new(r)?;
        Ok(fprime_l2(&p).middle <= r)
    };
    let total = |r: f64| -> Result<bool> {
        let p = PerturbationProfile::new(r)?;
        Ok(fprime_l2(&p).total <= 5.0 * r)
    };
    let (mut max_middle_ratio, mut argmax_middle_ratio) = (0.0, 0.0);
    for i in 1..500 {
        let r = i as f64 * 1e-3;
        let ratio = fprime_l2(&PerturbationProfile::new(r)?).middle / r;
        if ratio > max_middle_ratio {
            (max_middle_ratio, argmax_middle_ratio) = (ratio, r);
        }
    }
    Ok(Thresholds {
        middle_le_r: first_failure(&middle)?,
        total_le_5r: first_failure(&total)?,
        max_middle_ratio,
        argmax_middle_ratio,
    })
}

fn first_failure(holds: &dyn Fn(f64) -> Result<bool>) -> Result<Option<f64>> {
    let step = 1e-3;
    let mut prev = step;
    let mut r = step;
    while r < 0.5 {
        if !holds(r)? {
            let (mut lo, mut hi) = (prev, r);
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                if holds(mid)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(Some(lo));
        }
        prev = r;
        r += step;
    }
    Ok(None)
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbReport {
    pub r: f64,
    pub fprime_l2: f64,
    pub fprime_pieces: FPrimeL2,
    pub sum_abs: f64,
    pub bound: f64,
    pub l2_distance: f64,
    pub bound2: f64,
    pub contraction_violations: usize,
    pub fourier: FourierReport,
    pub contraction: ContractionReport,
    pub pass: bool,
}

/// All checks for one radius.
pub fn perturb_report(r: f64, cutoff: usize, dim: usize, trials: usize, seed: u64) -> Result<PerturbReport> {
    let p = PerturbationProfile::new(r)?;
    let fp = fprime_l2(&p);
    let fourier = sum_abs_coeffs(&p, cutoff)?;
    let l2 = l2_distance_g_f(&p)?;
    let contraction = verify_lemma42(&p, dim, trials, seed)?;
    Ok(PerturbReport {
        r,
        fprime_l2: fp.total,
        fprime_pieces: fp,
        sum_abs: fourier.sum_abs,
        bound: fourier.bound,
        l2_distance: l2.value,
        bound2: l2.bound,
        contraction_violations: contraction.violations,
        pass: fourier.pass && l2.pass && contraction.pass,
        fourier,
        contraction,
    })
}
