//! Semicircle and quarter-circle laws.
//!
//! The semicircle law centered at `a` with radius `r` has density
//! `2/(πr²)·√(r²−(t−a)²)` on `[a−r, a+r]`; its second central moment is `r²/4`.
//! The quarter-circle law of radius `r` is the law of `|B|` for `B` centered
//! semicircular of radius `r`, with density `4/(πr²)·√(r²−t²)` on `[0, r]`.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::quad::{integrate, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemicircleLaw {
    center: f64,
    radius: f64,
}

impl SemicircleLaw {
    pub fn new(center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !center.is_finite() {
            return domain(format!("semicircle law needs finite center and radius > 0, got ({center}, {radius})"));
        }
        Ok(Self { center, radius })
    }

    /// The centered law of radius `r`.
    pub fn centered(radius: f64) -> Result<Self> {
        Self::new(0.0, radius)
    }

    /// The centered law whose second moment equals `variance` (radius `2√variance`).
    pub fn with_variance(variance: f64) -> Result<Self> {
        if !(variance > 0.0) {
            return domain(format!("variance must be positive, got {variance}"));
        }
        Self::new(0.0, 2.0 * variance.sqrt())
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn support(&self) -> (f64, f64) {
        (self.center - self.radius, self.center + self.radius)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarterCircleLaw {
    radius: f64,
}

impl QuarterCircleLaw {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return domain(format!("quarter-circle radius must be positive, got {radius}"));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn density(&self, t: f64) -> f64 {
        let r = self.radius;
        if (0.0..=r).contains(&t) {
            4.0 / (PI * r * r) * (r * r - t * t).max(0.0).sqrt()
        } else {
            0.0
        }
    }
}

pub fn sc_density(law: &SemicircleLaw, t: f64) -> f64 {
    let r = law.radius;
    let x = t - law.center;
    if x.abs() <= r {
        2.0 / (PI * r * r) * (r * r - x * x).max(0.0).sqrt()
    } else {
        0.0
    }
}

/// Moments of the centered law: `Catalan(m/2)·(r/2)^m` for even `m`, zero for odd.
fn centered_moment(radius: f64, m: u32) -> f64 {
    if m % 2 == 1 {
        0.0
    } else {
        // Catalan(k)·(r/2)^{2k} built up term by term so neither factor
        // overflows on its own
        let q = (radius / 2.0).powi(2);
        (0..m / 2).fold(1.0, |acc, i| acc * q * (2.0 * (2 * i + 1) as f64) / (i + 2) as f64)
    }
}

/// The m-th raw moment, shift-expanded around the center.
pub fn sc_moment(law: &SemicircleLaw, m: u32) -> f64 {
    if law.center == 0.0 {
        return centered_moment(law.radius, m);
    }
    let mut total = 0.0;
    let mut binom = 1.0;
    for j in 0..=m {
        if j > 0 {
            binom = binom * (m - j + 1) as f64 / j as f64;
        }
        total += binom * law.center.powi((m - j) as i32) * centered_moment(law.radius, j);
    }
    total
}

/// `W_m = ∫₀^{π/2} sin^m θ dθ`.
fn wallis(m: u32) -> f64 {
    let (mut w, start) = if m.is_multiple_of(2) { (FRAC_PI_2, 0) } else { (1.0, 1) };
    let mut k = start;
    while k < m {
        w *= (k + 1) as f64 / (k + 2) as f64;
        k += 2;
    }
    w
}

/// Moments of the quarter-circle law. Even orders coincide with the semicircle
/// moments (`H² = B²`); odd orders use `∫₀^r t^m√(r²−t²)dt = r^{m+2}·W_m/(m+2)`.
pub fn qc_moment(law: &QuarterCircleLaw, m: u32) -> f64 {
    let r = law.radius;
    if m.is_multiple_of(2) {
        centered_moment(r, m)
    } else {
        4.0 / (PI * r * r) * r.powi(m as i32 + 2) * wallis(m) / (m + 2) as f64
    }
}

/// Raw moment of the semicircle law by quadrature of its defining integral,
/// using `t = a + r·sin θ` to remove the square-root endpoints.
pub fn sc_moment_quadrature(law: &SemicircleLaw, m: u32, opts: QuadOptions) -> Result<f64> {
    let (a, r) = (law.center, law.radius);
    let res = integrate(
        |theta: f64| {
            let c = theta.cos();
            (a + r * theta.sin()).powi(m as i32) * c * c
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        opts,
    )?;
    Ok(2.0 / PI * res.value)
}

/// Quarter-circle moment by quadrature, same substitution as above.
pub fn qc_moment_quadrature(law: &QuarterCircleLaw, m: u32, opts: QuadOptions) -> Result<f64> {
    let r = law.radius;
    let res = integrate(
        |theta: f64| {
            let c = theta.cos();
            (r * theta.sin()).powi(m as i32) * c * c
        },
        0.0,
        FRAC_PI_2,
        opts,
    )?;
    Ok(4.0 / PI * res.value)
}

/// Closed-form distribution function.
pub fn sc_cdf(law: &SemicircleLaw, t: f64) -> f64 {
    let r = law.radius;
    let x = (t - law.center).clamp(-r, r);
    if x <= -r {
        return 0.0;
    }
    if x >= r {
        return 1.0;
    }
    let v = (x * (r * r - x * x).sqrt() + r * r * (x / r).asin()) / (PI * r * r) + 0.5;
    v.clamp(0.0, 1.0)
}

const BISECTION_WIDTH: f64 = 1e-6;
const EDGE_GUARD: f64 = 1e-4;

/// Inverse of [`sc_cdf`]: bracketed bisection to width `1e-6·r`, then guarded
/// Newton steps. Within `1e-4` of either endpoint of `[0, 1]` the density is too
/// flat for Newton and bisection runs to floating-point resolution instead.
pub fn sc_quantile(law: &SemicircleLaw, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return domain(format!("quantile level must lie in [0, 1], got {s}"));
    }
    let (lo0, hi0) = law.support();
    if s == 0.0 {
        return Ok(lo0);
    }
    if s == 1.0 {
        return Ok(hi0);
    }
    if s == 0.5 {
        return Ok(law.center);
    }
    let near_edge = !(EDGE_GUARD..=1.0 - EDGE_GUARD).contains(&s);
    let (mut lo, mut hi) = (lo0, hi0);
    let width = if near_edge { 0.0 } else { BISECTION_WIDTH * law.radius };
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= width || mid <= lo || mid >= hi {
            break;
        }
        if sc_cdf(law, mid) < s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if near_edge {
        let (flo, fhi) = (sc_cdf(law, lo) - s, sc_cdf(law, hi) - s);
        return Ok(if flo.abs() <= fhi.abs() { lo } else { hi });
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..50 {
        let residual = sc_cdf(law, t) - s;
        if residual.abs() <= 1e-15 {
            break;
        }
        if residual < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let slope = sc_density(law, t);
        let mut next = t - residual / slope;
        if !(next >= lo && next <= hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= f64::EPSILON * law.radius {
            t = next;
            break;
        }
        t = next;
    }
    Ok(t)
}

/// i.i.d. draws by inverse-transform sampling.
pub fn sc_sample<R: Rng + ?Sized>(law: &SemicircleLaw, rng: &mut R, count: usize) -> Vec<f64> {
    (0..count)
        .map(|_| {
            let u: f64 = rng.random();
            sc_quantile(law, u).expect("uniform variates lie in [0, 1)")
        })
        .collect()
}
