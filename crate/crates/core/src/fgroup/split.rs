use super::decompose::{e_decompose, norm_e, norm_s, s_decompose};
use super::element::{brute_force_trace, GroupAlgElement, Scalar};
use super::word::FGWord;
use crate::error::{domain, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

/// Fourier coefficients of `y`: `y = Σ_k y_k·λ(g_α)^k`, so that
/// `τ(y·λ(g_α)^j) = y_{−j}`. The key `0` must be absent (`τ(y) = 0`).
pub type YCoeffs<C = Complex64> = BTreeMap<i32, C>;

pub fn y_element<C: Scalar>(alpha: u32, y: &YCoeffs<C>) -> GroupAlgElement<C> {
    GroupAlgElement::from_terms(y.iter().map(|(&k, c)| (FGWord::power(alpha, k), c.clone())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct I123<C = Complex64> {
    /// `m = 0, n ≠ 0`.
    pub i1: C,
    /// `m ≠ 0, n = 0`.
    pub i2: C,
    /// `m ≠ 0, n ≠ 0`.
    pub i3: C,
}

impl<C: Scalar> I123<C> {
    pub fn total(&self) -> C {
        self.i1.clone() + self.i2.clone() + self.i3.clone()
    }
}

/// Splits `τ(w₁·y·w₂)`. Writing `w₁ = Σ 𝔈(a,m) λ(a)λ(g_α)^m` and
/// `w₂ = Σ 𝔖(b,n) λ(g_α)^n λ(b)`, the word `a·g_α^{m+k+n}·b` is the identity
/// exactly when `b = a⁻¹` and `k = −(m+n)`, so
/// `τ(w₁yw₂) = Σ_{a,m,n} 𝔈(a,m)·𝔖(a⁻¹,n)·y_{−(m+n)}`, grouped by which of
/// `m, n` vanish.
pub fn compute_i123<C: Scalar>(
    w1: &GroupAlgElement<C>,
    w2: &GroupAlgElement<C>,
    alpha: u32,
    y: &YCoeffs<C>,
) -> Result<I123<C>> {
    if y.contains_key(&0) {
        return domain("y must have zero trace: coefficient at k = 0 is not allowed");
    }
    let e = e_decompose(w1, alpha);
    let s = s_decompose(w2, alpha);
    let tails = s.by_tail();
    let mut out = I123 { i1: C::zero(), i2: C::zero(), i3: C::zero() };
    for ((a, m), ea) in &e.terms {
        let Some(entries) = tails.get(&a.inverse()) else { continue };
        for &(n, sb) in entries {
            let Some(yk) = y.get(&-(m + n)) else { continue };
            let term = ea.clone() * sb.clone() * yk.clone();
            match (*m == 0, n == 0) {
                (true, false) => out.i1 = out.i1.clone() + term,
                (false, true) => out.i2 = out.i2.clone() + term,
                (false, false) => out.i3 = out.i3.clone() + term,
                (true, true) => unreachable!("k = 0 is excluded"),
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct CNum {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for CNum {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceSplitReport {
    pub alpha: u32,
    #[serde(rename = "I1")]
    pub i1: CNum,
    #[serde(rename = "I2")]
    pub i2: CNum,
    #[serde(rename = "I3")]
    pub i3: CNum,
    pub total: CNum,
    pub brute_force: CNum,
    /// `|I₁+I₂+I₃ − brute force|`.
    pub identity_defect: f64,
    pub bounds: Vec<BoundCheck>,
    pub pass: bool,
}

const IDENTITY_TOL: f64 = 1e-10;

/// Evaluates the three bounds
/// `|I₁| ≤ ‖w₁‖₂‖w₂‖_{α,S}‖y‖₂`, `|I₂| ≤ ‖w₁‖_{α,E}‖w₂‖₂‖y‖₂` and
/// `|I₃| ≤ ‖w₁‖_{α,E}‖w₂‖_{α,S}·Σ_k|y_k|`, and the decomposition identity
/// against the brute-force trace.
pub fn verify_lemma43(w1: &GroupAlgElement, w2: &GroupAlgElement, alpha: u32, y: &YCoeffs) -> Result<TraceSplitReport> {
    let parts = compute_i123(w1, w2, alpha, y)?;
    let total = parts.total();
    let brute = brute_force_trace(w1, &y_element(alpha, y), w2);
    let y2 = y.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let y1: f64 = y.values().map(|c| c.norm()).sum();
    let (n1, n2) = (w1.l2_norm(), w2.l2_norm());
    let (e1, s2) = (norm_e(w1, alpha), norm_s(w2, alpha));
    let check = |name: &str, lhs: f64, rhs: f64| BoundCheck {
        name: name.to_string(),
        lhs,
        rhs,
        margin: rhs - lhs,
        pass: lhs <= rhs * (1.0 + 1e-12) + 1e-14,
    };
    let bounds = vec![
        check("|I1| <= |w1|_2 |w2|_(a,S) |y|_2", parts.i1.norm(), n1 * s2 * y2),
        check("|I2| <= |w1|_(a,E) |w2|_2 |y|_2", parts.i2.norm(), e1 * n2 * y2),
        check("|I3| <= |w1|_(a,E) |w2|_(a,S) sum|y_k|", parts.i3.norm(), e1 * s2 * y1),
    ];
    let identity_defect = (total - brute).norm();
    let pass = identity_defect <= IDENTITY_TOL * (1.0 + brute.norm()) && bounds.iter().all(|b| b.pass);
    Ok(TraceSplitReport {
        alpha,
        i1: parts.i1.into(),
        i2: parts.i2.into(),
        i3: parts.i3.into(),
        total: total.into(),
        brute_force: brute.into(),
        identity_defect,
        bounds,
        pass,
    })
}
