use super::element::{GroupAlgElement, Scalar};
use super::word::{word_multiply, FGWord};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// `x = Σ 𝔈(a,m)·λ(a)·λ(g_α)^m` with `a` not ending in `g_α`; `m = 0` collects
/// the words outside ES (those not ending in `g_α`).
#[derive(Debug, Clone, PartialEq)]
pub struct EDecomposition<C = Complex64> {
    pub alpha: u32,
    pub terms: BTreeMap<(FGWord, i32), C>,
}

/// `x = Σ 𝔖(b,n)·λ(g_α)^n·λ(b)` with `b` not starting with `g_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct SDecomposition<C = Complex64> {
    pub alpha: u32,
    pub terms: BTreeMap<(FGWord, i32), C>,
}

pub fn e_decompose<C: Scalar>(x: &GroupAlgElement<C>, alpha: u32) -> EDecomposition<C> {
    let terms = x.terms().map(|(w, c)| (w.split_trailing(alpha), c.clone())).collect();
    EDecomposition { alpha, terms }
}

pub fn s_decompose<C: Scalar>(x: &GroupAlgElement<C>, alpha: u32) -> SDecomposition<C> {
    let terms = x
        .terms()
        .map(|(w, c)| {
            let (n, b) = w.split_leading(alpha);
            ((b, n), c.clone())
        })
        .collect();
    SDecomposition { alpha, terms }
}

impl<C: Scalar> EDecomposition<C> {
    pub fn coefficient(&self, a: &FGWord, m: i32) -> C {
        self.terms.get(&(a.clone(), m)).cloned().unwrap_or_else(C::zero)
    }

    pub fn reconstruct(&self) -> GroupAlgElement<C> {
        GroupAlgElement::from_terms(
            self.terms.iter().map(|((a, m), c)| (word_multiply(a, &FGWord::power(self.alpha, *m)), c.clone())),
        )
    }
}

impl<C: Scalar> SDecomposition<C> {
    pub fn coefficient(&self, b: &FGWord, n: i32) -> C {
        self.terms.get(&(b.clone(), n)).cloned().unwrap_or_else(C::zero)
    }

    pub fn reconstruct(&self) -> GroupAlgElement<C> {
        GroupAlgElement::from_terms(
            self.terms.iter().map(|((b, n), c)| (word_multiply(&FGWord::power(self.alpha, *n), b), c.clone())),
        )
    }

    /// Entries grouped by `b`.
    pub(crate) fn by_tail(&self) -> BTreeMap<&FGWord, Vec<(i32, &C)>> {
        let mut map: BTreeMap<&FGWord, Vec<(i32, &C)>> = BTreeMap::new();
        for ((b, n), c) in &self.terms {
            map.entry(b).or_default().push((*n, c));
        }
        map
    }
}

/// `‖x‖_{(α,E)}`: ℓ² mass of the words ending in a nonzero power of `g_α`.
pub fn norm_e(x: &GroupAlgElement, alpha: u32) -> f64 {
    x.terms()
        .filter(|(w, _)| matches!(w.last(), Some((g, _)) if g == alpha))
        .map(|(_, c)| c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `‖x‖_{(α,S)}`: ℓ² mass of the words starting with a nonzero power of `g_α`.
pub fn norm_s(x: &GroupAlgElement, alpha: u32) -> f64 {
    x.terms()
        .filter(|(w, _)| matches!(w.first(), Some((g, _)) if g == alpha))
        .map(|(_, c)| c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}
