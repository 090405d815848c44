use super::word::{word_multiply, FGWord};
use crate::wick::{GaussianRational, Rational};
use num_complex::Complex64;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::ops::{Add, Mul};

/// Coefficient ring for group-algebra elements.
pub trait Scalar: Clone + PartialEq + Zero + Add<Output = Self> + Mul<Output = Self> {}
impl<T: Clone + PartialEq + Zero + Add<Output = T> + Mul<Output = T>> Scalar for T {}

/// Finitely supported element `Σ x(g)·λ(g)` of the group algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlgElement<C = Complex64> {
    terms: BTreeMap<FGWord, C>,
}

impl<C: Scalar> Default for GroupAlgElement<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Scalar> GroupAlgElement<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    /// `c·λ(w)`.
    pub fn monomial(w: FGWord, c: C) -> Self {
        let mut x = Self::zero();
        x.add_term(w, c);
        x
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (FGWord, C)>) -> Self {
        let mut x = Self::zero();
        for (w, c) in terms {
            x.add_term(w, c);
        }
        x
    }

    pub fn add_term(&mut self, w: FGWord, c: C) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(w).or_insert_with(C::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FGWord, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &FGWord) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `τ(x)`: coefficient of the identity.
    pub fn trace(&self) -> C {
        self.coefficient(&FGWord::identity())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut x = self.clone();
        for (w, c) in &other.terms {
            x.add_term(w.clone(), c.clone());
        }
        x
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut x = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                x.add_term(word_multiply(u, v), a.clone() * b.clone());
            }
        }
        x
    }

    pub fn map<D: Scalar>(&self, f: impl Fn(&C) -> D) -> GroupAlgElement<D> {
        GroupAlgElement::from_terms(self.terms.iter().map(|(w, c)| (w.clone(), f(c))))
    }
}

impl GroupAlgElement<Complex64> {
    /// `‖x‖₂ = √(Σ|x(g)|²)`.
    pub fn l2_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

pub fn gaussian_to_complex(z: &GaussianRational) -> Complex64 {
    use num_traits::ToPrimitive;
    let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
    Complex64::new(f(&z.re), f(&z.im))
}

/// Coefficient of the identity in `w₁·y·w₂`, by direct multiplication.
pub fn brute_force_trace<C: Scalar>(w1: &GroupAlgElement<C>, y: &GroupAlgElement<C>, w2: &GroupAlgElement<C>) -> C {
    let left = w1.mul(y);
    let mut t = C::zero();
    for (u, a) in left.terms() {
        if let Some(b) = w2.terms.get(&u.inverse()) {
            t = t + a.clone() * b.clone();
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn traces() {
        let g = GroupAlgElement::monomial(FGWord::generator(1), c(1.0));
        let gi = GroupAlgElement::monomial(FGWord::power(1, -1), c(1.0));
        assert_eq!(g.mul(&gi).trace(), c(1.0));
        assert_eq!(g.trace(), c(0.0));
        let one = GroupAlgElement::monomial(FGWord::identity(), c(1.0));
        assert_eq!(brute_force_trace(&g, &one, &gi), c(1.0));
    }

    #[test]
    fn cancellation_removes_terms() {
        let mut x = GroupAlgElement::monomial(FGWord::generator(0), c(2.0));
        x.add_term(FGWord::generator(0), c(-2.0));
        assert!(x.is_empty());
    }

    #[test]
    fn l2_norm() {
        let x = GroupAlgElement::from_terms([(FGWord::generator(0), c(3.0)), (FGWord::generator(1), Complex64::new(0.0, 4.0))]);
        assert_eq!(x.l2_norm(), 5.0);
    }
}
