use serde::{Serialize, Serializer};
use std::fmt;

/// Reduced word in the free group: `(generator, exponent)` syllables with
/// nonzero exponents and no two adjacent syllables on the same generator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FGWord(Vec<(u32, i32)>);

impl FGWord {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// `g^e`.
    pub fn power(g: u32, e: i32) -> Self {
        Self::from_syllables([(g, e)])
    }

    pub fn generator(g: u32) -> Self {
        Self::power(g, 1)
    }

    /// Reduces an arbitrary syllable sequence.
    pub fn from_syllables(syllables: impl IntoIterator<Item = (u32, i32)>) -> Self {
        let mut w = Self::identity();
        for s in syllables {
            w.push(s);
        }
        w
    }

    fn push(&mut self, (g, e): (u32, i32)) {
        if e == 0 {
            return;
        }
        match self.0.last_mut() {
            Some((h, f)) if *h == g => {
                *f += e;
                if *f == 0 {
                    self.0.pop();
                }
            }
            _ => self.0.push((g, e)),
        }
    }

    pub fn syllables(&self) -> &[(u32, i32)] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Length in letters, `Σ|e|`.
    pub fn len(&self) -> usize {
        self.0.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn first(&self) -> Option<(u32, i32)> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<(u32, i32)> {
        self.0.last().copied()
    }

    /// Splits off a trailing power of `alpha`: `self = a·g_α^m`, `a` not ending with `g_α`.
    pub fn split_trailing(&self, alpha: u32) -> (Self, i32) {
        match self.last() {
            Some((g, e)) if g == alpha => (Self(self.0[..self.0.len() - 1].to_vec()), e),
            _ => (self.clone(), 0),
        }
    }

    /// Splits off a leading power of `alpha`: `self = g_α^n·b`, `b` not starting with `g_α`.
    pub fn split_leading(&self, alpha: u32) -> (i32, Self) {
        match self.first() {
            Some((g, e)) if g == alpha => (e, Self(self.0[1..].to_vec())),
            _ => (0, self.clone()),
        }
    }
}

pub fn word_multiply(u: &FGWord, v: &FGWord) -> FGWord {
    let mut w = u.clone();
    for &s in &v.0 {
        w.push(s);
    }
    w
}

impl fmt::Display for FGWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, &(g, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if e == 1 {
                write!(f, "g{g}")?;
            } else {
                write!(f, "g{g}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for FGWord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &[(u32, i32)]) -> FGWord {
        FGWord::from_syllables(s.iter().copied())
    }

    #[test]
    fn cancellation() {
        assert!(word_multiply(&FGWord::generator(1), &FGWord::power(1, -1)).is_identity());
        assert_eq!(word_multiply(&w(&[(1, 2), (2, 1)]), &w(&[(2, -1), (1, 1)])), FGWord::power(1, 3));
        assert_eq!(w(&[(1, 1), (2, 0), (1, 1)]), FGWord::power(1, 2));
    }

    #[test]
    fn display_and_splits() {
        let x = w(&[(2, 1), (1, -2)]);
        assert_eq!(x.to_string(), "g2 g1^-2");
        assert_eq!(FGWord::identity().to_string(), "e");
        assert_eq!(x.split_trailing(1), (FGWord::generator(2), -2));
        assert_eq!(x.split_trailing(2), (x.clone(), 0));
        assert_eq!(x.split_leading(2), (1, FGWord::power(1, -2)));
        assert_eq!(x.len(), 3);
    }

    fn letters() -> impl Strategy<Value = Vec<(u32, i32)>> {
        prop::collection::vec((0u32..3, prop_oneof![Just(-1i32), Just(1)]), 0..10)
    }

    /// Letter-by-letter free reduction from the right end, as an oracle.
    fn reduce_from_right(ls: &[(u32, i32)]) -> FGWord {
        let mut stack: Vec<(u32, i32)> = Vec::new();
        for &l in ls.iter().rev() {
            match stack.last() {
                Some(&(g, e)) if g == l.0 && e == -l.1 => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        stack.reverse();
        FGWord::from_syllables(stack)
    }

    proptest! {
        #[test]
        fn associative(a in letters(), b in letters(), c in letters()) {
            let (a, b, c) = (w(&a), w(&b), w(&c));
            prop_assert_eq!(word_multiply(&word_multiply(&a, &b), &c), word_multiply(&a, &word_multiply(&b, &c)));
            prop_assert_eq!(word_multiply(&a, &FGWord::identity()), a.clone());
            prop_assert!(word_multiply(&a, &a.inverse()).is_identity());
        }

        #[test]
        fn confluent(a in letters(), b in letters()) {
            let mut all = a.clone();
            all.extend(b.iter().copied());
            prop_assert_eq!(word_multiply(&w(&a), &w(&b)), reduce_from_right(&all));
        }

        #[test]
        fn reduced_form(a in letters()) {
            let x = w(&a);
            prop_assert!(x.syllables().iter().all(|&(_, e)| e != 0));
            prop_assert!(x.syllables().windows(2).all(|p| p[0].0 != p[1].0));
        }
    }
}
