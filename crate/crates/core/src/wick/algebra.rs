use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;
pub type GaussianRational = Complex<Rational>;

/// Exact coefficient fields usable in [`AlgElement`].
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn conj(&self) -> Self;
    fn from_rational(q: Rational) -> Self;
}

impl Coefficient for Rational {
    fn conj(&self) -> Self {
        self.clone()
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
}

impl Coefficient for GaussianRational {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_rational(q: Rational) -> Self {
        Complex::new(q, Rational::zero())
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    Semicircular,
    Circular,
}

#[derive(Debug)]
struct LabelData {
    id: u32,
    kind: GeneratorKind,
    variance: Rational,
}

/// A free generator. Distinct ids are free from each other; equality and order
/// are by id alone.
#[derive(Clone)]
pub struct GeneratorLabel(Arc<LabelData>);

impl GeneratorLabel {
    pub fn id(&self) -> u32 {
        self.0.id
    }
    pub fn kind(&self) -> GeneratorKind {
        self.0.kind
    }
    /// `τ(g²)` for a semicircular label, `τ(gg*)` for a circular one.
    pub fn variance(&self) -> &Rational {
        &self.0.variance
    }
}

impl PartialEq for GeneratorLabel {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for GeneratorLabel {}
impl PartialOrd for GeneratorLabel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for GeneratorLabel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}
impl std::hash::Hash for GeneratorLabel {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl fmt::Debug for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind() {
            GeneratorKind::Semicircular => "s",
            GeneratorKind::Circular => "c",
        };
        write!(f, "{tag}{}", self.id())
    }
}

/// Hands out fresh, mutually free generator labels.
#[derive(Debug, Default)]
pub struct LabelAllocator {
    next: u32,
}

impl LabelAllocator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics if `variance` is not positive.
    pub fn fresh(&mut self, kind: GeneratorKind, variance: Rational) -> GeneratorLabel {
        assert!(variance.is_positive(), "generator variance must be positive");
        let id = self.next;
        self.next += 1;
        GeneratorLabel(Arc::new(LabelData { id, kind, variance }))
    }

    pub fn semicircular(&mut self, variance: Rational) -> GeneratorLabel {
        self.fresh(GeneratorKind::Semicircular, variance)
    }

    pub fn circular(&mut self, variance: Rational) -> GeneratorLabel {
        self.fresh(GeneratorKind::Circular, variance)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    label: GeneratorLabel,
    starred: bool,
}

impl Letter {
    /// A self-adjoint label ignores `starred`.
    pub fn new(label: GeneratorLabel, starred: bool) -> Self {
        let starred = starred && label.kind() == GeneratorKind::Circular;
        Self { label, starred }
    }

    pub fn plain(label: &GeneratorLabel) -> Self {
        Self::new(label.clone(), false)
    }

    pub fn star(label: &GeneratorLabel) -> Self {
        Self::new(label.clone(), true)
    }

    pub fn label(&self) -> &GeneratorLabel {
        &self.label
    }

    pub fn starred(&self) -> bool {
        self.starred
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.label.clone(), !self.starred)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.label, if self.starred { "*" } else { "" })
    }
}

/// Pairwise covariance of two letters in a free semicircular/circular family.
pub fn covariance<'a>(x: &'a Letter, y: &Letter) -> Option<&'a Rational> {
    if x.label != y.label {
        return None;
    }
    match x.label.kind() {
        GeneratorKind::Semicircular => Some(x.label.variance()),
        GeneratorKind::Circular if x.starred != y.starred => Some(x.label.variance()),
        GeneratorKind::Circular => None,
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgWord(Vec<Letter>);

impl AlgWord {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &AlgWord) -> AlgWord {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        AlgWord(v)
    }

    pub fn adjoint(&self) -> AlgWord {
        AlgWord(self.0.iter().rev().map(Letter::adjoint).collect())
    }
}

impl fmt::Debug for AlgWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

fn moment_of(letters: &[Letter]) -> Rational {
    if letters.is_empty() {
        return Rational::one();
    }
    if letters.len() % 2 == 1 {
        return Rational::zero();
    }
    let first = &letters[0];
    let mut total = Rational::zero();
    // the first letter pairs with an odd offset so both remaining blocks stay even
    for j in (1..letters.len()).step_by(2) {
        let Some(c) = covariance(first, &letters[j]) else { continue };
        let inner = moment_of(&letters[1..j]);
        if inner.is_zero() {
            continue;
        }
        let outer = moment_of(&letters[j + 1..]);
        if outer.is_zero() {
            continue;
        }
        total += c * inner * outer;
    }
    total
}

/// `τ` of a word: the sum over non-crossing pairings of the word's positions of
/// the product of pairwise covariances.
pub fn wick_moment(word: &AlgWord) -> Rational {
    moment_of(&word.0)
}

/// A noncommutative polynomial in free generators with exact coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgElement<C = Rational> {
    terms: BTreeMap<AlgWord, C>,
}

impl<C: Coefficient> Default for AlgElement<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> AlgElement<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        Self::scalar(C::one())
    }

    pub fn scalar(c: C) -> Self {
        let mut e = Self::zero();
        e.add_term(AlgWord::empty(), c);
        e
    }

    pub fn from_word(word: AlgWord) -> Self {
        let mut e = Self::zero();
        e.add_term(word, C::one());
        e
    }

    pub fn letter(letter: Letter) -> Self {
        Self::from_word(AlgWord(vec![letter]))
    }

    pub fn generator(label: &GeneratorLabel) -> Self {
        Self::letter(Letter::plain(label))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AlgWord, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest word length present.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(AlgWord::len).max().unwrap_or(0)
    }

    /// Adds `c·word`, dropping the entry if it cancels.
    pub fn add_term(&mut self, word: AlgWord, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, q: &C) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.clone() * q.clone())).collect() }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.adjoint(), c.conj());
        }
        out
    }

    pub fn is_selfadjoint(&self) -> bool {
        *self == self.adjoint()
    }

    /// Coefficient of the empty word.
    pub fn scalar_part(&self) -> C {
        self.terms.get(&AlgWord::empty()).cloned().unwrap_or_else(C::zero)
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> AlgElement<D> {
        let mut out = AlgElement::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

/// The trace: linear extension of [`wick_moment`].
pub fn alg_trace<C: Coefficient>(x: &AlgElement<C>) -> C {
    let mut total = C::zero();
    for (w, c) in &x.terms {
        let m = wick_moment(w);
        if !m.is_zero() {
            total = total + c.clone() * C::from_rational(m);
        }
    }
    total
}

impl<C: Coefficient> fmt::Debug for AlgElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})·{w:?}")?;
        }
        Ok(())
    }
}

impl<C: Coefficient> Add for &AlgElement<C> {
    type Output = AlgElement<C>;
    fn add(self, rhs: Self) -> AlgElement<C> {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for &AlgElement<C> {
    type Output = AlgElement<C>;
    fn sub(self, rhs: Self) -> AlgElement<C> {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl<C: Coefficient> Neg for &AlgElement<C> {
    type Output = AlgElement<C>;
    fn neg(self) -> AlgElement<C> {
        AlgElement { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c.clone())).collect() }
    }
}

impl<C: Coefficient> Mul for &AlgElement<C> {
    type Output = AlgElement<C>;
    fn mul(self, rhs: Self) -> AlgElement<C> {
        let mut out = AlgElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), a.clone() * b.clone());
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coefficient> $tr for AlgElement<C> {
            type Output = AlgElement<C>;
            fn $m(self, rhs: Self) -> AlgElement<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
