use std::fmt;

use num_traits::One;

use super::algebra::{alg_trace, rat, AlgElement, Coefficient, LabelAllocator, Letter, Rational};
use crate::error::{domain, Error, Result};

/// An n×n matrix over the free algebra, i.e. an element of `N ⊗ M_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct SymbolicMatrix<C = Rational> {
    n: usize,
    entries: Vec<AlgElement<C>>,
}

impl<C: Coefficient> SymbolicMatrix<C> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> AlgElement<C>) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _| AlgElement::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { AlgElement::identity() } else { AlgElement::zero() })
    }

    /// The matrix unit `I ⊗ e_ij` (0-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        Self::from_fn(n, |p, q| if p == i && q == j { AlgElement::identity() } else { AlgElement::zero() })
    }

    /// `x ⊗ I`: a single algebra element viewed as a 1×1 matrix when `n == 1`.
    pub fn scalar_matrix(n: usize, x: &AlgElement<C>) -> Self {
        Self::from_fn(n, |i, j| if i == j { x.clone() } else { AlgElement::zero() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgElement<C> {
        &self.entries[i * self.n + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, x: AlgElement<C>) {
        self.entries[i * self.n + j] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(AlgElement::is_zero)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.entry(j, i).adjoint())
    }

    pub fn is_selfadjoint(&self) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| *self.entry(i, j) == self.entry(j, i).adjoint()))
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return domain(format!("dimension mismatch: {} vs {}", self.n, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self { n: self.n, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, q: &C) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|a| a.scale(q)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        Ok(Self::from_fn(n, |i, j| {
            let mut acc = AlgElement::zero();
            for k in 0..n {
                let (a, b) = (self.entry(i, k), other.entry(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self).expect("same dimension");
        }
        acc
    }

    /// `M − τ_M(M)·I`.
    pub fn centered(&self) -> Self {
        let t = matrix_trace(self);
        self.sub(&Self::identity(self.n).scale(&t)).expect("same dimension")
    }
}

/// The canonical trace `τ_M(A) = (1/n)·Σᵢ τ(a_ii)`.
pub fn matrix_trace<C: Coefficient>(m: &SymbolicMatrix<C>) -> C {
    let mut total = C::zero();
    for i in 0..m.n {
        total = total + alg_trace(m.entry(i, i));
    }
    total * C::from_rational(Rational::new(One::one(), (m.n as i64).into()))
}

impl<C: Coefficient> fmt::Debug for SymbolicMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymbolicMatrix({}×{})", self.n, self.n)?;
        for i in 0..self.n {
            for j in 0..self.n {
                writeln!(f, "  [{i},{j}] {:?}", self.entry(i, j))?;
            }
        }
        Ok(())
    }
}

/// How the last column of a Voiculescu matrix is populated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum EntryModel {
    /// Circular off-diagonal entries everywhere.
    AllCircular,
    /// Positive quarter-circular entries in the last column.
    QuarterColumn,
}

/// A standard family of `count` self-adjoint `n×n` matrices over the free
/// algebra, every entry of variance `1/n` (so `τ_M(A_k²) = 1`): fresh
/// semicircular labels on the diagonal, fresh circular labels above it,
/// adjoints below.
pub fn build_voiculescu_symbolic(
    n: usize,
    count: usize,
    alloc: &mut LabelAllocator,
) -> Result<Vec<SymbolicMatrix>> {
    build_voiculescu_symbolic_with(n, count, EntryModel::AllCircular, alloc)
}

pub fn build_voiculescu_symbolic_with(
    n: usize,
    count: usize,
    model: EntryModel,
    alloc: &mut LabelAllocator,
) -> Result<Vec<SymbolicMatrix>> {
    if n < 2 {
        return domain(format!("Voiculescu matrices need n ≥ 2, got {n}"));
    }
    if count == 0 {
        return domain("family must contain at least one matrix");
    }
    if model == EntryModel::QuarterColumn {
        // odd quarter-circular moments involve 1/π and leave the rational field
        return Err(Error::Unsupported("quarter-circular entries are not representable exactly".into()));
    }
    let variance = rat(1, n as i64);
    let mut family = Vec::with_capacity(count);
    for _ in 0..count {
        let mut m = SymbolicMatrix::zero(n);
        for i in 0..n {
            let s = alloc.semicircular(variance.clone());
            m.set_entry(i, i, AlgElement::generator(&s));
            for j in i + 1..n {
                let c = alloc.circular(variance.clone());
                m.set_entry(i, j, AlgElement::letter(Letter::plain(&c)));
                m.set_entry(j, i, AlgElement::letter(Letter::star(&c)));
            }
        }
        family.push(m);
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalan;
    use crate::wick::algebra::{GeneratorKind, GaussianRational};
    use num_complex::Complex;
    use proptest::prelude::*;

    #[test]
    fn unit_relations() {
        let e12: SymbolicMatrix = SymbolicMatrix::unit(2, 0, 1);
        let e21 = SymbolicMatrix::unit(2, 1, 0);
        assert_eq!(e12.mul(&e21).unwrap(), SymbolicMatrix::unit(2, 0, 0));
        assert!(e21.mul(&e21).unwrap().is_zero());
        assert_eq!(matrix_trace(&SymbolicMatrix::<Rational>::identity(3)), rat(1, 1));
        assert_eq!(matrix_trace(&SymbolicMatrix::<Rational>::unit(2, 0, 0)), rat(1, 2));
    }

    #[test]
    fn dimension_mismatch() {
        let a: SymbolicMatrix = SymbolicMatrix::identity(2);
        let b = SymbolicMatrix::identity(3);
        assert!(matches!(a.mul(&b), Err(Error::Domain(_))));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn construction_readback() {
        let mut alloc = LabelAllocator::new();
        let fam = build_voiculescu_symbolic(2, 1, &mut alloc).unwrap();
        let a = &fam[0];
        for (i, j, kind) in [(0, 0, GeneratorKind::Semicircular), (1, 1, GeneratorKind::Semicircular), (0, 1, GeneratorKind::Circular)] {
            let (w, c) = a.entry(i, j).terms().next().unwrap();
            assert_eq!(*c, rat(1, 1));
            let l = &w.letters()[0];
            assert_eq!(l.label().kind(), kind);
            assert_eq!(*l.label().variance(), rat(1, 2));
        }
        assert!(a.entry(1, 0).terms().next().unwrap().0.letters()[0].starred());
        assert!(a.is_selfadjoint());
        assert_eq!(matrix_trace(&a.pow(2)), rat(1, 1));
    }

    #[test]
    fn quarter_column_rejected() {
        let mut alloc = LabelAllocator::new();
        let r = build_voiculescu_symbolic_with(3, 1, EntryModel::QuarterColumn, &mut alloc);
        assert!(matches!(r, Err(Error::Unsupported(_))));
        assert!(build_voiculescu_symbolic(1, 1, &mut alloc).is_err());
    }

    #[test]
    fn labels_distinct_across_family() {
        let mut alloc = LabelAllocator::new();
        let fam = build_voiculescu_symbolic(3, 2, &mut alloc).unwrap();
        let mut ids = Vec::new();
        for m in &fam {
            for i in 0..3 {
                for j in i..3 {
                    ids.push(m.entry(i, j).terms().next().unwrap().0.letters()[0].label().id());
                }
            }
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), ids.len());
    }

    #[test]
    fn voiculescu_matrix_is_semicircular_up_to_degree_six() {
        for n in [2usize, 3] {
            let mut alloc = LabelAllocator::new();
            let a = build_voiculescu_symbolic(n, 1, &mut alloc).unwrap().remove(0);
            for k in 1..=3u32 {
                assert_eq!(matrix_trace(&a.pow(2 * k)), rat(catalan(k) as i64, 1), "n={n} k={k}");
                assert_eq!(matrix_trace(&a.pow(2 * k - 1)), rat(0, 1));
            }
        }
    }

    /// Expands every circular letter as `x ± i·y` with `x`, `y` free semicircular
    /// of half the variance and checks the moments agree with the atomic encoding.
    #[test]
    fn circular_atoms_match_real_imaginary_expansion() {
        let mut alloc = LabelAllocator::new();
        let v = rat(2, 3);
        let c = alloc.circular(v.clone());
        let s = alloc.semicircular(rat(5, 4));
        let x = alloc.semicircular(&v / rat(2, 1));
        let y = alloc.semicircular(&v / rat(2, 1));
        let i: GaussianRational = Complex::new(rat(0, 1), rat(1, 1));
        let gx = AlgElement::<GaussianRational>::generator(&x);
        let gy = AlgElement::<GaussianRational>::generator(&y);
        let c_expanded = &gx + &gy.scale(&i);
        let cs_expanded = &gx - &gy.scale(&i);
        let pool = [Letter::plain(&c), Letter::star(&c), Letter::plain(&s)];
        for len in 1..=4usize {
            for code in 0..pool.len().pow(len as u32) {
                let mut k = code;
                let mut atomic = AlgElement::<GaussianRational>::identity();
                let mut expanded = AlgElement::<GaussianRational>::identity();
                for _ in 0..len {
                    let l = &pool[k % pool.len()];
                    k /= pool.len();
                    atomic = &atomic * &AlgElement::letter(l.clone());
                    let factor = if l.label() == &s {
                        AlgElement::letter(l.clone())
                    } else if l.starred() {
                        cs_expanded.clone()
                    } else {
                        c_expanded.clone()
                    };
                    expanded = &expanded * &factor;
                }
                assert_eq!(alg_trace(&atomic), alg_trace(&expanded), "code {code} len {len}");
            }
        }
    }

    fn small_matrix(seed: &[i8], alloc_pool: &[Letter]) -> SymbolicMatrix {
        SymbolicMatrix::from_fn(2, |i, j| {
            let base = 3 * (2 * i + j);
            let mut e = AlgElement::scalar(rat(seed[base] as i64, 1));
            e = &e + &AlgElement::letter(alloc_pool[(seed[base + 1].unsigned_abs() as usize) % alloc_pool.len()].clone())
                .scale(&rat(seed[base + 2] as i64, 2));
            let l = AlgElement::letter(alloc_pool[(seed[base + 2].unsigned_abs() as usize) % alloc_pool.len()].clone());
            &e + &(&l * &l)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn trace_is_tracial(a in proptest::collection::vec(-3i8..=3, 12), b in proptest::collection::vec(-3i8..=3, 12)) {
            let mut alloc = LabelAllocator::new();
            let s = alloc.semicircular(rat(1, 2));
            let c = alloc.circular(rat(1, 3));
            let pool = vec![Letter::plain(&s), Letter::plain(&c), Letter::star(&c)];
            let m = small_matrix(&a, &pool);
            let n = small_matrix(&b, &pool);
            prop_assert_eq!(matrix_trace(&m.mul(&n).unwrap()), matrix_trace(&n.mul(&m).unwrap()));
            let x = m.entry(0, 1);
            let y = n.entry(1, 1);
            prop_assert_eq!(alg_trace(&(x * y)), alg_trace(&(y * x)));
            prop_assert_eq!(m.mul(&n).unwrap().adjoint(), n.adjoint().mul(&m.adjoint()).unwrap());
        }
    }
}
