use serde::Serialize;

use crate::error::{domain, resource, Result};

/// Largest set size accepted by [`enumerate_nc_pairings`].
pub const MAX_PAIRING_SIZE: usize = 16;

/// A non-crossing pair partition of `{0, …, 2k−1}`; pairs are `(i, j)` with
/// `i < j`, listed by increasing `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct NCPairing(Vec<(usize, usize)>);

impl NCPairing {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.0
    }

    pub fn size(&self) -> usize {
        2 * self.0.len()
    }

    pub fn is_non_crossing(&self) -> bool {
        self.0.iter().all(|&(a, b)| self.0.iter().all(|&(c, d)| !(a < c && c < b && b < d)))
    }
}

fn extend(lo: usize, hi: usize, out: &mut Vec<Vec<(usize, usize)>>) {
    if lo >= hi {
        out.push(Vec::new());
        return;
    }
    for j in (lo + 1..hi).step_by(2) {
        let mut inner = Vec::new();
        extend(lo + 1, j, &mut inner);
        let mut outer = Vec::new();
        extend(j + 1, hi, &mut outer);
        for a in &inner {
            for b in &outer {
                let mut p = Vec::with_capacity(1 + a.len() + b.len());
                p.push((lo, j));
                p.extend_from_slice(a);
                p.extend_from_slice(b);
                out.push(p);
            }
        }
    }
}

/// All non-crossing pairings of an even-sized ordered set.
pub fn enumerate_nc_pairings(size: usize) -> Result<Vec<NCPairing>> {
    if size == 0 || size % 2 == 1 {
        return domain(format!("pairings need an even positive size, got {size}"));
    }
    if size > MAX_PAIRING_SIZE {
        return resource(format!("pairing size {size} exceeds guard {MAX_PAIRING_SIZE}"));
    }
    let mut raw = Vec::new();
    extend(0, size, &mut raw);
    Ok(raw
        .into_iter()
        .map(|mut p| {
            p.sort_unstable();
            NCPairing(p)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalan;
    use crate::error::Error;
    use crate::wick::algebra::{rat, wick_moment, AlgWord, LabelAllocator, Letter, Rational, covariance};
    use num_traits::Zero;
    use std::collections::BTreeSet;

    /// Every pair partition of `{0..size}`, crossing or not.
    fn all_pair_partitions(size: usize) -> Vec<Vec<(usize, usize)>> {
        fn go(rest: Vec<usize>, acc: Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
            if rest.is_empty() {
                let mut a = acc;
                a.sort_unstable();
                out.push(a);
                return;
            }
            let first = rest[0];
            for k in 1..rest.len() {
                let mut acc2 = acc.clone();
                acc2.push((first, rest[k]));
                let rest2: Vec<usize> = rest.iter().enumerate().filter(|&(i, _)| i != 0 && i != k).map(|(_, &v)| v).collect();
                go(rest2, acc2, out);
            }
        }
        let mut out = Vec::new();
        go((0..size).collect(), Vec::new(), &mut out);
        out
    }

    fn brute_nc(size: usize) -> BTreeSet<NCPairing> {
        all_pair_partitions(size).into_iter().map(NCPairing).filter(|p| p.is_non_crossing()).collect()
    }

    #[test]
    fn small_sizes() {
        let two = enumerate_nc_pairings(2).unwrap();
        assert_eq!(two, vec![NCPairing(vec![(0, 1)])]);
        assert_eq!(all_pair_partitions(4).len(), 3);
        assert_eq!(enumerate_nc_pairings(4).unwrap().len(), 2);
        assert_eq!(all_pair_partitions(6).len(), 15);
        assert_eq!(enumerate_nc_pairings(6).unwrap().len(), 5);
    }

    #[test]
    fn matches_filtered_brute_force() {
        for size in (2..=10).step_by(2) {
            let got: BTreeSet<NCPairing> = enumerate_nc_pairings(size).unwrap().into_iter().collect();
            assert_eq!(got, brute_nc(size), "size {size}");
        }
    }

    #[test]
    fn catalan_counts_without_duplicates() {
        for k in 1..=8u32 {
            let ps = enumerate_nc_pairings(2 * k as usize).unwrap();
            assert_eq!(ps.len() as u64, catalan(k));
            let distinct: BTreeSet<_> = ps.iter().cloned().collect();
            assert_eq!(distinct.len(), ps.len());
            assert!(ps.iter().all(NCPairing::is_non_crossing));
        }
    }

    #[test]
    fn guards() {
        assert!(matches!(enumerate_nc_pairings(3), Err(Error::Domain(_))));
        assert!(matches!(enumerate_nc_pairings(0), Err(Error::Domain(_))));
        assert!(matches!(enumerate_nc_pairings(18), Err(Error::Resource(_))));
    }

    #[test]
    fn recursive_moment_equals_sum_over_enumerated_pairings() {
        let mut alloc = LabelAllocator::new();
        let s1 = alloc.semicircular(rat(1, 2));
        let s2 = alloc.semicircular(rat(3, 1));
        let c = alloc.circular(rat(2, 3));
        let pool = [Letter::plain(&s1), Letter::plain(&s2), Letter::plain(&c), Letter::star(&c)];
        // exhaustive words of length 4 and 6 over the pool
        for len in [4usize, 6] {
            let total = pool.len().pow(len as u32);
            let pairings = enumerate_nc_pairings(len).unwrap();
            for code in 0..total {
                let mut x = code;
                let letters: Vec<Letter> = (0..len)
                    .map(|_| {
                        let l = pool[x % pool.len()].clone();
                        x /= pool.len();
                        l
                    })
                    .collect();
                let mut expect = Rational::zero();
                for p in &pairings {
                    let mut prod = rat(1, 1);
                    for &(i, j) in p.pairs() {
                        match covariance(&letters[i], &letters[j]) {
                            Some(v) => prod *= v.clone(),
                            None => {
                                prod = Rational::zero();
                                break;
                            }
                        }
                    }
                    expect += prod;
                }
                assert_eq!(wick_moment(&AlgWord::new(letters)), expect);
            }
        }
    }
}
