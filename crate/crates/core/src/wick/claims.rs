use serde::Serialize;

use super::algebra::{alg_trace, format_rational, rat, Rational};
use super::matrix::{matrix_trace, SymbolicMatrix};
use crate::error::{domain, resource, Result};

/// Guard on the induction depth evaluated by [`prop31_claims`].
pub const MAX_CLAIM_ORDER: usize = 6;

#[derive(Debug, Clone, Serialize)]
pub struct ClaimItem {
    pub claim: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub n: usize,
    pub i0: usize,
    pub j0: usize,
    pub m_max: usize,
    pub items: Vec<ClaimItem>,
    pub all_hold: bool,
}

impl ClaimReport {
    fn push(&mut self, claim: String, lhs: Rational, rhs: Rational) {
        let equal = lhs == rhs;
        self.items.push(ClaimItem { claim, lhs: format_rational(&lhs), rhs: format_rational(&rhs), equal });
    }
}

struct Side<'a> {
    m: &'a SymbolicMatrix,
    powers: Vec<SymbolicMatrix>,
}

impl<'a> Side<'a> {
    fn new(m: &'a SymbolicMatrix, max_power: usize) -> Self {
        let mut powers = vec![SymbolicMatrix::identity(m.dim())];
        for t in 1..=max_power {
            powers.push(powers[t - 1].mul(m).expect("square"));
        }
        Self { m, powers }
    }

    /// `τ_M(e_{i0 i0} (M e_{j0 j0})^k M)`.
    fn corner_chain(&self, i0: usize, j0: usize, k: usize) -> Rational {
        let n = self.m.dim();
        let e_j = SymbolicMatrix::unit(n, j0, j0);
        let step = self.m.mul(&e_j).expect("square");
        let mut acc = SymbolicMatrix::unit(n, i0, i0);
        for _ in 0..k {
            acc = acc.mul(&step).expect("square");
        }
        matrix_trace(&acc.mul(self.m).expect("square"))
    }

    /// `τ_M((e_{s1}−1/n) M^{t1} ⋯ (e_{sl}−1/n) M^{tl})`.
    fn centered_alternation(&self, s: &[usize], t: &[usize]) -> Rational {
        let n = self.m.dim();
        let shift = SymbolicMatrix::identity(n).scale(&rat(1, n as i64));
        let mut acc = SymbolicMatrix::identity(n);
        for (&si, &ti) in s.iter().zip(t) {
            let e = SymbolicMatrix::unit(n, si, si).sub(&shift).expect("square");
            acc = acc.mul(&e).expect("square").mul(&self.powers[ti]).expect("square");
        }
        matrix_trace(&acc)
    }
}

/// Compositions `t₁, …, t_l` with `1 ≤ tᵢ ≤ m` and `Σ tᵢ ≤ m + 1`.
fn bounded_tuples(l: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(l: usize, m: usize, budget: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == l {
            out.push(acc.clone());
            return;
        }
        let slots_left = l - acc.len() - 1;
        for t in 1..=m {
            if t + slots_left > budget {
                break;
            }
            acc.push(t);
            go(l, m, budget - t, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(l, m, m + 1, &mut Vec::new(), &mut out);
    out
}

/// Evaluates both sides of the moment-matching claims for two self-adjoint
/// matrices `B` and `X` over the free algebra: the corner identities
/// `τ(b_ij b_ji) = τ(x_ij x_ji)` for `i, j ∈ {i0, j0}`, and for each
/// `m ≤ m_max` the five induction items (corner chains, diagonal powers,
/// centered alternations, extended chains, and `τ_M(B^{m+1}) = τ_M(X^{m+1})`).
/// Indices are 0-based.
pub fn prop31_claims(
    b: &SymbolicMatrix,
    x: &SymbolicMatrix,
    i0: usize,
    j0: usize,
    m_max: usize,
) -> Result<ClaimReport> {
    if m_max > MAX_CLAIM_ORDER {
        return resource(format!("claim order {m_max} exceeds guard {MAX_CLAIM_ORDER}"));
    }
    let n = b.dim();
    if x.dim() != n {
        return domain(format!("dimension mismatch: {} vs {}", n, x.dim()));
    }
    if i0 == j0 || i0 >= n || j0 >= n {
        return domain(format!("need distinct indices below {n}, got ({i0}, {j0})"));
    }
    if !b.is_selfadjoint() || !x.is_selfadjoint() {
        return domain("both matrices must be self-adjoint");
    }
    let mut report = ClaimReport { n, i0, j0, m_max, items: Vec::new(), all_hold: true };
    let sb = Side::new(b, m_max + 1);
    let sx = Side::new(x, m_max + 1);
    let one = |i: usize| i + 1;

    report.push("matching τ(B)".into(), matrix_trace(b), matrix_trace(x));
    report.push("matching τ(B²)".into(), matrix_trace(&sb.powers[2]), matrix_trace(&sx.powers[2]));

    for &i in &[i0, j0] {
        for &j in &[i0, j0] {
            let lhs = alg_trace(&(b.entry(i, j) * b.entry(j, i)));
            let rhs = alg_trace(&(x.entry(i, j) * x.entry(j, i)));
            report.push(format!("I i={} j={}", one(i), one(j)), lhs, rhs);
        }
    }

    for m in 1..=m_max {
        report.push(format!("II(i) m={m}"), sb.corner_chain(i0, j0, m - 1), sx.corner_chain(i0, j0, m - 1));
        report.push(
            format!("II(ii) m={m}"),
            alg_trace(&b.entry(j0, j0).pow(m as u32)),
            alg_trace(&x.entry(j0, j0).pow(m as u32)),
        );
        for l in 2..=m {
            for t in bounded_tuples(l, m) {
                for mask in 0..(1usize << l) {
                    let s: Vec<usize> = (0..l).map(|k| if mask >> k & 1 == 0 { i0 } else { j0 }).collect();
                    let s_desc: Vec<String> = s.iter().map(|&v| one(v).to_string()).collect();
                    let t_desc: Vec<String> = t.iter().map(|v| v.to_string()).collect();
                    report.push(
                        format!("II(iii) m={m} s=({}) t=({})", s_desc.join(","), t_desc.join(",")),
                        sb.centered_alternation(&s, &t),
                        sx.centered_alternation(&s, &t),
                    );
                }
            }
        }
        report.push(format!("II(iv) m={m}"), sb.corner_chain(i0, j0, m), sx.corner_chain(i0, j0, m));
        report.push(
            format!("II(v) m={m}"),
            matrix_trace(&sb.powers[m + 1]),
            matrix_trace(&sx.powers[m + 1]),
        );
    }
    report.all_hold = report.items.iter().all(|c| c.equal);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::wick::algebra::{AlgElement, LabelAllocator};
    use crate::wick::matrix::build_voiculescu_symbolic;

    #[test]
    fn tuple_enumeration() {
        // m = 2: pairs with entries ≤ 2 and sum ≤ 3
        assert_eq!(bounded_tuples(2, 2), vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
        assert_eq!(bounded_tuples(3, 2), vec![vec![1, 1, 1]]);
        assert!(bounded_tuples(3, 1).is_empty());
    }

    #[test]
    fn identical_matrices_agree() {
        let mut alloc = LabelAllocator::new();
        let b = build_voiculescu_symbolic(2, 1, &mut alloc).unwrap().remove(0);
        let report = prop31_claims(&b, &b, 0, 1, 3).unwrap();
        assert!(report.all_hold);
    }

    #[test]
    fn independent_models_agree() {
        let mut alloc = LabelAllocator::new();
        let b = build_voiculescu_symbolic(2, 1, &mut alloc).unwrap().remove(0);
        let x = build_voiculescu_symbolic(2, 1, &mut alloc).unwrap().remove(0);
        let report = prop31_claims(&b, &x, 0, 1, 4).unwrap();
        assert!(report.all_hold);
        let last = report.items.iter().find(|c| c.claim == "II(v) m=4").unwrap();
        // τ_M(B⁵) = 0 for a centered semicircular element
        assert_eq!(last.lhs, "0/1");
        let v3 = report.items.iter().find(|c| c.claim == "II(v) m=3").unwrap();
        assert_eq!(v3.lhs, "2/1");
    }

    #[test]
    fn detects_mismatched_second_moment() {
        let mut alloc = LabelAllocator::new();
        let b = build_voiculescu_symbolic(2, 1, &mut alloc).unwrap().remove(0);
        let x = b.scale(&rat(2, 1));
        let report = prop31_claims(&b, &x, 0, 1, 2).unwrap();
        assert!(!report.all_hold);
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut alloc = LabelAllocator::new();
        let b = build_voiculescu_symbolic(2, 1, &mut alloc).unwrap().remove(0);
        let c = alloc.circular(rat(1, 1));
        let mut skew = b.clone();
        skew.set_entry(0, 1, AlgElement::generator(&c));
        assert!(matches!(prop31_claims(&b, &skew, 0, 1, 2), Err(Error::Domain(_))));
        assert!(matches!(prop31_claims(&b, &b, 0, 0, 2), Err(Error::Domain(_))));
        assert!(matches!(prop31_claims(&b, &b, 0, 1, 7), Err(Error::Resource(_))));
    }
}
