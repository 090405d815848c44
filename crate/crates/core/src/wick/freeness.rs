use num_traits::Zero;
use serde::Serialize;

use super::algebra::{format_rational, AlgElement, Rational};
use super::matrix::{matrix_trace, SymbolicMatrix};
use crate::error::{domain, resource, Result};

/// Word-degree guard for [`check_freeness`].
pub const MAX_FREENESS_DEGREE: usize = 8;
/// Word-degree guard for [`corollary32_check`].
pub const MAX_COROLLARY_DEGREE: usize = 6;

/// A named set of generators of a unital subalgebra.
#[derive(Debug, Clone)]
pub struct Family {
    pub name: String,
    pub generators: Vec<SymbolicMatrix>,
}

impl Family {
    pub fn new(name: impl Into<String>, generators: Vec<SymbolicMatrix>) -> Self {
        Self { name: name.into(), generators }
    }

    /// The diagonal algebra `D_n`, generated by the units `e_11, …, e_nn`.
    pub fn diagonal(n: usize) -> Self {
        Self::new("D", (0..n).map(|i| SymbolicMatrix::unit(n, i, i)).collect())
    }

    /// A family with one matrix generator.
    pub fn single(name: impl Into<String>, m: SymbolicMatrix) -> Self {
        Self::new(name, vec![m])
    }

    /// A family generated by one element of the entry algebra (a 1×1 matrix).
    pub fn element(name: impl Into<String>, x: &AlgElement) -> Self {
        Self::single(name, SymbolicMatrix::scalar_matrix(1, x))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub pattern: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreenessReport {
    pub max_degree: usize,
    pub checked: usize,
    pub all_zero: bool,
    pub violations: Vec<Violation>,
}

struct Monomial {
    label: String,
    degree: usize,
    centered: SymbolicMatrix,
}

/// Centered monomials `w − τ_M(w)·I` for words `w` in the family's generators
/// of length ≤ `max_degree`; duplicates and zeros are dropped, keeping the
/// shortest word for each value.
fn centered_monomials(family: &Family, max_degree: usize) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    let Some(first) = family.generators.first() else { return out };
    let n = first.dim();
    let mut frontier: Vec<(String, SymbolicMatrix)> = vec![(String::new(), SymbolicMatrix::identity(n))];
    for degree in 1..=max_degree {
        let mut next = Vec::new();
        for (label, word) in &frontier {
            for (g, gen) in family.generators.iter().enumerate() {
                let product = word.mul(gen).expect("family generators share a dimension");
                let tag = if family.generators.len() == 1 {
                    family.name.clone()
                } else {
                    format!("{}{}", family.name, g + 1)
                };
                let label = if label.is_empty() { tag } else { format!("{label}·{tag}") };
                let centered = product.centered();
                let seen = centered.is_zero() || out.iter().any(|m| m.centered == centered);
                if !seen {
                    out.push(Monomial { label: compress(&label), degree, centered });
                }
                next.push((label, product));
            }
        }
        frontier = next;
    }
    out
}

/// `A·A·A` → `A^3` for readable pattern strings.
fn compress(label: &str) -> String {
    let parts: Vec<&str> = label.split('·').collect();
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        let mut j = i;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        if j - i == 1 {
            out.push(parts[i].to_string());
        } else {
            out.push(format!("{}^{}", parts[i], j - i));
        }
        i = j;
    }
    out.join("·")
}

fn dfs(
    monomials: &[Vec<Monomial>],
    last: Option<usize>,
    remaining: usize,
    prefix: &SymbolicMatrix,
    pattern: &mut Vec<String>,
    report: &mut FreenessReport,
) {
    for (f, family) in monomials.iter().enumerate() {
        if Some(f) == last {
            continue;
        }
        for m in family.iter().filter(|m| m.degree <= remaining) {
            let product = prefix.mul(&m.centered).expect("families share a dimension");
            pattern.push(format!("({} − τ)", m.label));
            let value: Rational = matrix_trace(&product);
            report.checked += 1;
            if !value.is_zero() {
                report.violations.push(Violation { pattern: pattern.join("·"), value: format_rational(&value) });
            }
            dfs(monomials, Some(f), remaining - m.degree, &product, pattern, report);
            pattern.pop();
        }
    }
}

/// Verifies `τ_M(x₁⋯x_k) = 0` for every alternating product of centered
/// monomials drawn from distinct consecutive families with total degree
/// ≤ `max_degree`.
pub fn check_freeness(families: &[Family], max_degree: usize) -> Result<FreenessReport> {
    if max_degree > MAX_FREENESS_DEGREE {
        return resource(format!("freeness degree {max_degree} exceeds guard {MAX_FREENESS_DEGREE}"));
    }
    let dims: Vec<usize> = families.iter().flat_map(|f| f.generators.iter().map(SymbolicMatrix::dim)).collect();
    if dims.windows(2).any(|w| w[0] != w[1]) {
        return domain("all families must act on the same matrix size");
    }
    let mut report = FreenessReport { max_degree, checked: 0, all_zero: true, violations: Vec::new() };
    let Some(&n) = dims.first() else { return Ok(report) };
    let monomials: Vec<Vec<Monomial>> = families.iter().map(|f| centered_monomials(f, max_degree)).collect();
    let mut pattern = Vec::new();
    dfs(&monomials, None, max_degree, &SymbolicMatrix::identity(n), &mut pattern, &mut report);
    report.all_zero = report.violations.is_empty();
    Ok(report)
}

/// Families `{D_n}, {A₁}, …, {A_m}` for a standard Voiculescu family.
pub fn standard_families(family: &[SymbolicMatrix]) -> Vec<Family> {
    let mut out = Vec::new();
    if let Some(first) = family.first() {
        out.push(Family::diagonal(first.dim()));
    }
    for (k, a) in family.iter().enumerate() {
        out.push(Family::single(format!("A{}", k + 1), a.clone()));
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryFreeness {
    /// Human-readable description of the entry family.
    pub family: String,
    pub report: FreenessReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorollaryReport {
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub diagonal: Vec<EntryFreeness>,
    pub products: Vec<EntryFreeness>,
    pub all_free: bool,
}

/// For a family `A⁽¹⁾, …, A⁽ᵐ⁾` checks, inside the entry algebra, that
/// (i) `{a_ii⁽¹⁾, …, a_ii⁽ᵐ⁾}` is free for each `i`, and (ii)
/// `{a_ij₁⁽¹⁾a_ij₁⁽¹⁾*, …, a_ijₘ⁽ᵐ⁾a_ijₘ⁽ᵐ⁾*}` is free for each `i` and each
/// column choice `j₁, …, jₘ`.
pub fn corollary32_check(family: &[SymbolicMatrix], max_degree: usize) -> Result<CorollaryReport> {
    if max_degree > MAX_COROLLARY_DEGREE {
        return resource(format!("corollary degree {max_degree} exceeds guard {MAX_COROLLARY_DEGREE}"));
    }
    let Some(first) = family.first() else {
        return domain("corollary check needs a non-empty family");
    };
    let n = first.dim();
    if family.iter().any(|a| a.dim() != n) {
        return domain("all matrices of the family must share a dimension");
    }
    let m = family.len();
    let mut diagonal = Vec::new();
    let mut products = Vec::new();
    for i in 0..n {
        let fams: Vec<Family> = family
            .iter()
            .enumerate()
            .map(|(k, a)| Family::element(format!("a{}{}^({})", i + 1, i + 1, k + 1), a.entry(i, i)))
            .collect();
        diagonal.push(EntryFreeness {
            family: format!("diagonal i={}", i + 1),
            report: check_freeness(&fams, max_degree)?,
        });
        // every column choice j_1..j_m
        let mut cols = vec![0usize; m];
        loop {
            let fams: Vec<Family> = family
                .iter()
                .zip(&cols)
                .enumerate()
                .map(|(k, (a, &j))| {
                    let x = a.entry(i, j);
                    Family::element(format!("a{}{}^({})a*", i + 1, j + 1, k + 1), &(x * &x.adjoint()))
                })
                .collect();
            let desc: Vec<String> = cols.iter().map(|j| (j + 1).to_string()).collect();
            products.push(EntryFreeness {
                family: format!("products i={} j=({})", i + 1, desc.join(",")),
                report: check_freeness(&fams, max_degree)?,
            });
            let mut pos = 0;
            while pos < m {
                cols[pos] += 1;
                if cols[pos] < n {
                    break;
                }
                cols[pos] = 0;
                pos += 1;
            }
            if pos == m {
                break;
            }
        }
    }
    let all_free = diagonal.iter().chain(&products).all(|e| e.report.all_zero);
    Ok(CorollaryReport { n, m, max_degree, diagonal, products, all_free })
}
