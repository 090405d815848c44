//! Acceptance run: one line per criterion, nonzero exit if any fails.
//! Run alone with `cargo test -p freelab --test acceptance`.

use std::time::{Duration, Instant};

use freelab::catalan;
use freelab::commands::{run_args, EXIT_PASS};
use freelab::perturb::{fprime_l2, l2_distance_g_f, sum_abs_coeffs, verify_lemma42, PerturbationProfile};
use freelab::rmt::linalg::frobenius;
use freelab::rmt::{
    block_moments, conditional_expectation_onto_ik, estimate_en_norm, haar_unitary, hermitian_eigen, matdist_curve,
    polar_decompose, sample_ginibre, sample_gue, Conjugation, MatrixUnits, RngStream,
};
use freelab::wick::{build_voiculescu_symbolic, matrix_trace, rat, EntryModel, LabelAllocator};
use serde_json::Value;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn json(args: &[&str]) -> (i32, Value, Duration) {
    let start = Instant::now();
    let out = run_args(args.iter().copied());
    let v = serde_json::from_str(&out.text).unwrap_or(Value::Null);
    (out.code, v, start.elapsed())
}

fn c1_exact_freeness() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for (n, l) in [("2", "6"), ("3", "4")] {
        let (code, v, dt) = json(&["freeness", "--n", n, "--L", l, "--seed", "1"]);
        let checked = v["result"]["checked"].as_u64().unwrap_or(0);
        let good = code == EXIT_PASS && v["result"]["all_zero"] == true && checked > 0 && dt.as_secs_f64() <= 60.0;
        pass &= good;
        detail.push(format!("n={n} L={l}: {checked} traces zero in {:.2}s", dt.as_secs_f64()));
    }
    ok(pass, detail.join("; "))
}

fn c2_semicircular_matrix() -> Outcome {
    let mut alloc = LabelAllocator::new();
    let a = build_voiculescu_symbolic(2, 1, &mut alloc).unwrap().remove(0);
    let mut got = Vec::new();
    let mut pass = true;
    for k in 1..=3u32 {
        let t = matrix_trace(&a.pow(2 * k));
        pass &= t == rat(catalan(k) as i64, 1);
        got.push(t.to_string());
    }
    ok(pass, format!("τ_M(A^2,A^4,A^6) = {}", got.join(", ")))
}

fn c3_moment_claims() -> Outcome {
    let (code, v, _) = json(&["prop31", "--n", "2", "--m-max", "4"]);
    let items = v["result"]["items"].as_array().map_or(0, |a| a.len());
    let pass = code == EXIT_PASS && v["result"]["all_hold"] == true && items > 0;
    ok(pass, format!("{items} exact equalities, m ≤ 4"))
}

fn c4_diagonal_entries() -> Outcome {
    let (code, v, _) = json(&["cor32", "--n", "2", "--m", "2", "--L", "4"]);
    ok(code == EXIT_PASS && v["result"]["all_free"] == true, "n=2 m=2 L=4 diagonal and product families")
}

fn c5_fourier_bounds() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for r in [0.2, 0.1, 0.05, 0.01] {
        let p = PerturbationProfile::with_tolerance(r, 1e-8).unwrap();
        let f = sum_abs_coeffs(&p, 200).unwrap();
        let d = l2_distance_g_f(&p).unwrap();
        let e = fprime_l2(&p).total;
        let energy_ok = r > 0.05 || e <= 5.0 * r;
        pass &= f.sum_abs <= 5f64.sqrt() * r.sqrt() && d.value <= 2.0 * r.powi(3) && energy_ok;
        detail.push(format!("r={r}: Σ|c_k|={:.4}/{:.4} ∫|g-f|²={:.2e}/{:.2e} ∫|f'|²={:.4}", f.sum_abs, f.bound, d.value, d.bound, e));
    }
    let dt = start.elapsed().as_secs_f64();
    pass &= dt <= 30.0;
    ok(pass, format!("{} ({dt:.1}s)", detail.join("; ")))
}

fn c6_contractions() -> Outcome {
    let p = PerturbationProfile::new(0.05).unwrap();
    let rep = verify_lemma42(&p, 256, 1000, SEED).unwrap();
    ok(
        rep.pass && rep.violations == 0,
        format!("1000 trials N=256: {} violations, max excess {:.3e}", rep.violations, rep.max_excess),
    )
}

fn c7_en_norm() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut detail = Vec::new();
    for n in [4, 8, 16] {
        let s = estimate_en_norm(n, 64, 20, Conjugation::RandomDiagonal, SEED).unwrap();
        pass &= s.max <= s.bound;
        detail.push(format!("n={n}: max {:.4} ≤ {:.4}", s.max, s.bound));
    }
    let scaling: Vec<_> = [32, 64, 128]
        .iter()
        .map(|&big| estimate_en_norm(4, big, 20, Conjugation::RandomDiagonal, SEED).unwrap())
        .collect();
    for w in scaling.windows(2) {
        pass &= w[1].mean <= w[0].mean + w[0].std_error;
    }
    let means: Vec<String> =
        scaling.iter().map(|s| format!("{:.4}±{:.4}", s.mean, s.std_error)).collect();
    let dt = start.elapsed().as_secs_f64();
    pass &= dt <= 600.0;
    ok(pass, format!("{}; n=4 means N=32,64,128: {} ({dt:.1}s)", detail.join(", "), means.join(" → ")))
}

fn c8_matricial_distance() -> Outcome {
    let big = matdist_curve(512, &[8], 10, SEED).unwrap().rows.remove(0);
    let small = matdist_curve(256, &[8], 10, SEED).unwrap().rows.remove(0);
    ok(
        big.mean_ratio >= 0.95 && big.mean_ek_norm < small.mean_ek_norm,
        format!(
            "N=512 ratio {:.5}; mean ‖E_8(b)‖₂ {:.5} (N=512) vs {:.5} (N=256)",
            big.mean_ratio, big.mean_ek_norm, small.mean_ek_norm
        ),
    )
}

fn c9_free_group() -> Outcome {
    let (code, v, _) = json(&["fgroup", "--trials", "200"]);
    let r = &v["result"];
    ok(
        code == EXIT_PASS && r["violations"] == 0 && r["exact_mismatches"] == 0 && r["norm_sum_violations"] == 0,
        format!(
            "200 triples: {} bound violations, {} identity mismatches, {} norm-sum violations",
            r["violations"], r["exact_mismatches"], r["norm_sum_violations"]
        ),
    )
}

fn c10_kernels() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for n in [16usize, 64, 256] {
        let (mut eig_worst, mut polar_worst) = (0.0f64, 0.0f64);
        for t in 0..50 {
            let mut rng = RngStream::new(SEED, (n * 1000 + t) as u64);
            let a = sample_gue(n, 1.0, &mut rng).unwrap();
            let e = hermitian_eigen(&a).unwrap();
            let fa = frobenius(a.matrix());
            let scale = (n as f64).sqrt();
            eig_worst = eig_worst.max((e.residual(&a) / fa).max(e.unitarity_defect() / scale));
            let c = sample_ginibre(n, 1.0, &mut rng).unwrap();
            let p = polar_decompose(&c).unwrap();
            polar_worst = polar_worst.max((p.residual(&c) / frobenius(&c)).max(p.unitarity_defect() / scale));
        }
        pass &= eig_worst <= 1e-8 && polar_worst <= 1e-8;
        detail.push(format!("N={n}: eig {eig_worst:.1e} polar {polar_worst:.1e}"));
    }
    let mut pyth_worst = 0.0f64;
    for t in 0..100u64 {
        let mut rng = RngStream::new(SEED ^ 0xE4, t);
        let k = [1, 2, 4, 8, 16][(t % 5) as usize];
        let b = sample_gue(64, 1.0, &mut rng).unwrap();
        let units = MatrixUnits::from_frame(haar_unitary(64, &mut rng).unwrap(), k).unwrap();
        let e = conditional_expectation_onto_ik(&b, &units).unwrap();
        let nb = frobenius(b.matrix()).powi(2);
        let ne = frobenius(e.matrix()).powi(2);
        let nr = frobenius(&(b.matrix() - e.matrix())).powi(2);
        pyth_worst = pyth_worst.max((nb - ne - nr).abs() / nb);
    }
    pass &= pyth_worst <= 1e-8;
    detail.push(format!("Pythagoras {pyth_worst:.1e}"));
    ok(pass, detail.join("; "))
}

fn c11_cross_engine() -> Outcome {
    let mc = block_moments(2, 256, EntryModel::AllCircular, 6, 50, SEED).unwrap();
    let mut alloc = LabelAllocator::new();
    let a = build_voiculescu_symbolic(2, 1, &mut alloc).unwrap().remove(0);
    let mut worst = 0.0f64;
    let mut pairs = Vec::new();
    for m in 1..=6u32 {
        let exact = matrix_trace(&a.pow(m));
        let exact = exact.numer().to_string().parse::<f64>().unwrap() / exact.denom().to_string().parse::<f64>().unwrap();
        let d = (mc[m as usize - 1] - exact).abs();
        worst = worst.max(d);
        pairs.push(format!("{exact}/{:.4}", mc[m as usize - 1]));
    }
    ok(worst <= 0.05, format!("exact/MC m=1..6: {}; max gap {worst:.4}", pairs.join(" ")))
}

fn c12_determinism() -> Outcome {
    let configs: [&[&str]; 9] = [
        &["moments", "--kind", "quarter", "--radius", "3"],
        &["freeness", "--n", "2", "--L", "4"],
        &["prop31", "--m-max", "2"],
        &["cor32", "--L", "2"],
        &["perturb", "--r", "0.05", "--K", "20", "--N", "32", "--trials", "10"],
        &["rmt", "--n", "4", "--N", "16", "--trials", "3", "--seed", "9"],
        &["rmt", "--n", "2", "--N", "8", "--trials", "2", "--mode", "adversarial", "--iterations", "20"],
        &["matdist", "--N", "32", "--k", "1,2,4", "--trials", "2"],
        &["fgroup", "--trials", "20", "--seed", "77"],
    ];
    let mut same = 0;
    for args in configs {
        for fmt in ["json", "csv"] {
            let mut full = vec!["--format", fmt];
            full.extend_from_slice(args);
            let a = run_args(full.iter().copied());
            let b = run_args(full.iter().copied());
            if a == b && a.is_report && !a.text.is_empty() {
                same += 1;
            }
        }
    }
    let total = configs.len() * 2;
    ok(same == total, format!("{same}/{total} command/format pairs byte-identical across two runs"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("exact freeness of D_n and the matrix family", c1_exact_freeness),
        ("semicircular even moments of the n=2 matrix", c2_semicircular_matrix),
        ("moment-matching claims for two independent models", c3_moment_claims),
        ("freeness of diagonal entries and entry products", c4_diagonal_entries),
        ("Fourier mass, derivative energy and L2 distance bounds", c5_fourier_bounds),
        ("contraction inequality at r=0.05", c6_contractions),
        ("block-trace conditional expectation norm and scaling", c7_en_norm),
        ("finite-N matricial distance", c8_matricial_distance),
        ("free group three-term split and bounds", c9_free_group),
        ("eigensolver, polar and Pythagoras self-validation", c10_kernels),
        ("exact vs Monte Carlo matrix moments", c11_cross_engine),
        ("byte-identical reports", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!("criterion {:>2} {tag} [{:.1}s] {name}: {}", i + 1, start.elapsed().as_secs_f64(), out.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
