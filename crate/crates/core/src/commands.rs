//! Seeded batch commands behind the `freelab` binary.
//!
//! Every command returns a [`Report`] (JSON) and a list of [`CsvRow`]s. Exit
//! codes: 0 all checks pass, 1 a bound or identity fails (or a numerical
//! method fails to converge), 2 usage or domain error, 3 resource guard or
//! output failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::fgroup::{fgroup_trials, norm_e, norm_s, random_element};
use crate::perturb::{perturb_report, PerturbationProfile};
use crate::quad::QuadOptions;
use crate::report::{to_csv, CsvRow, Report};
use crate::rmt::{estimate_en_norm_with, matdist_curve, Conjugation, EnNormOptions, RngStream};
use crate::scdist::{qc_moment, qc_moment_quadrature, sc_moment, sc_moment_quadrature, QuarterCircleLaw, SemicircleLaw};
use crate::wick::{
    build_voiculescu_symbolic, check_freeness, corollary32_check, prop31_claims, standard_families, FreenessReport,
    LabelAllocator,
};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_601;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LawKind {
    Semicircle,
    Quarter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    None,
    RandomDiagonal,
    Adversarial,
}

impl From<Mode> for Conjugation {
    fn from(m: Mode) -> Self {
        match m {
            Mode::None => Conjugation::None,
            Mode::RandomDiagonal => Conjugation::RandomDiagonal,
            Mode::Adversarial => Conjugation::Adversarial,
        }
    }
}

#[derive(Debug, Clone, Parser)]
#[command(name = "freelab", version, about = "Seeded verification runs for free-probability computations")]
pub struct RunConfig {
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Closed-form vs quadrature moments of a semicircle or quarter-circle law.
    Moments(MomentsArgs),
    /// Exact freeness of the diagonal scalars D_n and a standard matrix family.
    Freeness(FreenessArgs),
    /// Exact moment-matching claims for two independently labeled matrices.
    Prop31(Prop31Args),
    /// Exact freeness of diagonal entries and entry products of a family.
    Cor32(Cor32Args),
    /// Perturbation bounds: Fourier mass, derivative energy, L2 distance, contractions.
    Perturb(PerturbArgs),
    /// Monte Carlo norm of the block-trace conditional expectation.
    Rmt(RmtArgs),
    /// Finite-N matricial distance curve.
    Matdist(MatdistArgs),
    /// Three-term trace split and its bounds in the free group algebra.
    Fgroup(FgroupArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MomentsArgs {
    #[arg(long, value_enum, default_value_t = LawKind::Semicircle)]
    pub kind: LawKind,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub center: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub radius: f64,
    /// Moment orders.
    #[arg(long = "m", value_delimiter = ',', default_values_t = [0u32, 1, 2, 3, 4, 5, 6])]
    pub orders: Vec<u32>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FreenessArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Maximal word degree L.
    #[arg(long = "L", default_value_t = 6)]
    pub max_degree: usize,
    /// Number of matrices in the family.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Prop31Args {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long = "m-max", default_value_t = 4)]
    pub m_max: usize,
    /// 1-based corner indices.
    #[arg(long, default_value_t = 1)]
    pub i: usize,
    #[arg(long, default_value_t = 2)]
    pub j: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Cor32Args {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long = "L", default_value_t = 4)]
    pub max_degree: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PerturbArgs {
    #[arg(long = "r", value_delimiter = ',', allow_negative_numbers = true, default_values_t = [0.2, 0.1, 0.05, 0.01])]
    pub radii: Vec<f64>,
    /// Fourier cutoff K.
    #[arg(long = "K", default_value_t = 200)]
    pub cutoff: usize,
    /// Matrix size of the contraction model.
    #[arg(long = "N", default_value_t = 256)]
    pub dim: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RmtArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long = "N", default_value_t = 64)]
    pub inner: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = Mode::RandomDiagonal)]
    pub mode: Mode,
    /// Block updates per adversarial search.
    #[arg(long, default_value_t = 200)]
    pub iterations: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MatdistArgs {
    #[arg(long = "N", default_value_t = 512)]
    pub inner: usize,
    #[arg(long = "k", value_delimiter = ',', default_values_t = [1usize, 2, 4, 8])]
    pub ks: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FgroupArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
}

/// Result of one command before rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub rows: Vec<CsvRow>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.pass {
            EXIT_PASS
        } else {
            EXIT_VIOLATION
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.report.to_json(),
            Format::Csv => to_csv(&self.rows),
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Unsupported(_) => EXIT_USAGE,
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Numeric(_) => EXIT_VIOLATION,
    }
}

fn outcome(
    name: &str,
    seed: u64,
    params: &impl Serialize,
    pass: bool,
    warnings: Vec<String>,
    result: Value,
    rows: Vec<CsvRow>,
) -> Outcome {
    let mut params = serde_json::to_value(params).expect("params serialize");
    if let Value::Object(map) = &mut params {
        map.remove("command");
    }
    Outcome {
        report: Report { schema: crate::report::SCHEMA_VERSION, command: name.to_string(), seed, params, pass, warnings, result },
        rows,
    }
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("result serializes")
}

/// Runs one parsed command.
pub fn execute(command: &Command, seed: u64) -> crate::Result<Outcome> {
    match command {
        Command::Moments(a) => cmd_moments(a, seed),
        Command::Freeness(a) => cmd_freeness(a, seed),
        Command::Prop31(a) => cmd_prop31(a, seed),
        Command::Cor32(a) => cmd_cor32(a, seed),
        Command::Perturb(a) => cmd_perturb(a, seed),
        Command::Rmt(a) => cmd_rmt(a, seed),
        Command::Matdist(a) => cmd_matdist(a, seed),
        Command::Fgroup(a) => cmd_fgroup(a, seed),
    }
}

const MOMENT_TOL: f64 = 1e-9;

pub fn cmd_moments(a: &MomentsArgs, seed: u64) -> crate::Result<Outcome> {
    let opts = QuadOptions::with_abs_tol(1e-13);
    let mut rows = Vec::new();
    let mut table = Vec::new();
    let mut pass = true;
    for &m in &a.orders {
        let (closed, quad) = match a.kind {
            LawKind::Semicircle => {
                let law = SemicircleLaw::new(a.center, a.radius)?;
                (sc_moment(&law, m), sc_moment_quadrature(&law, m, opts)?)
            }
            LawKind::Quarter => {
                if a.center != 0.0 {
                    return Err(Error::Domain("the quarter-circle law has no center parameter".into()));
                }
                let law = QuarterCircleLaw::new(a.radius)?;
                (qc_moment(&law, m), qc_moment_quadrature(&law, m, opts)?)
            }
        };
        let diff = (closed - quad).abs();
        let ok = diff <= MOMENT_TOL * closed.abs().max(1.0);
        pass &= ok;
        table.push(json!({"m": m, "closed_form": closed, "quadrature": quad, "abs_diff": diff, "pass": ok}));
        rows.push(CsvRow::new(seed, format!("moment m={m} closed"), closed, ok));
        rows.push(CsvRow::new(seed, format!("moment m={m} quadrature"), quad, ok).bound(MOMENT_TOL));
    }
    Ok(outcome("moments", seed, a, pass, vec![], json!({"moments": table}), rows))
}

fn freeness_rows(seed: u64, n: usize, label: &str, r: &FreenessReport) -> Vec<CsvRow> {
    vec![
        CsvRow::new(seed, format!("{label} checked"), r.checked, r.all_zero).n(n),
        CsvRow::new(seed, format!("{label} violations"), r.violations.len(), r.all_zero).n(n).bound(0),
    ]
}

pub fn cmd_freeness(a: &FreenessArgs, seed: u64) -> crate::Result<Outcome> {
    if a.m == 0 {
        return Err(Error::Domain("family size m must be at least 1".into()));
    }
    let mut alloc = LabelAllocator::new();
    let family = build_voiculescu_symbolic(a.n, a.m, &mut alloc)?;
    let report = check_freeness(&standard_families(&family), a.max_degree)?;
    let rows = freeness_rows(seed, a.n, "alternating centered traces", &report);
    Ok(outcome("freeness", seed, a, report.all_zero, vec![], to_value(&report), rows))
}

pub fn cmd_prop31(a: &Prop31Args, seed: u64) -> crate::Result<Outcome> {
    if a.i == 0 || a.j == 0 {
        return Err(Error::Domain("corner indices are 1-based".into()));
    }
    let mut alloc = LabelAllocator::new();
    let b = build_voiculescu_symbolic(a.n, 1, &mut alloc)?.remove(0);
    let x = build_voiculescu_symbolic(a.n, 1, &mut alloc)?.remove(0);
    let report = prop31_claims(&b, &x, a.i - 1, a.j - 1, a.m_max)?;
    let rows = report
        .items
        .iter()
        .map(|it| CsvRow::new(seed, &it.claim, &it.lhs, it.equal).n(a.n).bound(&it.rhs))
        .collect();
    Ok(outcome("prop31", seed, a, report.all_hold, vec![], to_value(&report), rows))
}

pub fn cmd_cor32(a: &Cor32Args, seed: u64) -> crate::Result<Outcome> {
    let mut alloc = LabelAllocator::new();
    let family = build_voiculescu_symbolic(a.n, a.m, &mut alloc)?;
    let report = corollary32_check(&family, a.max_degree)?;
    let mut rows = Vec::new();
    for e in report.diagonal.iter().chain(&report.products) {
        rows.extend(freeness_rows(seed, a.n, &e.family, &e.report));
    }
    Ok(outcome("cor32", seed, a, report.all_free, vec![], to_value(&report), rows))
}

/// Radii up to this value are inside the regime where the derivative-energy
/// estimate is asserted; larger radii are reported with a warning.
pub const SMALL_R: f64 = 0.05;

pub fn cmd_perturb(a: &PerturbArgs, seed: u64) -> crate::Result<Outcome> {
    if a.radii.is_empty() {
        return Err(Error::Domain("at least one radius is required".into()));
    }
    let mut pass = true;
    let mut warnings = Vec::new();
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for &r in &a.radii {
        PerturbationProfile::new(r)?;
        let rep = perturb_report(r, a.cutoff, a.dim, a.trials, seed)?;
        let fprime_ok = rep.fprime_l2 <= 5.0 * r;
        let in_regime = r <= SMALL_R;
        if in_regime {
            pass &= rep.pass && fprime_ok;
        } else if !(rep.pass && fprime_ok) {
            warnings.push(format!("r = {r}: a bound fails outside the small-r regime (r > {SMALL_R})"));
        }
        let tag = |s: &str| format!("{s} r={r}");
        rows.push(CsvRow::new(seed, tag("sum_abs"), rep.sum_abs, rep.fourier.pass).k(a.cutoff).bound(rep.bound));
        rows.push(CsvRow::new(seed, tag("fprime_l2"), rep.fprime_l2, fprime_ok).bound(5.0 * r));
        rows.push(CsvRow::new(seed, tag("l2_distance"), rep.l2_distance, rep.l2_distance <= rep.bound2).bound(rep.bound2));
        rows.push(
            CsvRow::new(seed, tag("contraction_violations"), rep.contraction_violations, rep.contraction.pass)
                .big_n(a.dim)
                .trials(a.trials)
                .bound(0),
        );
        let mut v = to_value(&rep);
        if let Value::Object(map) = &mut v {
            map.insert("fprime_within_5r".into(), json!(fprime_ok));
            map.insert("small_r_regime".into(), json!(in_regime));
        }
        reports.push(v);
    }
    Ok(outcome("perturb", seed, a, pass, warnings, json!({"radii": reports}), rows))
}

pub fn cmd_rmt(a: &RmtArgs, seed: u64) -> crate::Result<Outcome> {
    let mut opts = EnNormOptions::new(a.n, a.inner, a.trials, a.mode.into());
    opts.adversarial_iterations = a.iterations;
    let stats = estimate_en_norm_with(&opts, seed)?;
    let mut rows: Vec<CsvRow> = stats
        .values
        .iter()
        .enumerate()
        .map(|(t, v)| CsvRow::new(seed, format!("trial {t}"), v, *v <= stats.bound).bound(stats.bound))
        .collect();
    rows.push(CsvRow::new(seed, "mean", stats.mean, true));
    rows.push(CsvRow::new(seed, "std_error", stats.std_error, true));
    rows.push(CsvRow::new(seed, "max", stats.max, stats.max <= stats.bound).bound(stats.bound));
    rows.push(
        CsvRow::new(seed, "max_squared", stats.max_squared, stats.max_squared <= stats.squared_bound)
            .bound(stats.squared_bound),
    );
    for r in &mut rows {
        *r = std::mem::take(r).n(a.n).big_n(a.inner).trials(a.trials);
    }
    Ok(outcome("rmt", seed, a, stats.pass, vec![], to_value(&stats), rows))
}

/// `‖b − E_k(b)‖₂/‖b‖₂` must reach this for every `k ≤ N/8`.
pub const MATDIST_RATIO_FLOOR: f64 = 0.95;
const PYTHAGORAS_TOL: f64 = 1e-8;

pub fn cmd_matdist(a: &MatdistArgs, seed: u64) -> crate::Result<Outcome> {
    if a.ks.is_empty() {
        return Err(Error::Domain("at least one k is required".into()));
    }
    let table = matdist_curve(a.inner, &a.ks, a.trials, seed)?;
    let mut pass = true;
    let mut rows = Vec::new();
    let mut checked = Vec::new();
    for r in &table.rows {
        let bounded = 8 * r.k <= a.inner;
        let ratio_ok = !bounded || r.mean_ratio >= MATDIST_RATIO_FLOOR;
        let pyth_ok = r.pythagoras_defect <= PYTHAGORAS_TOL;
        pass &= ratio_ok && pyth_ok;
        let row = |stat: &str, v: f64, ok: bool| CsvRow::new(seed, stat, v, ok).big_n(a.inner).k(r.k).trials(a.trials);
        rows.push(row("mean_ek_norm", r.mean_ek_norm, true));
        rows.push(row("k_over_N", r.k as f64 / a.inner as f64, true));
        let ratio_row = row("mean_ratio", r.mean_ratio, ratio_ok);
        rows.push(if bounded { ratio_row.bound(MATDIST_RATIO_FLOOR) } else { ratio_row });
        rows.push(row("pythagoras_defect", r.pythagoras_defect, pyth_ok).bound(PYTHAGORAS_TOL));
        checked.push(json!({"k": r.k, "ratio_bounded": bounded, "ratio_pass": ratio_ok, "pythagoras_pass": pyth_ok}));
    }
    let result = json!({"table": to_value(&table), "checks": checked});
    Ok(outcome("matdist", seed, a, pass, vec![], result, rows))
}

pub fn cmd_fgroup(a: &FgroupArgs, seed: u64) -> crate::Result<Outcome> {
    let run = fgroup_trials(a.trials, seed)?;
    // norm-sum inequality on independent random elements: Σ_α ‖x‖²_{(α,E)} ≤ ‖x‖₂², same for S.
    let mut norm_sum_violations = 0;
    for t in 0..a.trials {
        let mut rng = RngStream::new(seed, t as u64).fork(1);
        let x = random_element(&mut rng, 20, 3, 3);
        let total = x.l2_norm().powi(2);
        let se: f64 = (0..3).map(|al| norm_e(&x, al).powi(2)).sum();
        let ss: f64 = (0..3).map(|al| norm_s(&x, al).powi(2)).sum();
        if se > total * (1.0 + 1e-12) || ss > total * (1.0 + 1e-12) {
            norm_sum_violations += 1;
        }
    }
    let pass = run.pass && norm_sum_violations == 0;
    let rows = vec![
        CsvRow::new(seed, "bound_violations", run.violations, run.violations == 0).trials(a.trials).bound(0),
        CsvRow::new(seed, "exact_identity_mismatches", run.exact_mismatches, run.exact_mismatches == 0)
            .trials(a.trials)
            .bound(0),
        CsvRow::new(seed, "norm_sum_violations", norm_sum_violations, norm_sum_violations == 0).trials(a.trials).bound(0),
    ];
    let mut result = to_value(&run);
    if let Value::Object(map) = &mut result {
        map.insert("norm_sum_violations".into(), json!(norm_sum_violations));
    }
    Ok(outcome("fgroup", seed, a, pass, vec![], result, rows))
}

/// What a run produced: a rendered report, or an error message when no
/// report could be built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub text: String,
    pub is_report: bool,
}

impl RunOutput {
    fn error(code: i32, text: String) -> Self {
        Self { code, text, is_report: false }
    }
}

/// Parses `args` (without the program name), runs the command and writes the
/// report to `--out` if given.
pub fn run_args<I, S>(args: I) -> RunOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("freelab")).chain(args.into_iter().map(Into::into));
    match RunConfig::try_parse_from(argv) {
        Ok(cfg) => run_config(&cfg),
        // --help and --version are not failures
        Err(e) if !e.use_stderr() => RunOutput { code: EXIT_PASS, text: e.to_string(), is_report: false },
        Err(e) => RunOutput::error(EXIT_USAGE, e.to_string()),
    }
}

pub fn run_config(cfg: &RunConfig) -> RunOutput {
    let out = match execute(&cfg.command, cfg.seed) {
        Ok(o) => o,
        Err(e) => return RunOutput::error(exit_code_for(&e), format!("error: {e}\n")),
    };
    let text = out.render(cfg.format);
    if let Some(path) = &cfg.out {
        if let Err(e) = std::fs::write(path, &text) {
            return RunOutput::error(EXIT_RESOURCE, format!("error: cannot write {}: {e}\n", path.display()));
        }
    }
    RunOutput { code: out.exit_code(), text, is_report: true }
}
