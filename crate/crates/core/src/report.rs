//! Run reports: a JSON envelope and a fixed CSV schema.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_COLUMNS: [&str; 9] = ["n", "N", "k", "trials", "seed", "stat", "value", "bound", "pass"];

/// One CSV line. Empty optional fields mean "not applicable".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CsvRow {
    pub n: Option<usize>,
    pub big_n: Option<usize>,
    pub k: Option<usize>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub stat: String,
    /// Decimal or exact `p/q`.
    pub value: String,
    pub bound: Option<String>,
    pub pass: bool,
}

impl CsvRow {
    pub fn new(seed: u64, stat: impl Into<String>, value: impl ToString, pass: bool) -> Self {
        Self { seed, stat: stat.into(), value: value.to_string(), pass, ..Self::default() }
    }

    pub fn n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn big_n(mut self, big_n: usize) -> Self {
        self.big_n = Some(big_n);
        self
    }

    pub fn k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = Some(trials);
        self
    }

    pub fn bound(mut self, bound: impl ToString) -> Self {
        self.bound = Some(bound.to_string());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
    pub params: Value,
    pub pass: bool,
    pub warnings: Vec<String>,
    pub result: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn to_csv(rows: &[CsvRow]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).expect("in-memory write");
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            opt(r.n),
            opt(r.big_n),
            opt(r.k),
            opt(r.trials),
            r.seed.to_string(),
            r.stat.clone(),
            r.value.clone(),
            r.bound.clone().unwrap_or_default(),
            r.pass.to_string(),
        ])
        .expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
    format!("# schema={SCHEMA_VERSION}\n{body}")
}
