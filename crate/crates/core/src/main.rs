use std::io::Write;

use clap::Parser;
use freelab::commands::{run_config, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    let out = run_config(&cfg);
    if !out.is_report {
        eprint!("{}", out.text);
    } else if cfg.out.is_none() {
        print!("{}", out.text);
        let _ = std::io::stdout().flush();
    }
    std::process::exit(out.code);
}
