use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use halfspin_cli::{emit_report, run_suite, SuiteConfig};

/// Run verification suites and write a JSON report.
#[derive(Parser, Debug)]
#[command(name = "halfspin", version)]
struct Args {
    /// clifford, spinrep, transfer, cone, cartan, membership, lowering or all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 1)]
    n_min: usize,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    /// Report path; standard output if omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    fail_fast: bool,
    /// Record wall-clock time per check (reports are then not reproducible)
    #[arg(long)]
    timings: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let config = SuiteConfig {
        suite: args.suite,
        n_min: args.n_min,
        n_max: args.n_max,
        seed: args.seed,
        sample_count: args.samples,
        output_path: args.out.as_ref().map(|p| p.display().to_string()),
        fail_fast: args.fail_fast,
        timings: args.timings,
    };
    let report = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = emit_report(&report, path) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", report.to_json()),
    }
    let s = &report.summary;
    eprintln!("{} passed, {} failed, {} skipped", s.pass, s.fail, s.skipped);
    ExitCode::from(if report.has_failures() { 1 } else { 0 })
}
