use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pr_qlba::cli::{compute, parse_compute, run_suite, Metric, Suite, SuiteConfig};
use pr_qlba::error::Error;

/// Exact verification of quasi-Lie bialgebras, trace brackets and their quantizations.
#[derive(Parser, Debug)]
#[command(name = "prq", version)]
struct Args {
    /// Dimension of V.
    #[arg(long, default_value_t = 3, global = true)]
    dim: usize,
    /// Truncation order N (arithmetic mod h^N).
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Maximal word length or total degree checked.
    #[arg(long)]
    degree: Option<usize>,
    /// "minkowski" or a JSON file holding a matrix of rational strings.
    #[arg(long, default_value = "minkowski", global = true)]
    metric: String,
    /// Suite to run.
    #[arg(long)]
    suite: Option<String>,
    /// Also write the report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Run independent checks on a thread pool.
    #[arg(long)]
    parallel: bool,
    /// Record wall-clock milliseconds per check.
    #[arg(long)]
    timing: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// z-bracket A B | delta W | coproduct W, with index lists like 0,1,2 or 012.
    Compute {
        #[arg(num_args = 1..)]
        expr: Vec<String>,
    },
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("prq: {e}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let metric = match Metric::parse(&args.metric) {
        Ok(m) => m,
        Err(e) => return fail(&e),
    };
    if let Some(Command::Compute { expr }) = &args.command {
        let result = parse_compute(expr).and_then(|e| compute(&e, args.dim, args.order.unwrap_or(1), &metric));
        return match result {
            Ok(s) => {
                println!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        };
    }
    let Some(name) = &args.suite else {
        return fail(&Error::Usage("--suite or a compute subcommand is required".into()));
    };
    let suite: Suite = match name.parse() {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let cfg = SuiteConfig {
        suite,
        dim: args.dim,
        order: args.order,
        degree: args.degree,
        metric,
        parallel: args.parallel,
        timing: args.timing,
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    print!("{}", report.to_text());
    if let Some(path) = &args.json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("prq: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
