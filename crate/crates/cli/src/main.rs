use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qglue::verify::{self, Suite};
use qglue_cli::config::{merge, parse_config, Options};
use qglue_cli::{run_sweep, Quantity, SweepRequest, UsageError};

#[derive(Parser)]
#[command(name = "qglue", version, about = "Coherent-information sweeps over glued qubit channel pairs")]
struct Cli {
    /// key=value file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Q¹ or δ₂ over a (p, λ) grid.
    Sweep(GridArgs),
    /// λ₀(p) in closed form and the scanned lower window edge λ₁(p).
    Boundaries(GridArgs),
    /// Numerical values against their small-parameter asymptotes.
    AsymCompare(GridArgs),
    /// Seeded invariant suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GridArgs {
    /// amplitude | dephrasure
    #[arg(long)]
    model: Option<String>,
    /// q1B | q1C | delta2 | delta2star | boundaries | asym_compare
    /// (for asym-compare: the quantity compared, q1B | q1C | delta2)
    #[arg(long)]
    quantity: Option<String>,
    /// p grid, `lo:hi:step` or a single value
    #[arg(long)]
    p: Option<String>,
    /// λ grid, or `j` for the dephrasure j(p) curve
    #[arg(long)]
    lambda: Option<String>,
    /// δλ grid below the model's boundary (λ₀ or g)
    #[arg(long = "delta-lambda")]
    delta_lambda: Option<String>,
    /// sigma_eps | tau_product | repetition_eta | zeta_mix
    #[arg(long)]
    ansatz: Option<String>,
    /// CSV path; stdout when absent or `-`
    #[arg(long)]
    out: Option<String>,
    /// worker threads [default: all cores]
    #[arg(long)]
    jobs: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// coarse grid points of the 1-D scans
    #[arg(long = "grid-points")]
    grid_points: Option<String>,
    /// multistart count of the generic optimizer
    #[arg(long)]
    starts: Option<String>,
}

impl GridArgs {
    fn options(self) -> Options {
        [
            ("model", self.model),
            ("quantity", self.quantity),
            ("p", self.p),
            ("lambda", self.lambda),
            ("delta-lambda", self.delta_lambda),
            ("ansatz", self.ansatz),
            ("out", self.out),
            ("jobs", self.jobs),
            ("seed", self.seed),
            ("grid-points", self.grid_points),
            ("starts", self.starts),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
        .collect()
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// all | numkernel | channels | gluing | erasure | qubit_models |
    /// coherent_info | nonadditivity | asymptotics
    suite: Option<String>,
    #[arg(long)]
    instances: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

enum Failure {
    Usage(String),
    Numeric,
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

fn load_config(path: Option<PathBuf>) -> Result<Options, Failure> {
    let Some(path) = path else {
        return Ok(Options::new());
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))?;
    Ok(parse_config(&text)?)
}

fn sweep(opts: Options, fixed: Option<Quantity>) -> Result<(), Failure> {
    let req = SweepRequest::from_options(&opts, fixed)?;
    let table = run_sweep(&req)?;
    match &req.output {
        Some(path) => table
            .write_atomic(path)
            .map_err(|e| Failure::Usage(format!("writing {}: {e}", path.display())))?,
        None => print!("{}", table.to_csv()),
    }
    match table.failures() {
        0 => Ok(()),
        n => {
            eprintln!("{n} grid point(s) failed");
            Err(Failure::Numeric)
        }
    }
}

fn run_verify(opts: Options) -> Result<(), Failure> {
    let name = opts.get("suite").map_or("all", String::as_str);
    let suites: Vec<Suite> = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![name.parse().map_err(Failure::Usage)?]
    };
    let num = |key: &str, default: u64| -> Result<u64, Failure> {
        opts.get(key).map_or(Ok(default), |v| {
            v.parse().map_err(|_| Failure::Usage(format!("--{key}: cannot parse '{v}'")))
        })
    };
    let instances = num("instances", 100)? as usize;
    let seed = num("seed", 2024)?;
    let mut failed = 0;
    for suite in suites {
        let checks = verify::run(suite, instances, seed).map_err(|e| {
            eprintln!("{suite}: {e}");
            Failure::Numeric
        })?;
        for c in checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            println!("{status} {}::{} residual={:.3e} tol={:.0e}", c.suite, c.name, c.residual, c.tolerance);
            failed += usize::from(!c.passed());
        }
    }
    if failed > 0 {
        eprintln!("{failed} invariant(s) failed");
        return Err(Failure::Numeric);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_config(cli.config).and_then(|cfg| match cli.command {
        Command::Sweep(a) => sweep(merge(cfg, a.options()), None),
        Command::Boundaries(a) => sweep(merge(cfg, a.options()), Some(Quantity::Boundaries)),
        Command::AsymCompare(a) => sweep(merge(cfg, a.options()), Some(Quantity::AsymCompare)),
        Command::Verify(a) => {
            let flags = [("suite", a.suite), ("instances", a.instances), ("seed", a.seed)]
                .into_iter()
                .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
                .collect();
            run_verify(merge(cfg, flags))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Numeric) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
