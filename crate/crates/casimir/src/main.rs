//! Command-line harness: scenario runs, parameter sweeps, and the
//! analytic-vs-numerical comparison report.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 numerical failure or
//! violated physical invariant.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use casimir::config::{OutputFormat, Scenario, ScenarioConfig};
use casimir::error::CasimirError;
use casimir::scenarios;

#[derive(Parser)]
#[command(
    name = "casimir",
    about = "Cavity-field entanglement production under parametric resonance: \
             data tables for the exact curves, their asymptotics, and \
             brute-force numerical cross-checks.",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact (1+1)-D entropy curves with asymptotic expansions
    Dce1d(CommonArgs),
    /// Mixed-subsystem entropy growth in a d ≥ 2 cavity
    DceNd(CommonArgs),
    /// Direct integration of the coupled 1-D mode equations
    Oracle1d(CommonArgs),
    /// Parametric-oscillator run with Floquet envelope
    Mathieu(CommonArgs),
    /// Fitted subsystem exponents for random one-mode subsystems
    Lyapunov(CommonArgs),
    /// Bogoliubov sum-rule residuals over ladder cutoffs
    Sumrules(CommonArgs),
    /// Analytic-vs-numerical deviation report
    Compare(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config file (flat key = value); flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Cavity side lengths, comma-separated
    #[arg(long = "L", value_name = "L1,L2,...")]
    lengths: Option<String>,
    /// Wall-oscillation amplitude ε
    #[arg(long)]
    epsilon: Option<f64>,
    /// τ grid start:stop:count (or scalar τ for sumrules)
    #[arg(long)]
    tau: Option<String>,
    /// Time grid start:stop:count
    #[arg(long)]
    time: Option<String>,
    /// Ladder cutoffs, comma-separated
    #[arg(long = "nmax", value_name = "N1,N2,...")]
    n_max: Option<String>,
    /// Mode cutoff of the numerical integration
    #[arg(long = "N")]
    oracle_n: Option<usize>,
    /// Random subsystem draws (lyapunov)
    #[arg(long)]
    draws: Option<usize>,
    /// Output format: csv or json
    #[arg(long)]
    format: Option<String>,
    /// RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Comparison target: dce1d or mathieu
    #[arg(long)]
    target: Option<String>,
    /// Output file (stdout if omitted)
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn build_config(scenario: Scenario, args: &CommonArgs) -> Result<ScenarioConfig, CasimirError> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CasimirError::InvalidArgument(format!("cannot read {}: {e}", path.display()))
            })?;
            let mut c = ScenarioConfig::from_file_str(&text, scenario)?;
            c.scenario = scenario;
            c
        }
        None => ScenarioConfig::defaults(scenario),
    };
    if let Some(v) = &args.lengths {
        config.apply("lengths", v)?;
    }
    if let Some(v) = args.epsilon {
        config.apply("epsilon", &v.to_string())?;
    }
    if let Some(v) = &args.tau {
        // a scalar sets the single-point τ; a range sets the grid
        if v.contains(':') {
            config.apply("grid", v)?;
        } else {
            config.apply("tau", v)?;
        }
    }
    if let Some(v) = &args.time {
        config.apply("grid", v)?;
    }
    if let Some(v) = &args.n_max {
        config.apply("n_max", v)?;
    }
    if let Some(v) = args.oracle_n {
        config.apply("N", &v.to_string())?;
    }
    if let Some(v) = args.draws {
        config.apply("draws", &v.to_string())?;
    }
    if let Some(v) = &args.format {
        config.apply("format", v)?;
    }
    if let Some(v) = args.seed {
        config.apply("seed", &v.to_string())?;
    }
    if let Some(v) = &args.target {
        config.apply("target", v)?;
    }
    Ok(config)
}

fn init_thread_pool() -> Result<(), CasimirError> {
    if let Ok(raw) = std::env::var("CASIMIR_THREADS") {
        let n: usize = raw.parse().map_err(|_| {
            CasimirError::InvalidArgument(format!("CASIMIR_THREADS must be a positive integer, got '{raw}'"))
        })?;
        if n == 0 {
            return Err(CasimirError::InvalidArgument(
                "CASIMIR_THREADS must be at least 1".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CasimirError::InvalidArgument(format!("thread pool setup failed: {e}")))?;
    }
    Ok(())
}

fn execute(scenario: Scenario, args: &CommonArgs) -> Result<(), CasimirError> {
    let config = build_config(scenario, args)?;
    config.validate()?;
    let table = scenarios::run(&config)?;
    let mut buf: Vec<u8> = Vec::new();
    match config.format {
        OutputFormat::Csv => table.write_csv(&mut buf)?,
        OutputFormat::Json => table.write_json(&config, &mut buf)?,
    }
    match &args.out {
        Some(path) => fs::write(path, &buf).map_err(|e| {
            CasimirError::InvalidArgument(format!("cannot write {}: {e}", path.display()))
        })?,
        None => {
            std::io::stdout()
                .write_all(&buf)
                .map_err(|e| CasimirError::Numerical(format!("stdout write failed: {e}")))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (scenario, args) = match &cli.command {
        Command::Dce1d(a) => (Scenario::Dce1d, a),
        Command::DceNd(a) => (Scenario::DceNd, a),
        Command::Oracle1d(a) => (Scenario::Oracle1d, a),
        Command::Mathieu(a) => (Scenario::Mathieu, a),
        Command::Lyapunov(a) => (Scenario::Lyapunov, a),
        Command::Sumrules(a) => (Scenario::Sumrules, a),
        Command::Compare(a) => (Scenario::Compare, a),
    };
    if let Err(e) = init_thread_pool() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match execute(scenario, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                CasimirError::InvalidArgument(_)
                | CasimirError::DimensionMismatch(_)
                | CasimirError::IndexOutOfRange { .. } => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}
