use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use solyanik::error::{exit, CliError, Result};
use solyanik::parallel::{self, THREADS_ENV};
use solyanik::verify::{run_suite, Suite};
use solyanik::{runner, ExperimentConfig};

/// Exact discrete and ergodic maximal operator experiments.
#[derive(Parser)]
#[command(name = "solyanik", version)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal field and level sets of one set (`maximal-field` configs).
    Maximal(RunArgs),
    /// Tauberian constants over an alpha grid (`tauberian-sweep` configs).
    Tauberian(RunArgs),
    /// Ergodic constants, inequality and Wiener checks (`ergodic-check` configs).
    Ergodic(RunArgs),
    /// Pointwise transference identity (`transference` configs).
    Transfer(RunArgs),
    /// Log-log exponent fit of a sweep (`analysis-fit` configs).
    Fit(RunArgs),
    /// Run a named property suite, or `all`.
    Verify {
        suite: String,
        /// Also write the JSON summary to `<dir>/verify.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(args: &RunArgs) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| CliError::io(&args.config, e))?;
    let Some(seed) = args.seed else {
        return ExperimentConfig::parse(&text);
    };
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
    match value.as_object_mut() {
        Some(object) => object.insert("seed".into(), seed.into()),
        None => return Err(CliError::Config("expected a JSON object".into())),
    };
    ExperimentConfig::parse(&value.to_string())
}

fn run_experiment(expected: &str, args: &RunArgs, threads: Option<usize>) -> Result<()> {
    let config = load(args)?;
    if config.experiment.name() != expected {
        return Err(CliError::Config(format!(
            "this subcommand runs '{expected}' configs, got '{}'",
            config.experiment.name()
        )));
    }
    let base = args.config.parent().unwrap_or(Path::new("."));
    let out = match (&args.out, &config.out) {
        (Some(dir), _) => dir.clone(),
        (None, Some(dir)) => base.join(dir),
        (None, None) => PathBuf::from("out").join(expected),
    };
    let pool = parallel::pool(threads)?;
    let summary = runner::run(&config, base, &out, &pool)?;
    println!("{}: wrote {} to {}", expected, summary.artifacts.join(", "), summary.out_dir.display());
    Ok(())
}

fn verify(name: &str, out: Option<&Path>, threads: Option<usize>) -> Result<()> {
    let suites = Suite::parse_list(name)?;
    let pool = parallel::pool(threads)?;
    let mut reports = Vec::new();
    for suite in suites {
        let report = run_suite(suite, &pool);
        eprintln!("{}: {} ({} checks, {} ms)", report.suite, if report.pass { "pass" } else { "FAIL" }, report.checks, report.millis);
        reports.push(report);
    }
    let body = serde_json::to_string_pretty(&reports).expect("reports serialize");
    println!("{body}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join("verify.json");
        std::fs::write(&path, body + "\n").map_err(|e| CliError::io(&path, e))?;
    }
    match reports.iter().filter(|r| !r.pass).map(|r| r.suite).collect::<Vec<_>>() {
        failed if failed.is_empty() => Ok(()),
        failed => Err(CliError::Violation(format!("failed suites: {}", failed.join(", ")))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Maximal(a) => run_experiment("maximal-field", a, cli.threads),
        Command::Tauberian(a) => run_experiment("tauberian-sweep", a, cli.threads),
        Command::Ergodic(a) => run_experiment("ergodic-check", a, cli.threads),
        Command::Transfer(a) => run_experiment("transference", a, cli.threads),
        Command::Fit(a) => run_experiment("analysis-fit", a, cli.threads),
        Command::Verify { suite, out } => verify(suite, out.as_deref(), cli.threads),
    };
    match outcome {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
