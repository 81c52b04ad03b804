use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fockcomm_cli::config::{load_table, parse_override, ExperimentKind};
use fockcomm_cli::error::{CliError, CliResult};
use fockcomm_cli::plot::emit_plot_data;
use fockcomm_cli::run::{run, RunOptions};
use fockcomm_cli::validate::{print_matrix, validate, ValidateOptions};

/// Simulator for two-way communication and Bell tests with generalized NOON states.
///
/// Any config key can be overridden with `--section.key=value`, e.g.
/// `--state.alpha_sq=0.5` or `--detector.alice.kappa=0.9`.
#[derive(Parser, Debug)]
#[command(name = "fockcomm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the GYNI table for one configuration.
    Gyni(RunArgs),
    /// Sweep the GYNI value over the configured axes.
    GyniSweep(RunArgs),
    /// Scan the Bell value over the configured axes.
    BellSweep(RunArgs),
    /// Build the witness measurement for the configured state.
    Theorem(RunArgs),
    /// Check the even-cat NOON preparation circuit.
    PrepareCheck(RunArgs),
    /// Run the property suites and print a pass/fail matrix.
    Validate(ValidateArgs),
    /// Turn a run CSV into gnuplot data files.
    PlotData(PlotArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// TOML configuration file.
    config: Option<PathBuf>,
    /// Output directory, overriding `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 3 if any row is flagged.
    #[arg(long)]
    strict: bool,
    /// Worker threads for sweeps.
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed recorded in the manifest, overriding `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Run only these suites (comma separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo samples per case in the sva suite.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// CSV written by a run.
    csv: PathBuf,
    /// One of fig1a..fig1d, fig2, fig3, fig3b, fig-ch31.
    #[arg(long)]
    figure: String,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Qubit mixing parameter for the fig-ch31 reference plane.
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
}

fn run_command(kind: ExperimentKind, args: RunArgs, mut overrides: Vec<(String, toml::Value)>) -> CliResult<()> {
    if let Some(seed) = args.seed {
        let seed = i64::try_from(seed).map_err(|_| CliError::config("seed", "must fit in a signed 64-bit integer"))?;
        overrides.insert(0, ("seed".into(), toml::Value::Integer(seed)));
    }
    let table = load_table(args.config.as_deref(), &overrides)?;
    let opts = RunOptions { out_dir: args.out, strict: args.strict, jobs: args.jobs };
    let summary = run(kind, &table, &opts)?;
    println!("{} rows -> {}", summary.rows, summary.csv.display());
    println!("manifest -> {}", summary.manifest.display());
    if !summary.flagged.is_empty() {
        eprintln!("warning: {} flagged rows: {:?}", summary.flagged.len(), summary.flagged);
    }
    Ok(())
}

fn dispatch(cli: Cli, overrides: Vec<(String, toml::Value)>) -> CliResult<()> {
    if !overrides.is_empty() && matches!(cli.command, Command::Validate(_) | Command::PlotData(_)) {
        return Err(CliError::config(overrides[0].0.clone(), "config overrides apply only to run subcommands"));
    }
    match cli.command {
        Command::Gyni(a) => run_command(ExperimentKind::Gyni, a, overrides),
        Command::GyniSweep(a) => run_command(ExperimentKind::GyniSweep, a, overrides),
        Command::BellSweep(a) => run_command(ExperimentKind::BellSweep, a, overrides),
        Command::Theorem(a) => run_command(ExperimentKind::Theorem, a, overrides),
        Command::PrepareCheck(a) => run_command(ExperimentKind::PrepareCheck, a, overrides),
        Command::Validate(a) => {
            let opts = ValidateOptions { only: a.only, seed: a.seed, samples: a.samples, ..Default::default() };
            let results = validate(&opts)?;
            print_matrix(&results, &mut std::io::stdout().lock())?;
            let failed: Vec<String> =
                results.iter().filter(|r| !r.pass).map(|r| format!("{}: {}", r.suite, r.check)).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Validation(failed.join("; ")))
            }
        }
        Command::PlotData(a) => {
            let out = emit_plot_data(&a.csv, &a.figure, &a.out, a.lambda)?;
            println!("{} points in {} blocks -> {}", out.points, out.blocks, out.data.display());
            println!("sidecar -> {}", out.sidecar.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // dotted `--a.b=v` arguments are config overrides, not clap flags
    let mut argv = Vec::new();
    let mut overrides = Vec::new();
    for arg in std::env::args() {
        match parse_override(&arg) {
            Some((key, value)) if key.contains('.') => overrides.push((key, value)),
            _ => argv.push(arg),
        }
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli, overrides) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = std::io::stdout().flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
