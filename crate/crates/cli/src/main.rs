use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ncflow::config::{self, ConfigError, PRESETS};
use ncflow::scenario::{RunError, RunReport};
use ncflow::{Execution, ScenarioConfig, ScenarioKind};

/// Integrates geodesic velocity flows and transported states, writing CSV
/// time series and SVG charts.
#[derive(Parser)]
#[command(name = "ncflow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its outputs.
    Run(RunArgs),
    /// Parse a config and check its initial data without integrating.
    Validate(Source),
    /// Run several configs, one output directory each, in parallel.
    Sweep(SweepArgs),
    /// Print the resolved JSON config for a preset or scenario.
    Show(Source),
    /// List presets and scenario names.
    List,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in default data for a scenario.
    #[arg(long, value_parser = parse_kind)]
    scenario: Option<ScenarioKind>,
    /// Built-in preset (see `ncflow list`).
    #[arg(long)]
    preset: Option<String>,
    /// JSON config file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    /// Write every k-th step.
    #[arg(long)]
    stride: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    /// Output directory; defaults to the config's `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct SweepArgs {
    /// Config files; each writes to `<out>/<file stem>`.
    #[arg(long = "config", num_args = 1..)]
    configs: Vec<PathBuf>,
    /// Presets; each writes to `<out>/<preset>`.
    #[arg(long = "preset", num_args = 1..)]
    presets: Vec<String>,
    #[arg(long)]
    out: PathBuf,
    /// Run one job at a time.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    overrides: Overrides,
}

fn parse_kind(s: &str) -> Result<ScenarioKind, String> {
    s.parse()
}

fn load(source: &Source) -> Result<ScenarioConfig, ConfigError> {
    if let Some(kind) = source.scenario {
        Ok(ScenarioConfig::default_for(kind))
    } else if let Some(name) = &source.preset {
        ScenarioConfig::preset(name)
    } else if let Some(path) = &source.config {
        ScenarioConfig::from_file(path)
    } else {
        unreachable!("clap requires one source")
    }
}

impl Overrides {
    fn apply(&self, c: &mut ScenarioConfig) {
        if let Some(v) = self.t_end {
            c.t_end = v;
        }
        if let Some(v) = self.step {
            c.step = v;
        }
        if let Some(v) = self.stride {
            c.stride = v;
        }
    }
}

fn fail(err: &RunError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(err.exit_code() as u8)
}

fn print_report(label: &str, report: &RunReport) {
    println!(
        "{label}: wrote {} samples to {}",
        report.samples,
        report.dir.display()
    );
    for (name, value) in &report.headline {
        println!("  max {name:<16} {value:.3e}");
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
}

fn run(args: &RunArgs) -> Result<(), RunError> {
    let mut c = load(&args.source)?;
    args.overrides.apply(&mut c);
    let report = ncflow::run(&c, args.out.as_deref())?;
    print_report(c.scenario.name(), &report);
    Ok(())
}

fn validate(source: &Source) -> Result<(), RunError> {
    let report = config::validate(&load(source)?)?;
    print!("{report}");
    for w in report.warnings() {
        eprintln!(
            "warning: {} is {:.3e}; the run will not conserve it",
            w.name, w.value
        );
    }
    Ok(())
}

fn unique_dir(root: &Path, stem: &str, taken: &mut Vec<PathBuf>) -> PathBuf {
    let mut dir = root.join(stem);
    let mut k = 2;
    while taken.contains(&dir) {
        dir = root.join(format!("{stem}-{k}"));
        k += 1;
    }
    taken.push(dir.clone());
    dir
}

/// Returns the worst exit code among the jobs.
fn sweep(args: &SweepArgs) -> Result<ExitCode, RunError> {
    let mut jobs = Vec::new();
    let mut taken = Vec::new();
    for path in &args.configs {
        let mut c = ScenarioConfig::from_file(path)?;
        args.overrides.apply(&mut c);
        let stem = path
            .file_stem()
            .map_or("config".into(), |s| s.to_string_lossy().into_owned());
        jobs.push((c, unique_dir(&args.out, &stem, &mut taken)));
    }
    for name in &args.presets {
        let mut c = ScenarioConfig::preset(name)?;
        args.overrides.apply(&mut c);
        jobs.push((c, unique_dir(&args.out, name, &mut taken)));
    }
    if jobs.is_empty() {
        return Err(ConfigError::Field {
            field: "sweep".into(),
            message: "give at least one --config or --preset".into(),
        }
        .into());
    }
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let mut worst = 0;
    for ((c, dir), result) in jobs.iter().zip(ncflow::sweep(&jobs, exec)) {
        match result {
            Ok(report) => print_report(c.scenario.name(), &report),
            Err(e) => {
                eprintln!("error in {}: {e}", dir.display());
                worst = worst.max(e.exit_code());
            }
        }
    }
    Ok(ExitCode::from(worst as u8))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Validate(source) => validate(source),
        Command::Sweep(args) => return sweep(args).unwrap_or_else(|e| fail(&e)),
        Command::Show(source) => load(source)
            .map(|c| print!("{}", c.to_json()))
            .map_err(RunError::from),
        Command::List => {
            println!("presets:");
            for p in PRESETS {
                println!("  {p}");
            }
            println!("scenarios:");
            for k in ScenarioKind::ALL {
                println!("  {k}");
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
