use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use odl::{calibrate, run, Budget, Experiment, ExperimentConfig, RunError};

/// Run an experiment, or `calibrate <experiment>` to write its fixture.
#[derive(Parser, Debug)]
#[command(name = "odl", version)]
struct Cli {
    /// Experiment name, or `calibrate`.
    command: String,
    /// Experiment to calibrate.
    target: Option<String>,
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's `output`; stdout when neither is given.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(cli: &Cli, name: &str) -> Result<ExperimentConfig, RunError> {
    let experiment: Experiment = name.parse()?;
    let text = std::fs::read_to_string(&cli.config)?;
    let mut cfg = ExperimentConfig::parse(&text, experiment)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output_path = Some(out.clone());
    }
    cfg.budget = Budget::from_env()?;
    Ok(cfg)
}

fn emit(cfg: &ExperimentConfig, text: &str) -> Result<(), RunError> {
    match &cfg.output_path {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main_inner(cli: &Cli) -> Result<(), RunError> {
    let start = std::time::Instant::now();
    if cli.command == "calibrate" {
        let name = cli.target.as_deref().ok_or_else(|| {
            RunError::Config(odl::ConfigError {
                line: None,
                key: None,
                message: "calibrate needs an experiment name".into(),
            })
        })?;
        let cfg = load(cli, name)?;
        emit(&cfg, &calibrate(&cfg)?)?;
    } else {
        let cfg = load(cli, &cli.command)?;
        let report = run(&cfg)?;
        emit(&cfg, &report.to_csv())?;
    }
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("odl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
