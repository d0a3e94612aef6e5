use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ecoop::{harness, parse_config, CoopError, Experiment, ExperimentConfig, PresetName, Scheme};

#[derive(Parser)]
#[command(name = "ecoop", version, about = "Cooperative spectrum sharing experiments with energy harvesting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// SU rate against PU target for each scheme on one channel.
    RateRegion(Common),
    /// Mean SU rate against the ST's own power, per efficiency.
    SuSweep(Common),
    /// Probability that the PU or SU demand is missed.
    Outage(Common),
    /// SU rate against ρ (power splitting) or α (time splitting) on one channel.
    ParamCurve(Common),
    /// Largest supported PU rate per scheme on one channel.
    Feasibility(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "scheme", value_parser = parse_scheme)]
    schemes: Vec<Scheme>,
    #[arg(long = "eta")]
    etas: Vec<f64>,
    #[arg(long, value_parser = parse_preset)]
    preset: Option<PresetName>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: CoopError| e.to_string())
}

fn parse_preset(s: &str) -> Result<PresetName, String> {
    PresetName::parse(s).ok_or_else(|| format!("unknown preset '{s}' (expected fig2, fig5 or fig6)"))
}

fn build_config(command: &Command) -> ecoop::Result<(ExperimentConfig, &Common)> {
    let (experiment, common) = match command {
        Command::RateRegion(c) => (Experiment::RateRegion, c),
        Command::SuSweep(c) => (Experiment::SuSweep, c),
        Command::Outage(c) => (Experiment::Outage, c),
        Command::ParamCurve(c) => (Experiment::RhoCurve, c),
        Command::Feasibility(c) => (Experiment::Feasibility, c),
    };
    let mut cfg = match &common.config {
        Some(path) => parse_config(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.experiment = match experiment {
        // the config or the schemes decide between the two curves
        Experiment::RhoCurve if cfg.experiment == Experiment::AlphaCurve => Experiment::AlphaCurve,
        Experiment::RhoCurve
            if common
                .schemes
                .iter()
                .any(|s| matches!(s, Scheme::TimeSplit | Scheme::TimeSplitZF)) =>
        {
            Experiment::AlphaCurve
        }
        e => e,
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = common.trials {
        cfg.trials = trials;
    }
    if !common.schemes.is_empty() {
        cfg.schemes = common.schemes.clone();
    }
    if !common.etas.is_empty() {
        cfg.eta_list = Some(common.etas.clone());
    }
    if common.preset.is_some() {
        cfg.preset = common.preset;
    }
    if let Some(out) = &common.out {
        cfg.output_path = Some(out.display().to_string());
    }
    cfg.validate()?;
    Ok((cfg, common))
}

fn exit_code(err: &CoopError) -> u8 {
    match err {
        CoopError::Internal(_) | CoopError::Degenerate(_) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, common) = match build_config(&cli.command) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("ecoop: {e}");
            return ExitCode::from(2);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(common.workers).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("ecoop: cannot start workers: {e}");
            return ExitCode::from(4);
        }
    };
    let report = match pool.install(|| harness::run(&cfg)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("ecoop: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let csv = report.to_csv();
    match cfg.output_path.as_deref() {
        Some(path) if path != "-" => {
            if let Err(e) = std::fs::write(path, csv) {
                eprintln!("ecoop: cannot write {path}: {e}");
                return ExitCode::from(2);
            }
        }
        _ => print!("{csv}"),
    }
    if report.any_feasible() {
        ExitCode::SUCCESS
    } else {
        eprintln!("ecoop: no scheme is feasible anywhere in this run");
        ExitCode::from(3)
    }
}
