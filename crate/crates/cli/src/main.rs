use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use nudicke::scenario::{
    compare_scenario, export_scenario_qasm, format_comparison, run_scenario, OutputKind, ScenarioConfig,
};

const DEFAULT_SHOTS_STR: &str = "1024";

#[derive(Parser)]
#[command(
    name = "nudicke",
    version,
    about = "Run collective-oscillation scenarios on simulated circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate every encoding and write the survival CSV (and QASM if listed in `outputs`).
    Run(Common),
    /// Print deviations from the exact evolution, qubit and gate counts.
    Compare(Common),
    /// Write one QASM file per encoding and time point.
    ExportQasm(Common),
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    config: PathBuf,
    /// Directory for output files.
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Samples this many shots per time point instead of exact expectation
    /// values; a bare `--shots` uses 1024.
    #[arg(long, num_args = 0..=1, default_missing_value = DEFAULT_SHOTS_STR)]
    shots: Option<u64>,
}

impl Common {
    fn load(&self) -> Result<ScenarioConfig> {
        let text = fs::read_to_string(&self.config).with_context(|| format!("reading {}", self.config.display()))?;
        let mut cfg = ScenarioConfig::from_json(&text)?;
        if self.seed.is_some() {
            cfg.seed = self.seed;
        }
        if self.shots.is_some() {
            cfg.shots = self.shots;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_qasm(cfg: &ScenarioConfig, dir: &Path) -> Result<()> {
    for (name, text) in export_scenario_qasm(cfg)? {
        write(dir, &name, &text)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.load()?;
            let report = run_scenario(&cfg)?;
            if cfg.outputs.contains(&OutputKind::Csv) {
                write(&args.out_dir, &format!("{}.csv", cfg.name), &report.to_csv())?;
            }
            if cfg.outputs.contains(&OutputKind::Qasm) {
                write_qasm(&cfg, &args.out_dir)?;
            }
        }
        Command::Compare(args) => {
            let cfg = args.load()?;
            println!("scenario {} ({} steps, t_max = {})", cfg.name, cfg.n_steps, cfg.t_max);
            print!("{}", format_comparison(&compare_scenario(&cfg)?));
        }
        Command::ExportQasm(args) => {
            let cfg = args.load()?;
            write_qasm(&cfg, &args.out_dir)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nudicke::scenario::DEFAULT_SHOTS;

    #[test]
    fn bare_shots_flag_uses_default() {
        assert_eq!(DEFAULT_SHOTS_STR.parse::<u64>().unwrap(), DEFAULT_SHOTS);
        let cli = Cli::try_parse_from(["nudicke", "run", "x.json", "--shots"]).unwrap();
        let Command::Run(c) = cli.command else { panic!() };
        assert_eq!(c.shots, Some(DEFAULT_SHOTS));
    }
}
