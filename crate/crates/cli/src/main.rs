//! `rishm`: runs the RIS-aided holographic MIMO sweeps and writes CSV results.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 configuration or usage error,
//! 3 the optimiser hit its iteration cap on some trial (results are still written).

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rishm_core::experiments::{
    run_dof_vs_distance, run_dof_vs_ris_position, run_modes, run_rate_vs_ris_size, ExperimentConfig,
    RunOptions, SweepOutput,
};
use rishm_core::{Error, PgmStatus};

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "rishm", version, about = "RIS-aided holographic MIMO rate and DoF sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Achievable rate against the number of RIS cells.
    RateVsN(Common),
    /// Effective rank against the wall distance D.
    DofVsDistance(Common),
    /// Effective rank against the RIS offset d_ris.
    DofVsRisPosition(Common),
    /// Strongest communication modes observed at the RIS.
    Modes(ModesArgs),
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the number of trials per point and K.
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// Fill the wall_time_ms column (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ModesArgs {
    #[command(flatten)]
    common: Common,
    /// Also write the channel draw in the binary dump format.
    #[arg(long)]
    dump_channels: Option<PathBuf>,
}

fn load(common: &Common) -> Result<rishm_core::experiments::ResolvedConfig, Error> {
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.channel.seed = seed;
    }
    if let Some(trials) = common.trials {
        cfg.channel.trials = Some(trials);
    }
    if common.threads == Some(0) {
        return Err(Error::Config {
            path: "--threads".into(),
            message: "must be at least 1".into(),
        });
    }
    cfg.resolve()
}

fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.summary.csv"))
}

fn write_sweep(out: &SweepOutput, path: &Path) -> Result<bool, Error> {
    out.write_csv(path)?;
    eprintln!("wrote {} records to {}", out.records.len(), path.display());
    Ok(out.hit_iteration_cap())
}

fn run(cli: Cli) -> Result<bool, Error> {
    let (common, kind) = match &cli.command {
        Command::RateVsN(c) => (c, 0),
        Command::DofVsDistance(c) => (c, 1),
        Command::DofVsRisPosition(c) => (c, 2),
        Command::Modes(m) => (&m.common, 3),
    };
    let cfg = load(common)?;
    let opts = RunOptions {
        threads: common.threads,
        record_timing: common.timing,
    };
    match kind {
        0 => write_sweep(&run_rate_vs_ris_size(&cfg, &opts)?, &common.out),
        1 => write_sweep(&run_dof_vs_distance(&cfg, &opts)?, &common.out),
        2 => write_sweep(&run_dof_vs_ris_position(&cfg, &opts)?, &common.out),
        _ => {
            let modes = run_modes(&cfg, &opts)?;
            std::fs::write(&common.out, modes.to_csv())?;
            let summary = summary_path(&common.out);
            std::fs::write(&summary, modes.summary_csv())?;
            if let Command::Modes(ModesArgs { dump_channels: Some(path), .. }) = &cli.command {
                modes.channels.write_dump(BufWriter::new(File::create(path)?))?;
                eprintln!("wrote channel dump to {}", path.display());
            }
            eprintln!(
                "wrote {} modes over {} cells to {} (summary in {})",
                modes.fields.len(),
                modes.cells.len(),
                common.out.display(),
                summary.display()
            );
            Ok(modes.status == PgmStatus::IterationCap)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("warning: the optimiser hit its iteration cap on at least one trial");
            ExitCode::from(EXIT_NOT_CONVERGED)
        }
        Err(e @ Error::Config { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
