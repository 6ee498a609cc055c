use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ipp_cli::config::{DepositChoice, Mode};
use ipp_cli::error::exit;
use ipp_cli::{run_compare, run_oracle, run_plan, CliError, RunConfig};
use ipp_core::geometry_io::write_binary_stl;
use ipp_core::synthetic;

#[derive(Parser)]
#[command(name = "ipp", version, about = "Inspection path planning for a UAV camera formation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate viewpoints and an ant-colony path, write all artifacts.
    Plan {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compare the back-and-forth baseline with the colony over several seeds.
    Compare {
        config: PathBuf,
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Check the colony against exhaustive search on a small instance.
    Oracle {
        config: PathBuf,
        #[arg(long = "max-m", default_value_t = 10)]
        max_m: usize,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run whatever `mode` the config file selects.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Write one of the built-in benchmark structures as binary STL.
    Synth { structure: Structure, output: PathBuf },
}

#[derive(Args)]
struct Overrides {
    /// Output directory (overrides `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Random seed (overrides `aco.seed`).
    #[arg(long)]
    seed: Option<u64>,
    /// Return to the first viewpoint at the end of the path.
    #[arg(long)]
    closed_tour: bool,
    /// Pheromone deposit per edge cost or per path fitness.
    #[arg(long, value_enum)]
    deposit_rule: Option<DepositChoice>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Structure {
    SimpleTower,
    TwinTower,
}

fn load(config: &PathBuf, o: Overrides) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(config)?;
    if let Some(out) = o.out {
        cfg.out = out;
    }
    if let Some(seed) = o.seed {
        cfg.aco.seed = seed;
    }
    if o.closed_tour {
        cfg.aco.closed_tour = true;
    }
    if let Some(rule) = o.deposit_rule {
        cfg.aco.deposit_rule = rule;
    }
    Ok(cfg)
}

fn plan(cfg: &RunConfig) -> Result<(), CliError> {
    let r = run_plan(cfg)?;
    println!(
        "{} viewpoints, fitness {:.3}, written to {}",
        r.prepared.viewpoints.len(),
        r.fitness,
        cfg.out.display()
    );
    Ok(())
}

fn compare(cfg: &RunConfig, seeds: usize) -> Result<(), CliError> {
    let r = run_compare(cfg, seeds)?;
    println!("method,mean,std,improvement_percent");
    println!("baf,{:.3},0,0", r.baf_fitness);
    println!("aco,{:.3},{:.3},{:.2}", r.aco_mean, r.aco_std, r.improvement_percent);
    Ok(())
}

fn oracle(cfg: &RunConfig, max_m: usize) -> Result<(), CliError> {
    let r = run_oracle(cfg, max_m)?;
    println!(
        "{} viewpoints: optimum {:.6}, colony {:.6}, gap {:.3}%",
        r.viewpoint_count, r.optimum, r.aco_fitness, r.gap_percent
    );
    Ok(())
}

fn synth(structure: Structure, output: &PathBuf) -> Result<(), CliError> {
    let mesh = match structure {
        Structure::SimpleTower => synthetic::simple_tower::<f64>(),
        Structure::TwinTower => synthetic::twin_tower::<f64>(),
    };
    let mut bytes = Vec::new();
    write_binary_stl(&mesh, &mut bytes).map_err(|e| CliError::Output {
        path: output.clone(),
        source: e,
    })?;
    std::fs::write(output, bytes).map_err(|e| CliError::Output {
        path: output.clone(),
        source: e,
    })
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Plan { config, overrides } => plan(&load(&config, overrides)?),
        Command::Compare { config, seeds, overrides } => compare(&load(&config, overrides)?, seeds),
        Command::Oracle { config, max_m, overrides } => oracle(&load(&config, overrides)?, max_m),
        Command::Run { config, overrides } => {
            let cfg = load(&config, overrides)?;
            match cfg.mode {
                Mode::Plan => plan(&cfg),
                Mode::Compare => compare(&cfg, 10),
                Mode::Oracle => oracle(&cfg, 10),
            }
        }
        Command::Synth { structure, output } => synth(structure, &output),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
