use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spectrum_game::commands::{self, exit_code};
use spectrum_game::config::{Overrides, RunConfig};
use spectrum_game::{Algorithm, Exclusion};

/// Load-aware spectrum access for small-cell networks.
#[derive(Parser)]
#[command(name = "spectrum-game", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random deployment and write its topology file.
    Generate(Common),
    /// Run one dynamics to convergence and write a trace file.
    Run(Common),
    /// Run the experiment described by the config's [experiment] section.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config file.
    #[arg(long, conflicts_with_all = ["preset", "replay"])]
    config: Option<PathBuf>,
    /// Reuse the config embedded in an earlier output file.
    #[arg(long, conflicts_with = "preset")]
    replay: Option<PathBuf>,
    /// Built-in config: default, convergence, sweep-cells, sweep-channels, tiny-oracle.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cells: Option<usize>,
    #[arg(long)]
    channels: Option<usize>,
    /// standard, autonomous or random_once.
    #[arg(long)]
    algorithm: Option<Algorithm>,
    /// one_hop or two_hop.
    #[arg(long)]
    exclusion: Option<Exclusion>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    topologies: Option<usize>,
    /// Worker threads (0 = one per core). Does not affect results.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    max_rounds: Option<usize>,
}

impl Common {
    fn resolve(&self) -> spectrum_game::Result<RunConfig> {
        let mut config = match (&self.config, &self.replay, &self.preset) {
            (Some(path), _, _) => RunConfig::from_file(path)?,
            (None, Some(path), _) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    spectrum_game::Error::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                RunConfig::from_embedded(&text)?
            }
            (None, None, Some(name)) => RunConfig::preset(name)?,
            (None, None, None) => RunConfig::default(),
        };
        config.apply(&Overrides {
            seed: self.seed,
            cells: self.cells,
            channels: self.channels,
            algorithm: self.algorithm,
            exclusion: self.exclusion,
            trials: self.trials,
            topologies: self.topologies,
            workers: self.workers,
            out_dir: self.out_dir.clone(),
            max_rounds: self.max_rounds,
        });
        Ok(config)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, command): (_, fn(&RunConfig) -> _) = match &cli.command {
        Command::Generate(a) => (a, commands::cmd_generate),
        Command::Run(a) => (a, commands::cmd_run),
        Command::Sweep(a) => (a, commands::cmd_sweep),
    };
    match args.resolve().and_then(|config| command(&config)) {
        Ok(out) => {
            println!("{}", out.summary.trim_end());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
