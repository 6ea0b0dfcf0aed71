//! The `generate`, `run` and `sweep` commands behind the CLI binary.
//!
//! Each command takes a resolved [`RunConfig`], writes its files under
//! `output.out_dir`, and returns the human-readable summary the binary
//! prints. Every file embeds the resolved config as a `# config ...` line.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::experiments::{self, topology_seed, trial_seed, ExperimentKind};
use crate::game::GameInstance;
use crate::topology::{generate_topology, NetworkTopology};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const NON_CONVERGENCE: i32 = 3;
    pub const ORACLE_CAP: i32 = 4;
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::InvalidParameter(_)
        | Error::Validation(_)
        | Error::Parse { .. }
        | Error::InvalidProfile(_)
        | Error::IndexOutOfRange { .. }
        | Error::ChannelOutOfRange { .. } => exit::CONFIG,
        Error::NonConvergence { .. } => exit::NON_CONVERGENCE,
        Error::OracleCapExceeded { .. } => exit::ORACLE_CAP,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => exit::FAILURE,
    }
}

#[derive(Debug)]
pub struct CommandOutput {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn preamble(config: &RunConfig) -> Vec<String> {
    vec![format!("config {}", config.embedded())]
}

fn topology_text(topology: &NetworkTopology, config: &RunConfig) -> String {
    let text = topology.to_text();
    let (header, body) = text.split_once('\n').expect("topology text has a header");
    let mut out = format!("{header}\n");
    for line in preamble(config) {
        writeln!(out, "# {line}").unwrap();
    }
    out.push_str(body);
    out
}

/// The deployment used by `generate` and `run`: topology 0 of grid point
/// `N = topology.cells` under the configured seed.
pub fn configured_topology(config: &RunConfig) -> Result<NetworkTopology> {
    config.validate()?;
    let seed = topology_seed(config.seed, config.topology.cells, 0);
    generate_topology(&config.deployment(), seed)
}

pub fn cmd_generate(config: &RunConfig) -> Result<CommandOutput> {
    let topology = configured_topology(config)?;
    let dir = &config.output.out_dir;
    std::fs::create_dir_all(dir)?;
    let path = dir.join("topology.txt");
    std::fs::write(&path, topology_text(&topology, config))?;

    let hist: Vec<String> = topology
        .load_histogram()
        .iter()
        .map(|(k, c)| format!("K={k}:{c}"))
        .collect();
    let summary = format!(
        "generated {} cells in a {:.1} m square, {} edges, mean degree {:.3}, loads [{}] -> {}",
        topology.n_cells(),
        topology.region_side(),
        topology.edges().len(),
        topology.mean_degree(),
        hist.join(" "),
        path.display()
    );
    Ok(CommandOutput {
        files: vec![path],
        summary,
    })
}

pub fn cmd_run(config: &RunConfig) -> Result<CommandOutput> {
    let topology = configured_topology(config)?;
    let game = GameInstance::new(topology, config.game.channels)?;
    let algorithm = config.dynamics.algorithm;
    let seed = trial_seed(config.seed, config.topology.cells, 0, 0);
    let trace = experiments::run_trial(
        &game,
        algorithm,
        seed,
        &config.contention(),
        config.dynamics.max_rounds,
    )?;

    let dir = &config.output.out_dir;
    std::fs::create_dir_all(dir)?;
    let topo_path = dir.join("topology.txt");
    std::fs::write(&topo_path, topology_text(game.topology(), config))?;
    let trace_path = dir.join("trace.txt");
    let mut lines = preamble(config);
    lines.push(format!("trial_seed {seed}"));
    std::fs::write(&trace_path, trace.to_text(&lines))?;

    let interference = game.aggregate_interference(&trace.final_profile);
    let summary = format!(
        "{algorithm}: rounds {} (effective {}), final interference {interference}, potential {}, bound {}, ne_verified {}",
        trace.rounds_to_convergence,
        trace.effective_rounds(),
        game.potential(&trace.final_profile),
        game.ne_lower_bound(),
        trace.ne_verified
    );
    Ok(CommandOutput {
        files: vec![topo_path, trace_path],
        summary,
    })
}

pub fn cmd_sweep(config: &RunConfig) -> Result<CommandOutput> {
    config.validate()?;
    let plan = config.plan()?;
    let result =
        experiments::with_workers(config.output.workers, || experiments::run_experiment(&plan))??;
    let files = experiments::write_result(&result, &config.output.out_dir, &preamble(config))?;

    let mut summary = String::new();
    writeln!(summary, "{} ({}):", plan.id, plan.kind).unwrap();
    if plan.kind == ExperimentKind::Oracle {
        for row in &result.oracle {
            if row.is_ok() {
                writeln!(
                    summary,
                    "  instance {:>3}: N={} M={} optimum {} NE range [{}, {}] ({} NE), BR [{}, {}], estimate [{}, {}]",
                    row.instance,
                    row.n_cells,
                    row.n_channels,
                    opt(row.optimum),
                    opt(row.ne_min),
                    opt(row.ne_max),
                    opt(row.ne_count),
                    opt(row.br_min),
                    opt(row.br_max),
                    opt(row.estimate_best),
                    opt(row.estimate_worst),
                )
                .unwrap();
            } else {
                writeln!(
                    summary,
                    "  warning: instance {} {}",
                    row.instance, row.status
                )
                .unwrap();
            }
        }
    } else {
        for c in &result.cells {
            write!(
                summary,
                "  N={:>3} M={:>2} {:<11} rounds median {:>6.1} mean {:>8.2} | interference mean {:>7.2} bound {:>7.2}",
                c.n_cells,
                c.n_channels,
                c.algorithm.as_str(),
                c.rounds.p50,
                c.rounds.mean,
                c.interference.mean,
                c.bound_interference
            )
            .unwrap();
            if let (Some(b), Some(w)) = (c.ne_best, c.ne_worst) {
                write!(summary, " | best NE {b:.2} worst NE {w:.2}").unwrap();
            }
            summary.push('\n');
        }
    }
    for f in &files {
        writeln!(summary, "  wrote {}", f.display()).unwrap();
    }
    Ok(CommandOutput { files, summary })
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".into(), |v| v.to_string())
}
