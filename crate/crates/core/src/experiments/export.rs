//! Result files.
//!
//! An experiment with id `X` writes, into the output directory:
//!
//! | file              | content                                              |
//! |-------------------|------------------------------------------------------|
//! | `X.summary.csv`   | one row per (N, M, algorithm) with all statistics    |
//! | `X.trials.csv`    | one row per trial, including its topology/trial seeds |
//! | `X.cdf.csv`       | sorted rounds-to-convergence with cumulative fraction |
//! | `X.ne.csv`        | per-topology best/worst equilibrium estimates        |
//! | `X.oracle.csv`    | oracle suite rows (oracle experiments only)          |
//! | `X.result.json`   | the full [`ExperimentResult`], plan and seed manifest |
//!
//! Every CSV starts with `#` comment lines: the table name and format
//! version, then the caller's preamble (the resolved configuration).

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{ExperimentResult, TrialRecord};
use crate::dynamics::Algorithm;
use crate::error::Result;

pub const RESULT_FORMAT: &str = "spectrum-game result v1";

#[derive(Serialize)]
struct SummaryRow {
    n_cells: usize,
    n_channels: usize,
    algorithm: Algorithm,
    samples: usize,
    converged: usize,
    ne_verified: usize,
    rounds_mean: f64,
    rounds_min: f64,
    rounds_p5: f64,
    rounds_p25: f64,
    rounds_p50: f64,
    rounds_p75: f64,
    rounds_p95: f64,
    rounds_max: f64,
    interference_mean: f64,
    interference_min: f64,
    interference_p5: f64,
    interference_p25: f64,
    interference_p50: f64,
    interference_p75: f64,
    interference_p95: f64,
    interference_max: f64,
    bound_interference: f64,
    bound_violations: usize,
    ne_best: Option<f64>,
    ne_worst: Option<f64>,
}

#[derive(Serialize)]
struct CdfRow {
    n_cells: usize,
    n_channels: usize,
    algorithm: Algorithm,
    rounds: usize,
    cumulative_fraction: f64,
}

fn write_table<T: Serialize>(
    path: &Path,
    table: &str,
    preamble: &[String],
    rows: impl IntoIterator<Item = T>,
) -> Result<()> {
    let mut out = Vec::new();
    out.extend_from_slice(format!("# spectrum-game {table} v1\n").as_bytes());
    for line in preamble {
        out.extend_from_slice(format!("# {line}\n").as_bytes());
    }
    {
        let mut writer = csv::Writer::from_writer(&mut out);
        for row in rows {
            writer.serialize(row)?;
        }
        writer.flush()?;
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Writes every result file for `result` into `dir`, returning their paths.
pub fn write_result(
    result: &ExperimentResult,
    dir: impl AsRef<Path>,
    preamble: &[String],
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let id = &result.plan.id;
    let mut written = Vec::new();
    let mut path = |suffix: &str| {
        let p = dir.join(format!("{id}.{suffix}"));
        written.push(p.clone());
        p
    };

    if !result.cells.is_empty() {
        let rows = result.cells.iter().map(|c| SummaryRow {
            n_cells: c.n_cells,
            n_channels: c.n_channels,
            algorithm: c.algorithm,
            samples: c.samples,
            converged: c.converged,
            ne_verified: c.ne_verified,
            rounds_mean: c.rounds.mean,
            rounds_min: c.rounds.min,
            rounds_p5: c.rounds.p5,
            rounds_p25: c.rounds.p25,
            rounds_p50: c.rounds.p50,
            rounds_p75: c.rounds.p75,
            rounds_p95: c.rounds.p95,
            rounds_max: c.rounds.max,
            interference_mean: c.interference.mean,
            interference_min: c.interference.min,
            interference_p5: c.interference.p5,
            interference_p25: c.interference.p25,
            interference_p50: c.interference.p50,
            interference_p75: c.interference.p75,
            interference_p95: c.interference.p95,
            interference_max: c.interference.max,
            bound_interference: c.bound_interference,
            bound_violations: c.bound_violations,
            ne_best: c.ne_best,
            ne_worst: c.ne_worst,
        });
        write_table(&path("summary.csv"), "summary", preamble, rows)?;

        let mut cdf_rows = Vec::new();
        for c in &result.cells {
            let samples = result.rounds_samples(c.n_cells, c.n_channels, c.algorithm);
            let total = samples.len() as f64;
            cdf_rows.extend(samples.iter().enumerate().map(|(i, &r)| CdfRow {
                n_cells: c.n_cells,
                n_channels: c.n_channels,
                algorithm: c.algorithm,
                rounds: r as usize,
                cumulative_fraction: (i + 1) as f64 / total,
            }));
        }
        write_table(&path("cdf.csv"), "cdf", preamble, cdf_rows)?;
    }
    if !result.trials.is_empty() {
        write_table::<&TrialRecord>(&path("trials.csv"), "trials", preamble, &result.trials)?;
    }
    if !result.ne_estimates.is_empty() {
        write_table(
            &path("ne.csv"),
            "ne_estimates",
            preamble,
            &result.ne_estimates,
        )?;
    }
    if !result.oracle.is_empty() {
        write_table(&path("oracle.csv"), "oracle", preamble, &result.oracle)?;
    }

    let mut json = serde_json::to_string_pretty(result)?;
    json.push('\n');
    std::fs::write(path("result.json"), json)?;
    Ok(written)
}
