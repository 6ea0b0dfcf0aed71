//! Seeded experiment grids.
//!
//! Every random quantity in an experiment derives from one master seed:
//! topology seeds from `(N, topology index)`, trial seeds from
//! `(N, topology index, trial index)`. Trial seeds do not depend on the
//! channel count or the algorithm, so every algorithm and every `M` at a grid
//! point starts from the same topologies and the same random stream per trial.
//! Jobs run in parallel but are merged in job order, so results are
//! identical for any worker count.

mod export;
mod oracle_suite;
pub mod stats;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{run_to_convergence, Algorithm, ContentionConfig};
use crate::error::{Error, Result};
use crate::game::GameInstance;
use crate::topology::{generate_topology, DeploymentParams, NetworkTopology};

pub use export::{write_result, RESULT_FORMAT};
pub use oracle_suite::{oracle_comparison, OracleRow};
use stats::Summary;

const TOPOLOGY_STREAM: u64 = 1;
const TRIAL_STREAM: u64 = 2;
const NE_STREAM: u64 = 3;

/// Mixes `path` into `master` with the splitmix64 finalizer, one step per
/// element.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    path.iter().fold(mix(master), |acc, &p| mix(acc ^ mix(p)))
}

pub fn topology_seed(master: u64, n_cells: usize, topology: usize) -> u64 {
    derive_seed(master, &[TOPOLOGY_STREAM, n_cells as u64, topology as u64])
}

pub fn trial_seed(master: u64, n_cells: usize, topology: usize, trial: usize) -> u64 {
    derive_seed(
        master,
        &[TRIAL_STREAM, n_cells as u64, topology as u64, trial as u64],
    )
}

pub fn ne_run_seed(master: u64, n_cells: usize, topology: usize, run: usize) -> u64 {
    derive_seed(
        master,
        &[NE_STREAM, n_cells as u64, topology as u64, run as u64],
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    ConvergenceCdf,
    SweepCells,
    SweepChannels,
    BestWorstNe,
    Oracle,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::ConvergenceCdf => "convergence_cdf",
            ExperimentKind::SweepCells => "sweep_cells",
            ExperimentKind::SweepChannels => "sweep_channels",
            ExperimentKind::BestWorstNe => "best_worst_ne",
            ExperimentKind::Oracle => "oracle",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            ExperimentKind::ConvergenceCdf,
            ExperimentKind::SweepCells,
            ExperimentKind::SweepChannels,
            ExperimentKind::BestWorstNe,
            ExperimentKind::Oracle,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| Error::InvalidParameter(format!("unknown experiment kind {s:?}")))
    }
}

/// Everything needed to replay an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub id: String,
    pub kind: ExperimentKind,
    /// `n_cells` is taken from `cells_grid`; the rest is shared.
    pub deployment: DeploymentParams,
    pub cells_grid: Vec<usize>,
    pub channels_grid: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    /// Topologies per grid point (oracle: number of tiny instances).
    pub topologies: usize,
    /// Trials per topology and algorithm.
    pub trials: usize,
    /// Standard-BR runs per topology for best/worst equilibrium estimates;
    /// zero disables the estimate.
    pub ne_runs: usize,
    pub contention: ContentionConfig,
    pub max_rounds: usize,
    pub seed: u64,
    /// Largest joint action space the oracle suite will enumerate.
    pub oracle_cap: u128,
}

impl ExperimentPlan {
    pub fn new(id: impl Into<String>, kind: ExperimentKind) -> Self {
        ExperimentPlan {
            id: id.into(),
            kind,
            deployment: DeploymentParams::default(),
            cells_grid: vec![20],
            channels_grid: vec![5],
            algorithms: vec![Algorithm::Standard, Algorithm::Autonomous],
            topologies: 5,
            trials: 1000,
            ne_runs: 0,
            contention: ContentionConfig::default(),
            max_rounds: 100_000,
            seed: 1,
            oracle_cap: crate::dynamics::DEFAULT_ORACLE_CAP,
        }
    }

    /// Grid points as `(N, M)`, N-major.
    pub fn points(&self) -> Vec<(usize, usize)> {
        self.cells_grid
            .iter()
            .flat_map(|&n| self.channels_grid.iter().map(move |&m| (n, m)))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.cells_grid.is_empty() || self.channels_grid.is_empty() {
            return Err(Error::InvalidParameter("experiment grid is empty".into()));
        }
        if self.cells_grid.contains(&0) {
            return Err(Error::InvalidParameter(
                "cell counts must be positive".into(),
            ));
        }
        if self.topologies == 0 {
            return Err(Error::InvalidParameter(
                "topologies must be at least 1".into(),
            ));
        }
        if !self.algorithms.is_empty() && self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.max_rounds == 0 {
            return Err(Error::InvalidParameter(
                "max_rounds must be at least 1".into(),
            ));
        }
        if self.kind != ExperimentKind::Oracle {
            let max_load = self.deployment.max_load();
            if let Some(&m) = self.channels_grid.iter().find(|&&m| m < max_load) {
                return Err(Error::InvalidParameter(format!(
                    "channel count {m} is below the maximum load {max_load}"
                )));
            }
        }
        self.contention.validate()?;
        self.deployment.with_cells(self.cells_grid[0]).validate()
    }
}

/// One dynamics run inside an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n_cells: usize,
    pub n_channels: usize,
    pub algorithm: Algorithm,
    pub topology: usize,
    pub topology_seed: u64,
    pub trial: usize,
    pub trial_seed: u64,
    pub rounds: usize,
    pub effective_rounds: usize,
    pub initial_interference: u64,
    pub final_interference: u64,
    pub converged: bool,
    pub ne_verified: bool,
    pub monotone: bool,
    /// `Σ_n Σ_{j∈J_n} K_n K_j`; the equilibrium bound is `-load_coupling / M`.
    pub load_coupling: u64,
}

impl TrialRecord {
    /// `-Σ s_n ≥ -load_coupling / M`, compared exactly.
    pub fn satisfies_bound(&self) -> bool {
        u128::from(self.final_interference) * self.n_channels as u128
            <= u128::from(self.load_coupling)
    }
}

/// Best and worst equilibria found by repeated standard BR from random
/// starts. These are estimates: only an exhaustive oracle gives true values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeEstimate {
    pub n_cells: usize,
    pub n_channels: usize,
    pub topology: usize,
    pub topology_seed: u64,
    pub runs: usize,
    pub best: u64,
    pub worst: u64,
    pub mean: f64,
}

/// Statistics for one `(N, M, algorithm)` grid cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n_cells: usize,
    pub n_channels: usize,
    pub algorithm: Algorithm,
    pub samples: usize,
    pub converged: usize,
    pub ne_verified: usize,
    pub rounds: Summary,
    pub interference: Summary,
    /// Mean over topologies of `load_coupling / M`, the largest aggregate
    /// interference any equilibrium can have.
    pub bound_interference: f64,
    pub bound_violations: usize,
    /// Means over topologies of the per-topology estimates.
    pub ne_best: Option<f64>,
    pub ne_worst: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologySeed {
    pub n_cells: usize,
    pub topology: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedManifest {
    pub master_seed: u64,
    pub derivation: String,
    pub topologies: Vec<TopologySeed>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub format: String,
    pub plan: ExperimentPlan,
    pub manifest: SeedManifest,
    pub cells: Vec<CellSummary>,
    pub ne_estimates: Vec<NeEstimate>,
    pub trials: Vec<TrialRecord>,
    pub oracle: Vec<OracleRow>,
}

impl ExperimentResult {
    pub fn cell(
        &self,
        n_cells: usize,
        n_channels: usize,
        algorithm: Algorithm,
    ) -> Option<&CellSummary> {
        self.cells.iter().find(|c| {
            c.n_cells == n_cells && c.n_channels == n_channels && c.algorithm == algorithm
        })
    }

    /// Rounds-to-convergence samples of one grid cell, ascending.
    pub fn rounds_samples(
        &self,
        n_cells: usize,
        n_channels: usize,
        algorithm: Algorithm,
    ) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .trials
            .iter()
            .filter(|t| {
                t.n_cells == n_cells && t.n_channels == n_channels && t.algorithm == algorithm
            })
            .map(|t| t.rounds as f64)
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Runs `f` on a pool of `workers` threads (0 = rayon's default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Repeats standard BR from independent random starts (one per seed) and
/// reports the best and worst final aggregate interference.
pub fn estimate_best_worst_ne(
    game: &GameInstance,
    seeds: &[u64],
    max_rounds: usize,
) -> Result<(u64, u64, f64)> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("need at least one run".into()));
    }
    let mut best = u64::MAX;
    let mut worst = 0;
    let mut total = 0u64;
    for &seed in seeds {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let initial = game.random_profile(&mut rng);
        let trace = run_to_convergence(
            game,
            &initial,
            Algorithm::Standard,
            &ContentionConfig::default(),
            &mut rng,
            max_rounds,
        )?;
        if !trace.converged {
            return Err(Error::NonConvergence { max_rounds });
        }
        let value = game.aggregate_interference(&trace.final_profile);
        best = best.min(value);
        worst = worst.max(value);
        total += value;
    }
    Ok((best, worst, total as f64 / seeds.len() as f64))
}

/// Runs one trial: a uniform random start drawn from the trial seed, then
/// the chosen dynamics on the same random stream.
pub fn run_trial(
    game: &GameInstance,
    algorithm: Algorithm,
    trial_seed: u64,
    contention: &ContentionConfig,
    max_rounds: usize,
) -> Result<crate::dynamics::DynamicsTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let initial = game.random_profile(&mut rng);
    let trace = run_to_convergence(game, &initial, algorithm, contention, &mut rng, max_rounds)?;
    if algorithm.seeks_equilibrium() && !trace.converged {
        return Err(Error::NonConvergence { max_rounds });
    }
    Ok(trace)
}

struct Point {
    n_cells: usize,
    n_channels: usize,
}

fn run_grid(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    plan.validate()?;

    let mut topologies: Vec<TopologySeed> = Vec::new();
    for &n in &plan.cells_grid {
        for t in 0..plan.topologies {
            topologies.push(TopologySeed {
                n_cells: n,
                topology: t,
                seed: topology_seed(plan.seed, n, t),
            });
        }
    }
    let generated: Vec<NetworkTopology> = topologies
        .par_iter()
        .map(|ts| generate_topology(&plan.deployment.with_cells(ts.n_cells), ts.seed))
        .collect::<Result<_>>()?;
    let topology_for = |n: usize, t: usize| -> &NetworkTopology {
        let idx = topologies
            .iter()
            .position(|ts| ts.n_cells == n && ts.topology == t)
            .expect("topology generated for every grid point");
        &generated[idx]
    };

    let points: Vec<Point> = plan
        .points()
        .into_iter()
        .map(|(n_cells, n_channels)| Point {
            n_cells,
            n_channels,
        })
        .collect();
    let games: Vec<Vec<GameInstance>> = points
        .iter()
        .map(|p| {
            (0..plan.topologies)
                .map(|t| GameInstance::new(topology_for(p.n_cells, t).clone(), p.n_channels))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let mut trial_jobs = Vec::new();
    for (pi, _) in points.iter().enumerate() {
        for &alg in &plan.algorithms {
            for t in 0..plan.topologies {
                for j in 0..plan.trials {
                    trial_jobs.push((pi, alg, t, j));
                }
            }
        }
    }
    let trials: Vec<TrialRecord> = trial_jobs
        .par_iter()
        .map(|&(pi, algorithm, t, j)| {
            let p = &points[pi];
            let game = &games[pi][t];
            let seed = trial_seed(plan.seed, p.n_cells, t, j);
            let trace = run_trial(game, algorithm, seed, &plan.contention, plan.max_rounds)?;
            Ok(TrialRecord {
                n_cells: p.n_cells,
                n_channels: p.n_channels,
                algorithm,
                topology: t,
                topology_seed: topology_seed(plan.seed, p.n_cells, t),
                trial: j,
                trial_seed: seed,
                rounds: trace.rounds_to_convergence,
                effective_rounds: trace.effective_rounds(),
                initial_interference: trace.initial_aggregate_interference,
                final_interference: game.aggregate_interference(&trace.final_profile),
                converged: trace.converged,
                ne_verified: trace.ne_verified,
                monotone: trace.is_potential_monotone(),
                load_coupling: game.load_coupling(),
            })
        })
        .collect::<Result<_>>()?;

    let ne_jobs: Vec<(usize, usize)> = if plan.ne_runs > 0 {
        (0..points.len())
            .flat_map(|pi| (0..plan.topologies).map(move |t| (pi, t)))
            .collect()
    } else {
        Vec::new()
    };
    let ne_estimates: Vec<NeEstimate> = ne_jobs
        .par_iter()
        .map(|&(pi, t)| {
            let p = &points[pi];
            let seeds: Vec<u64> = (0..plan.ne_runs)
                .map(|r| ne_run_seed(plan.seed, p.n_cells, t, r))
                .collect();
            let (best, worst, mean) =
                estimate_best_worst_ne(&games[pi][t], &seeds, plan.max_rounds)?;
            Ok(NeEstimate {
                n_cells: p.n_cells,
                n_channels: p.n_channels,
                topology: t,
                topology_seed: topology_seed(plan.seed, p.n_cells, t),
                runs: plan.ne_runs,
                best,
                worst,
                mean,
            })
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::new();
    for (pi, p) in points.iter().enumerate() {
        let estimates: Vec<&NeEstimate> = ne_estimates
            .iter()
            .filter(|e| e.n_cells == p.n_cells && e.n_channels == p.n_channels)
            .collect();
        let est_mean = |f: fn(&NeEstimate) -> f64| {
            (!estimates.is_empty())
                .then(|| estimates.iter().map(|e| f(e)).sum::<f64>() / estimates.len() as f64)
        };
        let bound_interference = games[pi]
            .iter()
            .map(|g| g.load_coupling() as f64 / p.n_channels as f64)
            .sum::<f64>()
            / plan.topologies as f64;
        for &alg in &plan.algorithms {
            let rows: Vec<&TrialRecord> = trials
                .iter()
                .filter(|r| {
                    r.n_cells == p.n_cells && r.n_channels == p.n_channels && r.algorithm == alg
                })
                .collect();
            let rounds: Vec<f64> = rows.iter().map(|r| r.rounds as f64).collect();
            let interference: Vec<f64> = rows.iter().map(|r| r.final_interference as f64).collect();
            cells.push(CellSummary {
                n_cells: p.n_cells,
                n_channels: p.n_channels,
                algorithm: alg,
                samples: rows.len(),
                converged: rows.iter().filter(|r| r.converged).count(),
                ne_verified: rows.iter().filter(|r| r.ne_verified).count(),
                rounds: Summary::of(&rounds),
                interference: Summary::of(&interference),
                bound_interference,
                bound_violations: rows
                    .iter()
                    .filter(|r| r.ne_verified && !r.satisfies_bound())
                    .count(),
                ne_best: est_mean(|e| e.best as f64),
                ne_worst: est_mean(|e| e.worst as f64),
            });
        }
    }

    Ok(ExperimentResult {
        format: RESULT_FORMAT.to_string(),
        plan: plan.clone(),
        manifest: SeedManifest {
            master_seed: plan.seed,
            derivation: "splitmix64 over (stream, n_cells, topology[, trial])".into(),
            topologies,
        },
        cells,
        ne_estimates,
        trials,
        oracle: Vec::new(),
    })
}

fn expect_kind(plan: &ExperimentPlan, kind: ExperimentKind) -> Result<()> {
    if plan.kind == kind {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "plan {} is a {} experiment, not {kind}",
            plan.id, plan.kind
        )))
    }
}

/// Rounds-to-convergence distributions per `(N, algorithm)`.
pub fn convergence_cdf(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    expect_kind(plan, ExperimentKind::ConvergenceCdf)?;
    if plan.algorithms.is_empty() {
        return Err(Error::InvalidParameter("no algorithms to compare".into()));
    }
    run_grid(plan)
}

/// Final aggregate interference as the number of cells varies.
pub fn sweep_cells(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    expect_kind(plan, ExperimentKind::SweepCells)?;
    run_grid(plan)
}

/// Final aggregate interference as the number of channels varies.
pub fn sweep_channels(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    expect_kind(plan, ExperimentKind::SweepChannels)?;
    run_grid(plan)
}

/// Best/worst equilibrium estimates only.
pub fn best_worst_grid(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    expect_kind(plan, ExperimentKind::BestWorstNe)?;
    if plan.ne_runs == 0 {
        return Err(Error::InvalidParameter("ne_runs must be at least 1".into()));
    }
    run_grid(plan)
}

/// Dispatches on `plan.kind`.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    match plan.kind {
        ExperimentKind::ConvergenceCdf => convergence_cdf(plan),
        ExperimentKind::SweepCells => sweep_cells(plan),
        ExperimentKind::SweepChannels => sweep_channels(plan),
        ExperimentKind::BestWorstNe => best_worst_grid(plan),
        ExperimentKind::Oracle => oracle_comparison(plan),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_plan(kind: ExperimentKind) -> ExperimentPlan {
        let mut plan = ExperimentPlan::new("t", kind);
        plan.cells_grid = vec![8];
        plan.topologies = 2;
        plan.trials = 5;
        plan
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_eq!(derive_seed(1, &[2, 3]), derive_seed(1, &[2, 3]));
        assert_ne!(derive_seed(1, &[2, 3]), derive_seed(1, &[3, 2]));
        assert_ne!(trial_seed(1, 20, 0, 0), trial_seed(1, 20, 0, 1));
        assert_ne!(topology_seed(1, 20, 0), topology_seed(2, 20, 0));
    }

    #[test]
    fn empty_grid_rejected() {
        let mut plan = small_plan(ExperimentKind::SweepCells);
        plan.cells_grid.clear();
        assert!(sweep_cells(&plan).is_err());
        let mut plan = small_plan(ExperimentKind::SweepChannels);
        plan.channels_grid = vec![2];
        assert!(matches!(
            sweep_channels(&plan),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn wrong_kind_rejected() {
        let plan = small_plan(ExperimentKind::SweepCells);
        assert!(convergence_cdf(&plan).is_err());
    }

    #[test]
    fn single_cell_cdf_is_degenerate() {
        let mut plan = small_plan(ExperimentKind::ConvergenceCdf);
        plan.cells_grid = vec![1];
        let r = convergence_cdf(&plan).unwrap();
        assert!(r
            .trials
            .iter()
            .all(|t| t.rounds <= 1 && t.final_interference == 0));
    }

    #[test]
    fn single_run_estimate_is_tight() {
        let t = crate::topology::generate(10, &[1, 2, 3], 200.0, 20, 60.0, 3).unwrap();
        let g = GameInstance::new(t, 5).unwrap();
        let (best, worst, mean) = estimate_best_worst_ne(&g, &[77], 1000).unwrap();
        assert_eq!(best, worst);
        assert_eq!(mean, best as f64);
        assert!(estimate_best_worst_ne(&g, &[], 1000).is_err());
    }

    #[test]
    fn grid_records_are_traceable() {
        let mut plan = small_plan(ExperimentKind::SweepCells);
        plan.algorithms = Algorithm::ALL.to_vec();
        plan.ne_runs = 10;
        let r = sweep_cells(&plan).unwrap();
        assert_eq!(r.trials.len(), 3 * 2 * 5);
        for rec in &r.trials {
            assert_eq!(
                rec.trial_seed,
                trial_seed(plan.seed, rec.n_cells, rec.topology, rec.trial)
            );
            assert_eq!(
                rec.topology_seed,
                topology_seed(plan.seed, rec.n_cells, rec.topology)
            );
        }
        for e in &r.ne_estimates {
            assert!(e.best as f64 <= e.mean && e.mean <= e.worst as f64);
        }
        assert_eq!(r.cells.len(), 3);
    }
}
