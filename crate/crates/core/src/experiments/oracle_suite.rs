//! Exhaustive comparisons on tiny random instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    derive_seed, estimate_best_worst_ne, run_trial, ExperimentKind, ExperimentPlan,
    ExperimentResult, SeedManifest, TopologySeed, TrialRecord, RESULT_FORMAT,
};
use crate::dynamics::{
    brute_force_optimum_with_cap, enumerate_nash_equilibria_with_cap, joint_action_space_size,
};
use crate::error::{Error, Result};
use crate::game::GameInstance;
use crate::topology::generate_topology;

const INSTANCE_STREAM: u64 = 4;
const ORACLE_TRIAL_STREAM: u64 = 5;
const ORACLE_NE_STREAM: u64 = 6;

/// One tiny instance with its exhaustive ground truth. `status` is `ok` or a
/// `skipped: ...` note when the joint action space exceeds the cap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub instance: usize,
    pub topology_seed: u64,
    pub n_cells: usize,
    pub n_channels: usize,
    pub edges: usize,
    pub joint_size: u128,
    pub status: String,
    pub optimum: Option<u64>,
    pub optimum_is_ne: Option<bool>,
    pub ne_count: Option<usize>,
    pub ne_min: Option<u64>,
    pub ne_max: Option<u64>,
    pub br_min: Option<u64>,
    pub br_max: Option<u64>,
    pub estimate_best: Option<u64>,
    pub estimate_worst: Option<u64>,
}

impl OracleRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    /// Every BR-converged value and both estimates lie inside the true
    /// equilibrium range, and the optimum is itself an equilibrium.
    pub fn consistent(&self) -> bool {
        let within = |v: Option<u64>| match (v, self.ne_min, self.ne_max) {
            (Some(v), Some(lo), Some(hi)) => lo <= v && v <= hi,
            (None, _, _) => true,
            _ => false,
        };
        self.optimum_is_ne == Some(true)
            && self.optimum == self.ne_min
            && within(self.br_min)
            && within(self.br_max)
            && within(self.estimate_best)
            && within(self.estimate_worst)
    }
}

/// For `plan.topologies` random tiny instances: brute-force optimum, every
/// Nash equilibrium, `plan.trials` runs of each algorithm and a best/worst
/// estimate from `plan.ne_runs` standard-BR runs.
///
/// Instance `i` draws `N` from `cells_grid` and `M` from `channels_grid`;
/// loads come from the part of the load set that fits in `M`. The region is
/// `base_region` on a side regardless of `N`, which keeps tiny instances
/// dense.
pub fn oracle_comparison(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    if plan.kind != ExperimentKind::Oracle {
        return Err(Error::InvalidParameter(format!(
            "plan {} is a {} experiment, not oracle",
            plan.id, plan.kind
        )));
    }
    plan.validate()?;
    if plan.algorithms.iter().any(|a| !a.seeks_equilibrium()) {
        return Err(Error::InvalidParameter(
            "oracle comparison accepts only standard and autonomous".into(),
        ));
    }

    let outcomes: Vec<(OracleRow, TopologySeed, Vec<TrialRecord>)> = (0..plan.topologies)
        .into_par_iter()
        .map(|i| oracle_instance(plan, i))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    let mut topologies = Vec::new();
    let mut trials = Vec::new();
    for (row, seed, records) in outcomes {
        rows.push(row);
        topologies.push(seed);
        trials.extend(records);
    }
    Ok(ExperimentResult {
        format: RESULT_FORMAT.to_string(),
        plan: plan.clone(),
        manifest: SeedManifest {
            master_seed: plan.seed,
            derivation: "splitmix64 over (stream, instance[, trial])".into(),
            topologies,
        },
        cells: Vec::new(),
        ne_estimates: Vec::new(),
        trials,
        oracle: rows,
    })
}

fn oracle_instance(
    plan: &ExperimentPlan,
    i: usize,
) -> Result<(OracleRow, TopologySeed, Vec<TrialRecord>)> {
    let mut picker =
        ChaCha8Rng::seed_from_u64(derive_seed(plan.seed, &[INSTANCE_STREAM, i as u64]));
    let n_cells = plan.cells_grid[picker.gen_range(0..plan.cells_grid.len())];
    let n_channels = plan.channels_grid[picker.gen_range(0..plan.channels_grid.len())];
    let topo_seed = picker.gen::<u64>();

    let mut deployment = plan.deployment.with_cells(n_cells);
    deployment.base_cells = n_cells;
    deployment.load_set.retain(|&k| k <= n_channels);
    if deployment.load_set.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no load in the load set fits {n_channels} channels"
        )));
    }
    let topology = generate_topology(&deployment, topo_seed)?;
    let game = GameInstance::new(topology, n_channels)?;
    let joint_size = joint_action_space_size(&game);
    let seed_entry = TopologySeed {
        n_cells,
        topology: i,
        seed: topo_seed,
    };

    let mut row = OracleRow {
        instance: i,
        topology_seed: topo_seed,
        n_cells,
        n_channels,
        edges: game.topology().edges().len(),
        joint_size,
        status: "ok".into(),
        optimum: None,
        optimum_is_ne: None,
        ne_count: None,
        ne_min: None,
        ne_max: None,
        br_min: None,
        br_max: None,
        estimate_best: None,
        estimate_worst: None,
    };

    let (optimum_profile, optimum) = match brute_force_optimum_with_cap(&game, plan.oracle_cap) {
        Ok(v) => v,
        Err(Error::OracleCapExceeded { size, cap }) => {
            row.status = format!("skipped: joint action space {size} exceeds cap {cap}");
            return Ok((row, seed_entry, Vec::new()));
        }
        Err(e) => return Err(e),
    };
    let equilibria = enumerate_nash_equilibria_with_cap(&game, plan.oracle_cap)?;
    row.optimum = Some(optimum);
    row.optimum_is_ne = Some(game.is_nash_equilibrium(&optimum_profile).is_equilibrium());
    row.ne_count = Some(equilibria.len());
    row.ne_min = equilibria.iter().map(|(_, v)| *v).min();
    row.ne_max = equilibria.iter().map(|(_, v)| *v).max();

    let mut records = Vec::new();
    for &algorithm in &plan.algorithms {
        for j in 0..plan.trials {
            let seed = derive_seed(plan.seed, &[ORACLE_TRIAL_STREAM, i as u64, j as u64]);
            let trace = run_trial(&game, algorithm, seed, &plan.contention, plan.max_rounds)?;
            records.push(TrialRecord {
                n_cells,
                n_channels,
                algorithm,
                topology: i,
                topology_seed: topo_seed,
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
            });
        }
    }
    row.br_min = records.iter().map(|r| r.final_interference).min();
    row.br_max = records.iter().map(|r| r.final_interference).max();

    if plan.ne_runs > 0 {
        let seeds: Vec<u64> = (0..plan.ne_runs)
            .map(|r| derive_seed(plan.seed, &[ORACLE_NE_STREAM, i as u64, r as u64]))
            .collect();
        let (best, worst, _) = estimate_best_worst_ne(&game, &seeds, plan.max_rounds)?;
        row.estimate_best = Some(best);
        row.estimate_worst = Some(worst);
    }
    Ok((row, seed_entry, records))
}
