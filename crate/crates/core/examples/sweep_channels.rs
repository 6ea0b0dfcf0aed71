// Mean converged interference against the channel count, next to the
// interference implied by the equilibrium lower bound.
//
//     cargo run --release --example sweep_channels

use spectrum_game::experiments::{
    sweep_channels, ExperimentKind, ExperimentPlan, ExperimentResult,
};
use spectrum_game::Algorithm;

pub fn run_example() -> spectrum_game::Result<ExperimentResult> {
    let mut plan = ExperimentPlan::new("channels-demo", ExperimentKind::SweepChannels);
    plan.cells_grid = vec![20];
    plan.channels_grid = (3..=10).collect();
    plan.algorithms = vec![Algorithm::Autonomous, Algorithm::RandomOnce];
    plan.topologies = 3;
    plan.trials = 20;
    let result = sweep_channels(&plan)?;

    for c in &result.cells {
        println!(
            "M={:>2} {:<11} mean {:>6.2}  bound {:>6.2}  violations {}",
            c.n_channels,
            c.algorithm.as_str(),
            c.interference.mean,
            c.bound_interference,
            c.bound_violations
        );
    }
    Ok(result)
}

fn main() -> spectrum_game::Result<()> {
    run_example().map(|_| ())
}
