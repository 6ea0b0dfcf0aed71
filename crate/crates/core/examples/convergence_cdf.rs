// Compares how many iterations standard and autonomous BR need, as an
// empirical CDF over a few topologies and trials.
//
//     cargo run --release --example convergence_cdf

use spectrum_game::experiments::stats::empirical_cdf;
use spectrum_game::experiments::{
    convergence_cdf, ExperimentKind, ExperimentPlan, ExperimentResult,
};
use spectrum_game::Algorithm;

pub fn run_example() -> spectrum_game::Result<ExperimentResult> {
    let mut plan = ExperimentPlan::new("cdf-demo", ExperimentKind::ConvergenceCdf);
    plan.cells_grid = vec![20, 30];
    plan.channels_grid = vec![5];
    plan.algorithms = vec![Algorithm::Standard, Algorithm::Autonomous];
    plan.topologies = 2;
    plan.trials = 50;
    let result = convergence_cdf(&plan)?;

    for &n in &plan.cells_grid {
        for &alg in &plan.algorithms {
            let samples = result.rounds_samples(n, 5, alg);
            let at = |x: f64| empirical_cdf(&samples, x);
            println!(
                "N={n} {:<10} median {:>5.1}  P(<=5) {:.2}  P(<=25) {:.2}  P(<=50) {:.2}",
                alg.as_str(),
                result.cell(n, 5, alg).map_or(f64::NAN, |c| c.rounds.p50),
                at(5.0),
                at(25.0),
                at(50.0)
            );
        }
    }
    Ok(result)
}

fn main() -> spectrum_game::Result<()> {
    run_example().map(|_| ())
}
