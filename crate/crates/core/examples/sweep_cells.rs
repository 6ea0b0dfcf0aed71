// Mean converged interference as the network grows at fixed density.
//
//     cargo run --release --example sweep_cells

use spectrum_game::experiments::{sweep_cells, ExperimentKind, ExperimentPlan, ExperimentResult};

pub fn run_example() -> spectrum_game::Result<ExperimentResult> {
    let mut plan = ExperimentPlan::new("cells-demo", ExperimentKind::SweepCells);
    plan.cells_grid = vec![10, 20, 30];
    plan.channels_grid = vec![5];
    plan.topologies = 3;
    plan.trials = 20;
    plan.ne_runs = 50;
    let result = sweep_cells(&plan)?;

    println!("   N  algorithm    mean  p5..p95       best NE");
    for c in &result.cells {
        println!(
            "{:>4}  {:<11} {:>5.1}  {:>4.0}..{:<4.0}  {:>7.1}",
            c.n_cells,
            c.algorithm.as_str(),
            c.interference.mean,
            c.interference.p5,
            c.interference.p95,
            c.ne_best.unwrap_or(f64::NAN)
        );
    }
    Ok(result)
}

fn main() -> spectrum_game::Result<()> {
    run_example().map(|_| ())
}
