// Estimates the best and worst equilibrium of one deployment by repeating
// standard BR from many random starts.
//
//     cargo run --release --example best_worst_ne

use spectrum_game::experiments::{estimate_best_worst_ne, ne_run_seed};
use spectrum_game::{generate_topology, DeploymentParams, GameInstance};

pub fn run_example() -> spectrum_game::Result<(u64, u64, f64)> {
    let topology = generate_topology(&DeploymentParams::default(), 4)?;
    let game = GameInstance::new(topology, 5)?;
    let seeds: Vec<u64> = (0..200).map(|r| ne_run_seed(42, 20, 0, r)).collect();
    let (best, worst, mean) = estimate_best_worst_ne(&game, &seeds, 100_000)?;
    println!(
        "{} runs: best {best}, worst {worst}, mean {mean:.2}; equilibrium interference bound {}",
        seeds.len(),
        -game.ne_lower_bound()
    );
    Ok((best, worst, mean))
}

fn main() -> spectrum_game::Result<()> {
    run_example().map(|_| ())
}
