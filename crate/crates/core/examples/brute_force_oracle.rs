// Enumerates every joint action of a four-cell instance: the global optimum,
// all Nash equilibria, and where best-response runs land among them.
//
//     cargo run --example brute_force_oracle

use spectrum_game::dynamics::{brute_force_optimum, enumerate_nash_equilibria};
use spectrum_game::experiments::run_trial;
use spectrum_game::topology::generate;
use spectrum_game::{Algorithm, ContentionConfig, GameInstance};

pub fn run_example() -> spectrum_game::Result<(u64, Vec<u64>)> {
    let topology = generate(4, &[1, 2], 80.0, 4, 60.0, 21)?;
    let game = GameInstance::new(topology, 3)?;

    let (optimum_profile, optimum) = brute_force_optimum(&game)?;
    let equilibria = enumerate_nash_equilibria(&game)?;
    let mut values: Vec<u64> = equilibria.iter().map(|(_, v)| *v).collect();
    values.sort_unstable();
    values.dedup();
    println!(
        "{} edges, optimum {optimum} (an equilibrium: {}), {} equilibria with values {values:?}",
        game.topology().edges().len(),
        game.is_nash_equilibrium(&optimum_profile).is_equilibrium(),
        equilibria.len()
    );

    for seed in 0..5 {
        let trace = run_trial(
            &game,
            Algorithm::Autonomous,
            seed,
            &ContentionConfig::default(),
            1000,
        )?;
        println!(
            "  autonomous run {seed}: interference {}",
            game.aggregate_interference(&trace.final_profile)
        );
    }
    Ok((optimum, values))
}

fn main() -> spectrum_game::Result<()> {
    run_example().map(|_| ())
}
