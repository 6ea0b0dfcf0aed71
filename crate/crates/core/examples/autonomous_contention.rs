// Shows the contention rounds of the autonomous algorithm: who wins each
// round, and that winners are never within two hops of each other.
//
//     cargo run --example autonomous_contention

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectrum_game::dynamics::run_to_convergence;
use spectrum_game::{
    generate_topology, Algorithm, ContentionConfig, DeploymentParams, DynamicsTrace, Exclusion,
    GameInstance,
};

pub fn run_example() -> spectrum_game::Result<DynamicsTrace> {
    let topology = generate_topology(&DeploymentParams::default().with_cells(30), 2)?;
    let game = GameInstance::new(topology, 5)?;
    let config = ContentionConfig {
        tau_max: 1.0,
        exclusion: Exclusion::TwoHop,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let initial = game.random_profile(&mut rng);
    let trace = run_to_convergence(
        &game,
        &initial,
        Algorithm::Autonomous,
        &config,
        &mut rng,
        1000,
    )?;

    let t = game.topology();
    for round in &trace.rounds {
        let closest = round
            .updaters
            .iter()
            .flat_map(|&a| round.updaters.iter().map(move |&b| (a, b)))
            .filter(|(a, b)| a < b)
            .filter_map(|(a, b)| t.hop_distance(a, b))
            .min();
        assert!(closest.is_none_or(|d| d >= 3));
        println!(
            "round {}: {} updaters {:?}, interference {}",
            round.round,
            round.updaters.len(),
            round.updaters,
            round.aggregate_interference
        );
    }
    println!(
        "equilibrium after {} rounds (verified {})",
        trace.rounds_to_convergence, trace.ne_verified
    );
    Ok(trace)
}

fn main() -> spectrum_game::Result<()> {
    run_example().map(|_| ())
}
