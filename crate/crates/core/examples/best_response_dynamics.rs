// Runs standard best-response dynamics on one deployment and prints the
// potential after every effective update.
//
//     cargo run --example best_response_dynamics

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectrum_game::dynamics::run_to_convergence;
use spectrum_game::{
    generate_topology, Algorithm, ContentionConfig, DeploymentParams, DynamicsTrace, GameInstance,
};

pub fn run_example() -> spectrum_game::Result<DynamicsTrace> {
    let topology = generate_topology(&DeploymentParams::default(), 5)?;
    let game = GameInstance::new(topology, 5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let initial = game.random_profile(&mut rng);

    let trace = run_to_convergence(
        &game,
        &initial,
        Algorithm::Standard,
        &ContentionConfig::default(),
        &mut rng,
        100_000,
    )?;
    println!(
        "start: interference {}, potential {}",
        trace.initial_aggregate_interference, trace.initial_potential
    );
    for round in trace.rounds.iter().filter(|r| !r.updaters.is_empty()) {
        println!(
            "  iteration {:>3}: SAP {:>2} -> potential {}",
            round.round, round.updaters[0], round.potential
        );
    }
    println!(
        "converged {} after {} iterations ({} updates), equilibrium verified {}",
        trace.converged,
        trace.rounds_to_convergence,
        trace.effective_rounds(),
        trace.ne_verified
    );
    Ok(trace)
}

fn main() -> spectrum_game::Result<()> {
    run_example().map(|_| ())
}
