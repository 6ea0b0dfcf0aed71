// Checks on one instance that a unilateral deviation changes the deviator's
// utility and the potential by exactly the same amount.
//
//     cargo run --example epg_identity

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectrum_game::{generate_topology, DeploymentParams, GameInstance};

pub fn run_example() -> spectrum_game::Result<usize> {
    let topology = generate_topology(&DeploymentParams::default(), 11)?;
    let game = GameInstance::new(topology, 5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    let mut checked = 0;
    for _ in 0..1000 {
        let profile = game.random_profile(&mut rng);
        let n = rng.gen_range(0..game.n_cells());
        let deviated = profile.with_action(n, game.random_action(n, &mut rng));
        let du = game.utility(&deviated, n)? - game.utility(&profile, n)?;
        let dphi = game.potential(&deviated) - game.potential(&profile);
        assert_eq!(du, dphi);
        checked += 1;
    }
    println!("{checked} deviations: utility change equals potential change every time");
    Ok(checked)
}

fn main() -> spectrum_game::Result<()> {
    run_example().map(|_| ())
}
