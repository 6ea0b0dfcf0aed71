use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectrum_game::dynamics::{
    brute_force_optimum, enumerate_nash_equilibria, run_to_convergence, DynamicsTrace,
};
use spectrum_game::experiments::{estimate_best_worst_ne, run_trial};
use spectrum_game::topology::generate;
use spectrum_game::{
    generate_topology, Algorithm, ContentionConfig, DeploymentParams, Error, Exclusion,
    GameInstance,
};

fn reference_game(seed: u64) -> GameInstance {
    GameInstance::new(
        generate_topology(&DeploymentParams::default(), seed).unwrap(),
        5,
    )
    .unwrap()
}

#[test]
fn both_algorithms_reach_verified_equilibria_with_monotone_potential() {
    for seed in 0..5 {
        let game = reference_game(seed);
        for alg in [Algorithm::Standard, Algorithm::Autonomous] {
            for trial in 0..20 {
                let trace =
                    run_trial(&game, alg, trial, &ContentionConfig::default(), 100_000).unwrap();
                assert!(trace.converged && trace.ne_verified);
                assert!(trace.is_potential_monotone());
                assert!(game
                    .is_nash_equilibrium(&trace.final_profile)
                    .is_equilibrium());
                assert!(game.satisfies_lower_bound(&trace.final_profile));
            }
        }
    }
}

#[test]
fn one_hop_exclusion_also_converges() {
    let game = reference_game(1);
    let config = ContentionConfig {
        tau_max: 2.5,
        exclusion: Exclusion::OneHop,
    };
    for trial in 0..50 {
        let trace = run_trial(&game, Algorithm::Autonomous, trial, &config, 1000).unwrap();
        assert!(trace.ne_verified && trace.is_potential_monotone());
    }
}

#[test]
fn random_once_does_not_iterate() {
    let game = reference_game(2);
    let trace = run_trial(
        &game,
        Algorithm::RandomOnce,
        4,
        &ContentionConfig::default(),
        10,
    )
    .unwrap();
    assert_eq!(trace.rounds_to_convergence, 0);
    assert!(trace.rounds.is_empty());
}

#[test]
fn trace_text_round_trips() {
    let game = reference_game(3);
    let trace = run_trial(
        &game,
        Algorithm::Autonomous,
        8,
        &ContentionConfig::default(),
        1000,
    )
    .unwrap();
    let text = trace.to_text(&["note".to_string()]);
    assert!(text.contains("# note\n"));
    assert_eq!(DynamicsTrace::from_text(&text).unwrap(), trace);
}

#[test]
fn round_budget_is_reported() {
    let game = reference_game(0);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let initial = game.random_profile(&mut rng);
    let trace = run_to_convergence(
        &game,
        &initial,
        Algorithm::Standard,
        &ContentionConfig::default(),
        &mut rng,
        2,
    )
    .unwrap();
    assert!(!trace.converged);
    assert!(matches!(
        run_trial(
            &game,
            Algorithm::Standard,
            0,
            &ContentionConfig::default(),
            2
        ),
        Err(Error::NonConvergence { max_rounds: 2 })
    ));
}

#[test]
fn estimates_sit_inside_the_true_equilibrium_range() {
    for seed in 0..10 {
        let topology = generate(4, &[1, 2], 80.0, 4, 60.0, seed).unwrap();
        let game = GameInstance::new(topology, 3).unwrap();
        let (_, optimum) = brute_force_optimum(&game).unwrap();
        let values: Vec<u64> = enumerate_nash_equilibria(&game)
            .unwrap()
            .into_iter()
            .map(|(_, v)| v)
            .collect();
        let lo = *values.iter().min().unwrap();
        let hi = *values.iter().max().unwrap();
        assert_eq!(optimum, lo);
        let seeds: Vec<u64> = (0..30).collect();
        let (best, worst, mean) = estimate_best_worst_ne(&game, &seeds, 10_000).unwrap();
        assert!(lo <= best && best as f64 <= mean && mean <= worst as f64 && worst <= hi);
    }
}

#[test]
fn single_run_estimate_is_degenerate() {
    let game = reference_game(4);
    let (best, worst, _) = estimate_best_worst_ne(&game, &[17], 100_000).unwrap();
    assert_eq!(best, worst);
}
