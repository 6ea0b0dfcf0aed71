use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectrum_game::dynamics::{
    best_response, enumerate_nash_equilibria, select_updaters_contention, step_autonomous_br,
};
use spectrum_game::topology::generate;
use spectrum_game::{ActionProfile, ContentionConfig, Exclusion, GameInstance};

/// A random instance with `n` cells, `m` channels and loads from {1,2,3}
/// capped at `m`, on a region sized so that degrees stay moderate.
fn instance(n: usize, m: usize, seed: u64) -> GameInstance {
    let loads: Vec<usize> = [1, 2, 3].into_iter().filter(|&k| k <= m).collect();
    let topology = generate(n, &loads, 200.0, 20, 60.0, seed).unwrap();
    GameInstance::new(topology, m).unwrap()
}

fn naive_pair_overlap(a: &[usize], b: &[usize]) -> u64 {
    a.iter().filter(|c| b.contains(c)).count() as u64
}

/// Triple sum over SAPs, neighbors and channels of the match indicator.
fn naive_aggregate(game: &GameInstance, p: &ActionProfile) -> u64 {
    let t = game.topology();
    let mut total = 0;
    for n in 0..game.n_cells() {
        for &j in t.neighbors(n).unwrap() {
            for c in 1..=game.n_channels() {
                let mine = p.action(n).contains(c);
                let theirs = p.action(j).contains(c);
                total += u64::from(mine && theirs);
            }
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_potential_identity(n in 2usize..=30, m in 2usize..=8, seed: u64) {
        let game = instance(n, m, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
        let p = game.random_profile(&mut rng);
        let i = rng.gen_range(0..n);
        let q = p.with_action(i, game.random_action(i, &mut rng));
        let du = game.utility(&q, i).unwrap() - game.utility(&p, i).unwrap();
        prop_assert_eq!(du, game.potential(&q) - game.potential(&p));
    }

    #[test]
    fn interference_decomposes_over_channels(n in 1usize..=20, m in 1usize..=8, seed: u64) {
        let game = instance(n, m, seed);
        let p = game.random_profile(&mut ChaCha8Rng::seed_from_u64(seed));
        let t = game.topology();
        for i in 0..n {
            let by_channel: u32 = p
                .action(i)
                .iter()
                .map(|c| game.channel_interference(&p, i, c).unwrap())
                .sum();
            let naive: u64 = t
                .neighbors(i)
                .unwrap()
                .iter()
                .map(|&j| naive_pair_overlap(&p.action(i).to_vec(), &p.action(j).to_vec()))
                .sum();
            prop_assert_eq!(game.sap_interference(&p, i).unwrap(), by_channel);
            prop_assert_eq!(u64::from(by_channel), naive);
        }
        let agg = game.aggregate_interference(&p);
        prop_assert_eq!(agg, naive_aggregate(&game, &p));
        prop_assert_eq!(agg % 2, 0);
        prop_assert_eq!(game.potential(&p) * -2, agg as i64);
    }

    #[test]
    fn utility_depends_only_on_neighbors(n in 2usize..=20, m in 2usize..=6, seed: u64) {
        let game = instance(n, m, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = game.random_profile(&mut rng);
        let i = rng.gen_range(0..n);
        let t = game.topology();
        let mut q = p.clone();
        for j in 0..n {
            if j != i && !t.has_edge(i, j) {
                q.set_action(j, game.random_action(j, &mut rng));
            }
        }
        prop_assert_eq!(game.utility(&p, i).unwrap(), game.utility(&q, i).unwrap());
    }

    #[test]
    fn best_response_attains_enumerated_minimum(n in 1usize..=12, m in 1usize..=7, seed: u64) {
        let game = instance(n, m, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = game.random_profile(&mut rng);
        let i = rng.gen_range(0..n);
        let min = game.actions(i).map(|a| game.interference_if(&p, i, a)).min().unwrap();
        let br = best_response(&game, &p, i, &mut rng);
        prop_assert!(game.is_valid_action(i, br));
        prop_assert_eq!(game.interference_if(&p, i, br), min);
    }

    #[test]
    fn contention_winners_are_separated(n in 2usize..=30, seed: u64, two_hop: bool) {
        let game = instance(n, 5, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = game.random_profile(&mut rng);
        let exclusion = if two_hop { Exclusion::TwoHop } else { Exclusion::OneHop };
        let config = ContentionConfig { tau_max: 1.0, exclusion };
        let winners = select_updaters_contention(&game, &p, &config, &mut rng);
        let t = game.topology();
        for (x, &a) in winners.iter().enumerate() {
            prop_assert!(spectrum_game::dynamics::can_improve(&game, &p, a));
            for &b in &winners[x + 1..] {
                let d = t.hop_distance(a, b).unwrap_or(usize::MAX);
                prop_assert!(d >= exclusion.min_separation(), "{a} and {b} at distance {d}");
            }
        }
    }

    #[test]
    fn simultaneous_updates_sum_their_gains(n in 2usize..=30, m in 2usize..=6, seed: u64) {
        let game = instance(n, m, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let before = game.random_profile(&mut rng);
        let mut after = before.clone();
        let updaters = step_autonomous_br(&game, &mut after, &ContentionConfig::default(), &mut rng);
        let gains: i64 = updaters
            .iter()
            .map(|&i| game.utility(&after, i).unwrap() - game.utility(&before, i).unwrap())
            .sum();
        prop_assert_eq!(game.potential(&after) - game.potential(&before), gains);
        if !updaters.is_empty() {
            prop_assert!(game.potential(&after) > game.potential(&before));
        }
    }

    #[test]
    fn every_equilibrium_respects_the_bound(n in 1usize..=4, m in 2usize..=3, seed: u64) {
        let topology = generate(n, &[1, 2], 80.0, n, 60.0, seed).unwrap();
        let game = GameInstance::new(topology, m).unwrap();
        for (profile, value) in enumerate_nash_equilibria(&game).unwrap() {
            prop_assert!(game.satisfies_lower_bound(&profile));
            prop_assert!(value * m as u64 <= game.load_coupling());
        }
    }

    #[test]
    fn edges_follow_the_distance_rule(n in 1usize..=40, seed: u64) {
        let t = generate(n, &[1, 2, 3], 200.0, 20, 60.0, seed).unwrap();
        let pos = t.positions();
        for i in 0..n {
            for j in 0..n {
                let close = i != j && pos[i].distance(pos[j]) < 60.0;
                prop_assert_eq!(t.has_edge(i, j), close);
                prop_assert_eq!(t.has_edge(i, j), t.has_edge(j, i));
            }
        }
    }

    #[test]
    fn topology_text_round_trips(n in 1usize..=25, seed: u64) {
        let t = generate(n, &[1, 2, 3], 200.0, 20, 60.0, seed).unwrap();
        let back = spectrum_game::NetworkTopology::from_text(&t.to_text()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn profile_text_round_trips(n in 1usize..=25, m in 3usize..=8, seed: u64) {
        let game = instance(n, m, seed);
        let p = game.random_profile(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(ActionProfile::from_text(&p.to_text()).unwrap(), p);
    }
}
