// Builds a hand-made three-cell chain, tests two profiles for equilibrium
// and compares the result with the interference lower bound.
//
//     cargo run --example nash_check

use spectrum_game::{ActionProfile, ChannelSet, GameInstance, NashCheck, NetworkTopology, Point};

pub fn run_example() -> spectrum_game::Result<(NashCheck, NashCheck)> {
    let positions = vec![
        Point::new(0.0, 0.0),
        Point::new(50.0, 0.0),
        Point::new(100.0, 0.0),
    ];
    let topology = NetworkTopology::new(positions, vec![1, 2, 1], 100.0, 60.0)?;
    let game = GameInstance::new(topology, 3)?;
    let set = |cs: &[usize]| ChannelSet::from_channels(cs.iter().copied(), 3);

    let clash = ActionProfile::new(vec![set(&[1])?, set(&[1, 2])?, set(&[3])?]);
    let clean = ActionProfile::new(vec![set(&[3])?, set(&[1, 2])?, set(&[3])?]);

    let first = game.is_nash_equilibrium(&clash);
    let second = game.is_nash_equilibrium(&clean);
    for (name, profile, check) in [("clash", &clash, &first), ("clean", &clean, &second)] {
        println!(
            "{name}: aggregate interference {}, potential {}, {check:?}",
            game.aggregate_interference(profile),
            game.potential(profile)
        );
    }
    println!(
        "lower bound on the aggregate utility at any equilibrium: {}",
        game.ne_lower_bound()
    );
    Ok((first, second))
}

fn main() -> spectrum_game::Result<()> {
    run_example().map(|_| ())
}
