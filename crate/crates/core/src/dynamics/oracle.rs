//! Exhaustive enumeration over joint action profiles.
//!
//! Both oracles walk every profile in mixed-radix order (SAP 0 slowest, each
//! SAP's actions lexicographic) and refuse instances whose joint action space
//! exceeds a cap.

use crate::channels::ChannelSet;
use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameInstance};

pub const DEFAULT_ORACLE_CAP: u128 = 10_000_000;

/// `Π_n C(M, K_n)`, saturating.
pub fn joint_action_space_size(game: &GameInstance) -> u128 {
    (0..game.n_cells())
        .map(|n| game.action_space_size(n))
        .try_fold(1u128, |acc, s| acc.checked_mul(s))
        .unwrap_or(u128::MAX)
}

fn for_each_profile<F>(game: &GameInstance, cap: u128, mut visit: F) -> Result<()>
where
    F: FnMut(&ActionProfile),
{
    let size = joint_action_space_size(game);
    if size > cap {
        return Err(Error::OracleCapExceeded { size, cap });
    }
    let choices: Vec<Vec<ChannelSet>> = (0..game.n_cells())
        .map(|n| game.actions(n).collect())
        .collect();
    let mut digits = vec![0usize; choices.len()];
    let mut profile = ActionProfile::new(choices.iter().map(|c| c[0]).collect());
    loop {
        visit(&profile);
        let mut pos = choices.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < choices[pos].len() {
                profile.set_action(pos, choices[pos][digits[pos]]);
                break;
            }
            digits[pos] = 0;
            profile.set_action(pos, choices[pos][0]);
        }
    }
}

/// A global minimizer of the aggregate interference (the first one in
/// enumeration order) and its value.
pub fn brute_force_optimum(game: &GameInstance) -> Result<(ActionProfile, u64)> {
    brute_force_optimum_with_cap(game, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_optimum_with_cap(
    game: &GameInstance,
    cap: u128,
) -> Result<(ActionProfile, u64)> {
    let mut best: Option<(ActionProfile, u64)> = None;
    for_each_profile(game, cap, |p| {
        let value = game.aggregate_interference(p);
        if best.as_ref().is_none_or(|(_, v)| value < *v) {
            best = Some((p.clone(), value));
        }
    })?;
    Ok(best.expect("joint action space is never empty"))
}

/// Every pure Nash equilibrium with its aggregate interference.
pub fn enumerate_nash_equilibria(game: &GameInstance) -> Result<Vec<(ActionProfile, u64)>> {
    enumerate_nash_equilibria_with_cap(game, DEFAULT_ORACLE_CAP)
}

pub fn enumerate_nash_equilibria_with_cap(
    game: &GameInstance,
    cap: u128,
) -> Result<Vec<(ActionProfile, u64)>> {
    let mut found = Vec::new();
    for_each_profile(game, cap, |p| {
        if game.is_nash_equilibrium(p).is_equilibrium() {
            found.push((p.clone(), game.aggregate_interference(p)));
        }
    })?;
    Ok(found)
}
