//! Best-response dynamics over the spectrum-access game.
//!
//! Three update schemes are provided:
//!
//! - **standard**: each iteration schedules one uniformly random SAP, which
//!   switches to a best response only if that strictly improves its utility.
//! - **autonomous**: each round, every SAP with a strictly improving best
//!   response contends with a random backoff timer; the winners (mutually
//!   non-adjacent, see [`contention`]) update simultaneously.
//! - **random once**: every SAP picks a uniform random channel subset and
//!   stops. This is the baseline, not a dynamics.
//!
//! Because only strict improvements are applied and simultaneous updaters
//! never neighbor each other, the integer potential strictly increases on
//! every effective round and is bounded above by zero.

pub mod contention;
pub mod oracle;
mod trace;

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::ChannelSet;
use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameInstance};

pub use contention::{select_updaters_contention, ContentionConfig, Exclusion};
pub use oracle::{
    brute_force_optimum, brute_force_optimum_with_cap, enumerate_nash_equilibria,
    enumerate_nash_equilibria_with_cap, joint_action_space_size, DEFAULT_ORACLE_CAP,
};
pub use trace::{DynamicsTrace, RoundRecord, TRACE_HEADER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Standard,
    Autonomous,
    RandomOnce,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Standard,
        Algorithm::Autonomous,
        Algorithm::RandomOnce,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Standard => "standard",
            Algorithm::Autonomous => "autonomous",
            Algorithm::RandomOnce => "random_once",
        }
    }

    /// Whether runs of this algorithm must end at a Nash equilibrium.
    pub fn seeks_equilibrium(self) -> bool {
        !matches!(self, Algorithm::RandomOnce)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Algorithm::Standard),
            "autonomous" => Ok(Algorithm::Autonomous),
            "random_once" | "random" => Ok(Algorithm::RandomOnce),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm {other:?} (expected standard, autonomous or random_once)"
            ))),
        }
    }
}

/// Lowest achievable `s_n` for SAP `n` against the current neighbor actions:
/// the sum of the `K_n` smallest per-channel neighbor counts.
pub fn best_interference(game: &GameInstance, profile: &ActionProfile, n: usize) -> u32 {
    let mut counts = game.neighbor_channel_counts(profile, n);
    counts.sort_unstable();
    counts[..game.topology().load(n)].iter().sum()
}

/// Whether SAP `n` has a strictly improving best response.
pub fn can_improve(game: &GameInstance, profile: &ActionProfile, n: usize) -> bool {
    best_interference(game, profile, n) < game.interference_if(profile, n, profile.action(n))
}

/// A utility-maximizing `K_n`-subset for SAP `n` given its neighbors'
/// current actions, drawn uniformly among all maximizers.
///
/// The minimizers of `Σ_{c∈a} count(c)` are exactly the sets holding every
/// channel whose count is below the `K_n`-th smallest count `t`, topped up
/// with any channels of count `t`. Sampling that top-up uniformly samples
/// the minimizer family uniformly.
pub fn best_response<R: Rng + ?Sized>(
    game: &GameInstance,
    profile: &ActionProfile,
    n: usize,
    rng: &mut R,
) -> ChannelSet {
    let k = game.topology().load(n);
    let counts = game.neighbor_channel_counts(profile, n);
    let mut sorted = counts.clone();
    sorted.sort_unstable();
    let threshold = sorted[k - 1];

    let mut action = ChannelSet::EMPTY;
    let mut ties = Vec::new();
    for (i, &count) in counts.iter().enumerate() {
        if count < threshold {
            action.insert(i + 1);
        } else if count == threshold {
            ties.push(i + 1);
        }
    }
    let missing = k - action.len();
    for i in index::sample(rng, ties.len(), missing).into_vec() {
        action.insert(ties[i]);
    }
    debug_assert_eq!(action.len(), k);
    action
}

/// One standard best-response iteration. Returns the scheduled SAP and
/// whether it updated.
pub fn step_standard_br<R: Rng + ?Sized>(
    game: &GameInstance,
    profile: &mut ActionProfile,
    rng: &mut R,
) -> (usize, bool) {
    let n = rng.gen_range(0..game.n_cells());
    let current = game.interference_if(profile, n, profile.action(n));
    let candidate = best_response(game, profile, n, rng);
    if game.interference_if(profile, n, candidate) < current {
        profile.set_action(n, candidate);
        (n, true)
    } else {
        (n, false)
    }
}

/// One autonomous round: contention picks the updaters, then each applies a
/// best response computed against the pre-round profile. Returns the
/// updater set, ascending.
pub fn step_autonomous_br<R: Rng + ?Sized>(
    game: &GameInstance,
    profile: &mut ActionProfile,
    config: &ContentionConfig,
    rng: &mut R,
) -> Vec<usize> {
    let updaters = select_updaters_contention(game, profile, config, rng);
    let responses: Vec<ChannelSet> = updaters
        .iter()
        .map(|&n| best_response(game, profile, n, rng))
        .collect();
    for (&n, action) in updaters.iter().zip(responses) {
        profile.set_action(n, action);
    }
    updaters
}

/// Runs `algorithm` from `initial` until no SAP can improve, or until
/// `max_rounds` effective rounds (autonomous) or iterations (standard) have
/// elapsed, in which case the trace is returned with `converged == false`.
pub fn run_to_convergence<R: Rng + ?Sized>(
    game: &GameInstance,
    initial: &ActionProfile,
    algorithm: Algorithm,
    config: &ContentionConfig,
    rng: &mut R,
    max_rounds: usize,
) -> Result<DynamicsTrace> {
    if max_rounds == 0 {
        return Err(Error::InvalidParameter(
            "max_rounds must be at least 1".into(),
        ));
    }
    config.validate()?;
    game.validate_profile(initial)?;

    let mut profile = initial.clone();
    let mut rounds = Vec::new();
    let mut reached = false;

    match algorithm {
        Algorithm::RandomOnce => {
            profile = game.random_profile(rng);
        }
        Algorithm::Standard => {
            reached = game.is_nash_equilibrium(&profile).is_equilibrium();
            let mut round = 0;
            while !reached && round < max_rounds {
                round += 1;
                let (n, updated) = step_standard_br(game, &mut profile, rng);
                rounds.push(RoundRecord {
                    round,
                    updaters: if updated { vec![n] } else { Vec::new() },
                    potential: game.potential(&profile),
                    aggregate_interference: game.aggregate_interference(&profile),
                });
                if updated {
                    reached = game.is_nash_equilibrium(&profile).is_equilibrium();
                }
            }
        }
        Algorithm::Autonomous => {
            let mut round = 0;
            loop {
                if round == max_rounds {
                    reached = game.is_nash_equilibrium(&profile).is_equilibrium();
                    break;
                }
                let updaters = step_autonomous_br(game, &mut profile, config, rng);
                if updaters.is_empty() {
                    reached = true;
                    break;
                }
                round += 1;
                rounds.push(RoundRecord {
                    round,
                    updaters,
                    potential: game.potential(&profile),
                    aggregate_interference: game.aggregate_interference(&profile),
                });
            }
        }
    }

    let ne_verified = game.is_nash_equilibrium(&profile).is_equilibrium();
    let converged = match algorithm {
        Algorithm::RandomOnce => ne_verified,
        _ => reached && ne_verified,
    };
    let rounds_to_convergence = rounds.len();
    Ok(DynamicsTrace {
        algorithm,
        initial_potential: game.potential(initial),
        initial_aggregate_interference: game.aggregate_interference(initial),
        initial: initial.clone(),
        rounds,
        final_profile: profile,
        converged,
        ne_verified,
        rounds_to_convergence,
    })
}
