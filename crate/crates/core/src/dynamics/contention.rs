//! Backoff contention that selects simultaneous updaters.
//!
//! Only SAPs with a strictly improving best response contend. Each draws a
//! backoff timer uniform on `[0, tau_max]`; timers expire in ascending order
//! (equal timers resolve by SAP index). A SAP still free when its timer
//! expires becomes active and broadcasts an update request, which freezes its
//! free neighbors. Under [`Exclusion::TwoHop`] every neighbor then answers
//! with an announce message, freezing free SAPs two hops away as well. Only
//! the ordering of timers matters; message loss and propagation delay are
//! not modeled.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::can_improve;
use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exclusion {
    /// Active SAPs are pairwise non-adjacent.
    OneHop,
    /// Active SAPs are pairwise at graph distance three or more.
    #[default]
    TwoHop,
}

impl Exclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Exclusion::OneHop => "one_hop",
            Exclusion::TwoHop => "two_hop",
        }
    }

    /// Smallest graph distance allowed between two simultaneous updaters.
    pub fn min_separation(self) -> usize {
        match self {
            Exclusion::OneHop => 2,
            Exclusion::TwoHop => 3,
        }
    }
}

impl fmt::Display for Exclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Exclusion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one_hop" => Ok(Exclusion::OneHop),
            "two_hop" => Ok(Exclusion::TwoHop),
            other => Err(Error::InvalidParameter(format!(
                "unknown exclusion {other:?} (expected one_hop or two_hop)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContentionConfig {
    pub tau_max: f64,
    pub exclusion: Exclusion,
}

impl Default for ContentionConfig {
    fn default() -> Self {
        ContentionConfig {
            tau_max: 1.0,
            exclusion: Exclusion::TwoHop,
        }
    }
}

impl ContentionConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tau_max.is_finite() && self.tau_max > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "tau_max must be positive, got {}",
                self.tau_max
            )))
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Free,
    Active,
    Inactive,
}

/// Simulates one contention period and returns the active SAPs, ascending.
pub fn select_updaters_contention<R: Rng + ?Sized>(
    game: &GameInstance,
    profile: &ActionProfile,
    config: &ContentionConfig,
    rng: &mut R,
) -> Vec<usize> {
    let topology = game.topology();
    let mut contenders: Vec<(f64, usize)> = (0..game.n_cells())
        .filter(|&n| can_improve(game, profile, n))
        .map(|n| (rng.gen::<f64>() * config.tau_max, n))
        .collect();
    contenders.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut state = vec![State::Free; game.n_cells()];
    let mut active = Vec::new();
    for (_, n) in contenders {
        if state[n] != State::Free {
            continue;
        }
        state[n] = State::Active;
        active.push(n);
        for &j in topology.neighbors_of(n) {
            if state[j] == State::Free {
                state[j] = State::Inactive;
            }
        }
        if config.exclusion == Exclusion::TwoHop {
            for &j in topology.neighbors_of(n) {
                for &k in topology.neighbors_of(j) {
                    if state[k] == State::Free {
                        state[k] = State::Inactive;
                    }
                }
            }
        }
    }
    active.sort_unstable();
    active
}
