//! The multi-channel spectrum-access game.
//!
//! Each SAP `n` picks exactly `K_n` of the `M` channels. Its experienced
//! interference `s_n` counts, over every neighbor `j`, the channels the two
//! share; its utility is `-s_n`. The potential `Φ = -½ Σ s_n` changes by
//! exactly the deviator's utility change under any unilateral deviation.
//!
//! All arithmetic is integral. `Φ` is returned as an `i64`: every shared
//! channel on an edge is counted once by each endpoint, so `Σ s_n` is even.

use std::fmt::Write as _;

use num_rational::Ratio;
use rand::seq::index;
use rand::Rng;

use crate::channels::{binomial, k_subsets, Channel, ChannelSet, MAX_CHANNELS};
use crate::error::{Error, Result};
use crate::topology::NetworkTopology;

pub const PROFILE_HEADER: &str = "spectrum-game profile v1";

/// One channel subset per SAP.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionProfile(Vec<ChannelSet>);

impl ActionProfile {
    pub fn new(actions: Vec<ChannelSet>) -> Self {
        ActionProfile(actions)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn action(&self, n: usize) -> ChannelSet {
        self.0[n]
    }

    pub fn actions(&self) -> &[ChannelSet] {
        &self.0
    }

    pub fn set_action(&mut self, n: usize, action: ChannelSet) {
        self.0[n] = action;
    }

    /// The profile with SAP `n` switched to `action`.
    pub fn with_action(&self, n: usize, action: ChannelSet) -> Self {
        let mut next = self.clone();
        next.0[n] = action;
        next
    }

    /// Text block: header, `cells N`, then one `index c1,c2,...` line per SAP.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{PROFILE_HEADER}").unwrap();
        writeln!(out, "cells {}", self.len()).unwrap();
        for (n, a) in self.0.iter().enumerate() {
            let channels: Vec<String> = a.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{n} {}", channels.join(",")).unwrap();
        }
        out
    }

    /// Parses [`ActionProfile::to_text`] output. Channel bounds are checked
    /// later against a concrete game, so any channel in `1..=64` is accepted.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, h)) if h == PROFILE_HEADER => {}
            Some((line, h)) => return Err(Error::parse(line, format!("unsupported header {h:?}"))),
            None => return Err(Error::parse(0, "empty profile")),
        }
        let n: usize = match lines.next() {
            Some((line, l)) => l
                .strip_prefix("cells ")
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| Error::parse(line, "expected `cells <count>`"))?,
            None => return Err(Error::parse(0, "missing cell count")),
        };
        let mut actions = Vec::with_capacity(n);
        for expected in 0..n {
            let (line, l) = lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("missing action for SAP {expected}")))?;
            let (idx, list) = l.split_once(' ').unwrap_or((l, ""));
            if idx.parse::<usize>().ok() != Some(expected) {
                return Err(Error::parse(line, format!("expected SAP index {expected}")));
            }
            let channels = list
                .trim()
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<Channel>()
                        .map_err(|_| Error::parse(line, format!("bad channel {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let set = ChannelSet::from_channels(channels, MAX_CHANNELS)
                .map_err(|e| Error::parse(line, e.to_string()))?;
            actions.push(set);
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::parse(line, "trailing content after profile"));
        }
        Ok(ActionProfile(actions))
    }
}

/// Outcome of an exhaustive equilibrium check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NashCheck {
    Equilibrium,
    /// SAP `sap` gains `gain > 0` utility by moving to `action`.
    Deviation {
        sap: usize,
        action: ChannelSet,
        gain: i64,
    },
}

impl NashCheck {
    pub fn is_equilibrium(&self) -> bool {
        matches!(self, NashCheck::Equilibrium)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameInstance {
    topology: NetworkTopology,
    n_channels: usize,
}

impl GameInstance {
    pub fn new(topology: NetworkTopology, n_channels: usize) -> Result<Self> {
        if n_channels == 0 || n_channels > MAX_CHANNELS {
            return Err(Error::InvalidParameter(format!(
                "channel count must be in 1..={MAX_CHANNELS}, got {n_channels}"
            )));
        }
        if topology.max_load() > n_channels {
            return Err(Error::InvalidParameter(format!(
                "max load {} exceeds channel count {n_channels}",
                topology.max_load()
            )));
        }
        Ok(GameInstance {
            topology,
            n_channels,
        })
    }

    pub fn topology(&self) -> &NetworkTopology {
        &self.topology
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn n_cells(&self) -> usize {
        self.topology.n_cells()
    }

    /// Size of SAP `n`'s action space, C(M, K_n).
    pub fn action_space_size(&self, n: usize) -> u128 {
        binomial(self.n_channels, self.topology.load(n))
    }

    /// Every action of SAP `n`, lexicographic.
    pub fn actions(&self, n: usize) -> impl Iterator<Item = ChannelSet> {
        k_subsets(self.n_channels, self.topology.load(n))
    }

    pub fn is_valid_action(&self, n: usize, action: ChannelSet) -> bool {
        action.len() == self.topology.load(n) && action.max_channel() <= self.n_channels
    }

    pub fn validate_profile(&self, profile: &ActionProfile) -> Result<()> {
        if profile.len() != self.n_cells() {
            return Err(Error::InvalidProfile(format!(
                "profile has {} actions for {} SAPs",
                profile.len(),
                self.n_cells()
            )));
        }
        for (n, &a) in profile.actions().iter().enumerate() {
            if !self.is_valid_action(n, a) {
                return Err(Error::InvalidProfile(format!(
                    "SAP {n} selects {a} but needs {} distinct channels from 1..={}",
                    self.topology.load(n),
                    self.n_channels
                )));
            }
        }
        Ok(())
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n < self.n_cells() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: n,
                n_cells: self.n_cells(),
            })
        }
    }

    fn check_channel(&self, c: Channel) -> Result<()> {
        if (1..=self.n_channels).contains(&c) {
            Ok(())
        } else {
            Err(Error::ChannelOutOfRange {
                channel: c,
                n_channels: self.n_channels,
            })
        }
    }

    /// Number of neighbors of `n` occupying channel `c`.
    pub fn channel_interference(
        &self,
        profile: &ActionProfile,
        n: usize,
        c: Channel,
    ) -> Result<u32> {
        self.check_index(n)?;
        self.check_channel(c)?;
        self.validate_profile(profile)?;
        Ok(self
            .topology
            .neighbors_of(n)
            .iter()
            .filter(|&&j| profile.action(j).contains(c))
            .count() as u32)
    }

    /// Experienced interference level `s_n`.
    pub fn sap_interference(&self, profile: &ActionProfile, n: usize) -> Result<u32> {
        self.check_index(n)?;
        self.validate_profile(profile)?;
        Ok(self.interference_if(profile, n, profile.action(n)))
    }

    pub fn utility(&self, profile: &ActionProfile, n: usize) -> Result<i64> {
        self.sap_interference(profile, n).map(|s| -i64::from(s))
    }

    /// `s_n` if SAP `n` played `action` against the neighbor actions in
    /// `profile`. Does not validate.
    pub fn interference_if(&self, profile: &ActionProfile, n: usize, action: ChannelSet) -> u32 {
        self.topology
            .neighbors_of(n)
            .iter()
            .map(|&j| action.overlap(profile.action(j)))
            .sum()
    }

    /// Per-channel occupancy among the neighbors of `n`; index `c - 1`.
    pub fn neighbor_channel_counts(&self, profile: &ActionProfile, n: usize) -> Vec<u32> {
        let mut counts = vec![0u32; self.n_channels];
        for &j in self.topology.neighbors_of(n) {
            for c in profile.action(j).iter() {
                counts[c - 1] += 1;
            }
        }
        counts
    }

    /// `Σ_n s_n`, summed per SAP.
    pub fn aggregate_interference(&self, profile: &ActionProfile) -> u64 {
        (0..self.n_cells())
            .map(|n| u64::from(self.interference_if(profile, n, profile.action(n))))
            .sum()
    }

    /// `Φ = -½ Σ_n s_n`, computed edge by edge (each shared channel on an
    /// edge contributes -1).
    pub fn potential(&self, profile: &ActionProfile) -> i64 {
        let conflicts: u64 = self
            .topology
            .edges()
            .iter()
            .map(|&(i, j)| u64::from(profile.action(i).overlap(profile.action(j))))
            .sum();
        debug_assert_eq!(2 * conflicts, self.aggregate_interference(profile));
        -(conflicts as i64)
    }

    /// Aggregate utility `U = Σ u_n = -Σ s_n`.
    pub fn aggregate_utility(&self, profile: &ActionProfile) -> i64 {
        -(self.aggregate_interference(profile) as i64)
    }

    /// Exhaustive check over every SAP and every alternative `K_n`-subset.
    /// Returns the first improving deviation found in (SAP, lexicographic
    /// action) order.
    pub fn is_nash_equilibrium(&self, profile: &ActionProfile) -> NashCheck {
        for n in 0..self.n_cells() {
            let current = self.interference_if(profile, n, profile.action(n));
            if current == 0 {
                continue;
            }
            for action in self.actions(n) {
                let s = self.interference_if(profile, n, action);
                if s < current {
                    return NashCheck::Deviation {
                        sap: n,
                        action,
                        gain: i64::from(current - s),
                    };
                }
            }
        }
        NashCheck::Equilibrium
    }

    /// `Σ_n Σ_{j∈J_n} K_n K_j`, the numerator of the equilibrium bound.
    pub fn load_coupling(&self) -> u64 {
        let loads = self.topology.loads();
        self.topology
            .edges()
            .iter()
            .map(|&(i, j)| 2 * (loads[i] * loads[j]) as u64)
            .sum()
    }

    /// Lower bound on the aggregate utility at any Nash equilibrium:
    /// `-(Σ_n Σ_{j∈J_n} K_n K_j) / M`.
    pub fn ne_lower_bound(&self) -> Ratio<i64> {
        Ratio::new(-(self.load_coupling() as i64), self.n_channels as i64)
    }

    /// Whether `-Σ s_n ≥ ne_lower_bound()`, compared exactly.
    pub fn satisfies_lower_bound(&self, profile: &ActionProfile) -> bool {
        Ratio::from_integer(self.aggregate_utility(profile)) >= self.ne_lower_bound()
    }

    /// Each SAP draws an independent uniform `K_n`-subset.
    pub fn random_profile<R: Rng + ?Sized>(&self, rng: &mut R) -> ActionProfile {
        let actions = (0..self.n_cells())
            .map(|n| self.random_action(n, rng))
            .collect();
        ActionProfile(actions)
    }

    pub fn random_action<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> ChannelSet {
        let k = self.topology.load(n);
        let mut set = ChannelSet::EMPTY;
        for i in index::sample(rng, self.n_channels, k) {
            set.insert(i + 1);
        }
        set
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::Point;

    fn topo(points: &[(f64, f64)], loads: Vec<usize>) -> NetworkTopology {
        let positions = points.iter().map(|&(x, y)| Point::new(x, y)).collect();
        NetworkTopology::new(positions, loads, 200.0, 60.0).unwrap()
    }

    fn set(cs: &[usize]) -> ChannelSet {
        ChannelSet::from_channels(cs.iter().copied(), 64).unwrap()
    }

    fn pair(loads: Vec<usize>, m: usize) -> GameInstance {
        GameInstance::new(topo(&[(0.0, 0.0), (50.0, 0.0)], loads), m).unwrap()
    }

    #[test]
    fn construction_requires_enough_channels() {
        let t = topo(&[(0.0, 0.0)], vec![3]);
        assert!(GameInstance::new(t.clone(), 2).is_err());
        assert!(GameInstance::new(t.clone(), 0).is_err());
        assert!(GameInstance::new(t, 3).is_ok());
    }

    #[test]
    fn channel_interference_counts_neighbors() {
        // SAP 0 is in the middle of a 3-cell line; neighbors 1 and 2.
        let t = topo(&[(50.0, 0.0), (0.0, 0.0), (100.0, 0.0)], vec![1, 2, 2]);
        let g = GameInstance::new(t, 4).unwrap();
        let p = ActionProfile::new(vec![set(&[2]), set(&[1, 2]), set(&[2, 3])]);
        assert_eq!(g.channel_interference(&p, 0, 2).unwrap(), 2);
        assert_eq!(g.channel_interference(&p, 0, 4).unwrap(), 0);
        assert!(g.channel_interference(&p, 0, 5).is_err());
        assert!(g.channel_interference(&p, 3, 1).is_err());
    }

    #[test]
    fn identical_pair_interference() {
        let g = pair(vec![2, 2], 4);
        let p = ActionProfile::new(vec![set(&[1, 2]), set(&[1, 2])]);
        assert_eq!(g.sap_interference(&p, 0).unwrap(), 2);
        assert_eq!(g.sap_interference(&p, 1).unwrap(), 2);
        assert_eq!(g.utility(&p, 0).unwrap(), -2);
        assert_eq!(g.aggregate_interference(&p), 4);
        assert_eq!(g.potential(&p), -2);
    }

    #[test]
    fn disjoint_pair_interference() {
        let g = pair(vec![1, 1], 2);
        let p = ActionProfile::new(vec![set(&[1]), set(&[2])]);
        assert_eq!(g.sap_interference(&p, 0).unwrap(), 0);
        assert_eq!(g.sap_interference(&p, 1).unwrap(), 0);
        assert_eq!(g.aggregate_interference(&p), 0);
        assert_eq!(g.potential(&p), 0);
        assert!(g.is_nash_equilibrium(&p).is_equilibrium());
    }

    #[test]
    fn isolated_sap_is_interference_free() {
        let g = GameInstance::new(topo(&[(0.0, 0.0)], vec![2]), 3).unwrap();
        for a in g.actions(0).collect::<Vec<_>>() {
            let p = ActionProfile::new(vec![a]);
            assert_eq!(g.sap_interference(&p, 0).unwrap(), 0);
            assert_eq!(g.utility(&p, 0).unwrap(), 0);
            assert!(g.is_nash_equilibrium(&p).is_equilibrium());
            for c in 1..=3 {
                assert_eq!(g.channel_interference(&p, 0, c).unwrap(), 0);
            }
        }
    }

    #[test]
    fn nash_witness_for_colliding_pair() {
        let g = pair(vec![1, 1], 2);
        let p = ActionProfile::new(vec![set(&[1]), set(&[1])]);
        assert_eq!(
            g.is_nash_equilibrium(&p),
            NashCheck::Deviation {
                sap: 0,
                action: set(&[2]),
                gain: 1
            }
        );
    }

    #[test]
    fn lower_bound_values() {
        let g = pair(vec![1, 1], 5);
        assert_eq!(g.ne_lower_bound(), Ratio::new(-2, 5));
        let g = pair(vec![2, 3], 5);
        assert_eq!(g.load_coupling(), 12);
        let lone = GameInstance::new(topo(&[(0.0, 0.0)], vec![1]), 5).unwrap();
        assert_eq!(lone.ne_lower_bound(), Ratio::from_integer(0));
    }

    #[test]
    fn lower_bound_vanishes_with_many_channels() {
        let t = topo(&[(0.0, 0.0), (30.0, 0.0), (0.0, 30.0)], vec![2, 1, 2]);
        let mut prev = None;
        for m in [2usize, 4, 8, 16, 32, 64] {
            let b = GameInstance::new(t.clone(), m).unwrap().ne_lower_bound();
            if let Some(p) = prev {
                assert!(b > p);
            }
            prev = Some(b);
        }
        assert!(prev.unwrap() > Ratio::new(-1, 1));
    }

    #[test]
    fn invalid_profiles_rejected() {
        let g = pair(vec![2, 1], 3);
        let wrong_size = ActionProfile::new(vec![set(&[1]), set(&[1])]);
        assert!(matches!(
            g.sap_interference(&wrong_size, 0),
            Err(Error::InvalidProfile(_))
        ));
        let too_high = ActionProfile::new(vec![set(&[1, 4]), set(&[1])]);
        assert!(g.validate_profile(&too_high).is_err());
        let short = ActionProfile::new(vec![set(&[1, 2])]);
        assert!(g.validate_profile(&short).is_err());
    }

    #[test]
    fn random_profile_respects_loads() {
        use rand::SeedableRng;
        let t = topo(&[(0.0, 0.0), (30.0, 0.0), (0.0, 30.0)], vec![3, 1, 2]);
        let g = GameInstance::new(t, 5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let p = g.random_profile(&mut rng);
            g.validate_profile(&p).unwrap();
        }
    }

    #[test]
    fn profile_text_round_trip_and_errors() {
        let p = ActionProfile::new(vec![set(&[1, 3]), set(&[2]), set(&[4, 5, 6])]);
        let text = p.to_text();
        assert_eq!(
            text,
            "spectrum-game profile v1\ncells 3\n0 1,3\n1 2\n2 4,5,6\n"
        );
        assert_eq!(ActionProfile::from_text(&text).unwrap(), p);
        assert!(ActionProfile::from_text("spectrum-game profile v9\n").is_err());
        assert!(ActionProfile::from_text(&text.replace("1 2\n", "1 2,2\n")).is_err());
        assert!(ActionProfile::from_text(&text.replace("2 4,5,6\n", "")).is_err());
    }
}
