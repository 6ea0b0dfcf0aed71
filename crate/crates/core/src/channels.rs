//! Channel sets and K-subset enumeration.
//!
//! Channels are numbered `1..=M`. A [`ChannelSet`] stores a subset of them as
//! a bitmask (bit `c - 1` for channel `c`), so set operations are a single
//! word operation and iteration is always in ascending channel order.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest supported channel count.
pub const MAX_CHANNELS: usize = 64;

/// A channel number in `1..=M`.
pub type Channel = usize;

/// Indicator δ(e, f): 1 when both channels coincide, 0 otherwise.
pub fn channel_match(e: Channel, f: Channel) -> u32 {
    u32::from(e == f)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ChannelSet(u64);

impl ChannelSet {
    pub const EMPTY: ChannelSet = ChannelSet(0);

    /// Builds a set from channel numbers, rejecting duplicates and values
    /// outside `1..=n_channels`.
    pub fn from_channels<I>(channels: I, n_channels: usize) -> Result<Self>
    where
        I: IntoIterator<Item = Channel>,
    {
        let mut bits = 0u64;
        for c in channels {
            if c == 0 || c > n_channels || c > MAX_CHANNELS {
                return Err(Error::ChannelOutOfRange {
                    channel: c,
                    n_channels,
                });
            }
            let bit = 1u64 << (c - 1);
            if bits & bit != 0 {
                return Err(Error::InvalidProfile(format!("channel {c} listed twice")));
            }
            bits |= bit;
        }
        Ok(ChannelSet(bits))
    }

    /// Every channel in `1..=n_channels`.
    pub fn full(n_channels: usize) -> Self {
        assert!(n_channels <= MAX_CHANNELS);
        if n_channels == MAX_CHANNELS {
            ChannelSet(u64::MAX)
        } else {
            ChannelSet((1u64 << n_channels) - 1)
        }
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, c: Channel) -> bool {
        (1..=MAX_CHANNELS).contains(&c) && self.0 & (1u64 << (c - 1)) != 0
    }

    pub fn insert(&mut self, c: Channel) {
        assert!((1..=MAX_CHANNELS).contains(&c), "channel {c} out of range");
        self.0 |= 1u64 << (c - 1);
    }

    pub fn intersection(self, other: ChannelSet) -> ChannelSet {
        ChannelSet(self.0 & other.0)
    }

    /// `|self ∩ other|`.
    pub fn overlap(self, other: ChannelSet) -> u32 {
        (self.0 & other.0).count_ones()
    }

    /// Highest channel number present, or 0 for the empty set.
    pub fn max_channel(self) -> Channel {
        (u64::BITS - self.0.leading_zeros()) as Channel
    }

    /// Channels in ascending order.
    pub fn iter(self) -> impl Iterator<Item = Channel> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let c = bits.trailing_zeros() as Channel + 1;
                bits &= bits - 1;
                Some(c)
            }
        })
    }

    pub fn to_vec(self) -> Vec<Channel> {
        self.iter().collect()
    }
}

impl fmt::Debug for ChannelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ChannelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().join(","))
    }
}

/// All `k`-subsets of `1..=n_channels` in lexicographic order.
pub fn k_subsets(n_channels: usize, k: usize) -> impl Iterator<Item = ChannelSet> {
    assert!(n_channels <= MAX_CHANNELS);
    (1..=n_channels)
        .combinations(k)
        .map(|cs| ChannelSet(cs.into_iter().fold(0u64, |acc, c| acc | 1u64 << (c - 1))))
}

/// Binomial coefficient C(n, k), saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc = C(n, i) * (n - i) / (i + 1) = C(n, i + 1)
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
