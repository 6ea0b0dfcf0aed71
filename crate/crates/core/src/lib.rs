//! Load-aware multi-channel spectrum access for small-cell networks.
//!
//! Small-cell access points (SAPs) each need `K_n` of `M` shared channels.
//! SAPs closer than an interference distance form an interference graph,
//! and each SAP wants to minimize the number of channels it shares with its
//! graph neighbors. The resulting graphical game is an exact potential game
//! whose potential is minus half the aggregate interference, so
//! best-response dynamics converge to pure Nash equilibria.
//!
//! - [`topology`]: random deployments, interference graphs, topology files.
//! - [`game`]: interference, utility, potential, equilibrium check, bound.
//! - [`dynamics`]: best response, standard / autonomous BR, exhaustive oracles.
//! - [`experiments`]: seeded convergence and interference sweeps.
//! - [`config`] and [`commands`]: the configuration schema behind the CLI.

pub mod channels;
pub mod commands;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod game;
pub mod topology;

pub use channels::{channel_match, Channel, ChannelSet};
pub use dynamics::{Algorithm, ContentionConfig, DynamicsTrace, Exclusion};
pub use error::{Error, Result};
pub use game::{ActionProfile, GameInstance, NashCheck};
pub use topology::{generate_topology, DeploymentParams, NetworkTopology, Point};
