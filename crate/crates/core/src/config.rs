//! Run configuration (TOML, schema version 1).
//!
//! ```toml
//! schema_version = 1
//! seed = 1
//!
//! [topology]
//! cells = 20                  # N
//! base_region = 200.0         # square side (m) when N == base_cells
//! base_cells = 20
//! interference_distance = 60.0
//! coverage_radius = 20.0      # metadata only
//! loads = [1, 2, 3]
//!
//! [game]
//! channels = 5                # M
//!
//! [dynamics]
//! algorithm = "autonomous"    # standard | autonomous | random_once
//! exclusion = "two_hop"       # one_hop | two_hop
//! tau_max = 1.0
//! max_rounds = 100000
//!
//! [experiment]                # only needed by `sweep`
//! id = "convergence"
//! kind = "convergence_cdf"    # convergence_cdf | sweep_cells | sweep_channels
//!                             # | best_worst_ne | oracle
//! cells_grid = [20, 30]
//! channels_grid = [5]
//! algorithms = ["standard", "autonomous"]
//! topologies = 5
//! trials = 1000
//! ne_runs = 0
//! oracle_cap = 10000000
//!
//! [output]                    # never embedded in output files
//! out_dir = "out"
//! workers = 0                 # 0 = one per core
//! ```
//!
//! Every section and field is optional; omitted values take the defaults
//! shown. Unknown fields are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{Algorithm, ContentionConfig, Exclusion, DEFAULT_ORACLE_CAP};
use crate::error::{Error, Result};
use crate::experiments::{ExperimentKind, ExperimentPlan};
use crate::topology::DeploymentParams;

pub const SCHEMA_VERSION: u32 = 1;

/// Configurations shipped with the crate, by name.
pub const PRESETS: [(&str, &str); 5] = [
    ("default", include_str!("../presets/default.toml")),
    ("convergence", include_str!("../presets/convergence.toml")),
    ("sweep-cells", include_str!("../presets/sweep-cells.toml")),
    (
        "sweep-channels",
        include_str!("../presets/sweep-channels.toml"),
    ),
    ("tiny-oracle", include_str!("../presets/tiny-oracle.toml")),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TopologySection {
    pub cells: usize,
    pub base_region: f64,
    pub base_cells: usize,
    pub interference_distance: f64,
    pub coverage_radius: f64,
    pub loads: Vec<usize>,
}

impl Default for TopologySection {
    fn default() -> Self {
        let d = DeploymentParams::default();
        TopologySection {
            cells: d.n_cells,
            base_region: d.base_region,
            base_cells: d.base_cells,
            interference_distance: d.interference_distance,
            coverage_radius: d.coverage_radius,
            loads: d.load_set,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GameSection {
    pub channels: usize,
}

impl Default for GameSection {
    fn default() -> Self {
        GameSection { channels: 5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsSection {
    pub algorithm: Algorithm,
    pub exclusion: Exclusion,
    pub tau_max: f64,
    pub max_rounds: usize,
}

impl Default for DynamicsSection {
    fn default() -> Self {
        DynamicsSection {
            algorithm: Algorithm::Autonomous,
            exclusion: Exclusion::TwoHop,
            tau_max: 1.0,
            max_rounds: 100_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSection {
    pub id: String,
    pub kind: ExperimentKind,
    pub cells_grid: Vec<usize>,
    pub channels_grid: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    pub topologies: usize,
    pub trials: usize,
    pub ne_runs: usize,
    pub oracle_cap: u64,
}

impl Default for ExperimentSection {
    fn default() -> Self {
        ExperimentSection {
            id: "experiment".into(),
            kind: ExperimentKind::ConvergenceCdf,
            cells_grid: vec![20],
            channels_grid: vec![5],
            algorithms: vec![Algorithm::Standard, Algorithm::Autonomous],
            topologies: 5,
            trials: 1000,
            ne_runs: 0,
            oracle_cap: DEFAULT_ORACLE_CAP as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub out_dir: PathBuf,
    pub workers: usize,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            out_dir: PathBuf::from("out"),
            workers: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub seed: u64,
    pub topology: TopologySection,
    pub game: GameSection,
    pub dynamics: DynamicsSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentSection>,
    /// Where and how to run; excluded from embedded copies so that output
    /// bytes do not depend on it.
    #[serde(skip_serializing)]
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            seed: 1,
            topology: TopologySection::default(),
            game: GameSection::default(),
            dynamics: DynamicsSection::default(),
            experiment: None,
            output: OutputSection::default(),
        }
    }
}

/// Command-line overrides applied on top of a config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub cells: Option<usize>,
    pub channels: Option<usize>,
    pub algorithm: Option<Algorithm>,
    pub exclusion: Option<Exclusion>,
    pub trials: Option<usize>,
    pub topologies: Option<usize>,
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub max_rounds: Option<usize>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        Ok(config)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn preset(name: &str) -> Result<Self> {
        PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| {
                let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
                Error::Config(format!(
                    "unknown preset {name:?} (available: {})",
                    names.join(", ")
                ))
            })
            .and_then(|(_, text)| Self::from_toml(text))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// One-line JSON of the resolved config, without the output section.
    pub fn embedded(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Recovers the config embedded in an output file's `# config` line.
    pub fn from_embedded(text: &str) -> Result<Self> {
        let json = text
            .lines()
            .find_map(|l| l.strip_prefix("# config "))
            .ok_or_else(|| Error::Config("no embedded `# config` line".into()))?;
        serde_json::from_str(json).map_err(|e| Error::Config(format!("embedded config: {e}")))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.cells {
            self.topology.cells = v;
        }
        if let Some(v) = o.channels {
            self.game.channels = v;
        }
        if let Some(v) = o.algorithm {
            self.dynamics.algorithm = v;
        }
        if let Some(v) = o.exclusion {
            self.dynamics.exclusion = v;
        }
        if let Some(v) = o.max_rounds {
            self.dynamics.max_rounds = v;
        }
        if let Some(e) = self.experiment.as_mut() {
            if let Some(v) = o.cells {
                e.cells_grid = vec![v];
            }
            if let Some(v) = o.channels {
                e.channels_grid = vec![v];
            }
            if let Some(v) = o.algorithm {
                e.algorithms = vec![v];
            }
            if let Some(v) = o.trials {
                e.trials = v;
            }
            if let Some(v) = o.topologies {
                e.topologies = v;
            }
        }
        if let Some(v) = o.workers {
            self.output.workers = v;
        }
        if let Some(v) = &o.out_dir {
            self.output.out_dir = v.clone();
        }
    }

    pub fn deployment(&self) -> DeploymentParams {
        DeploymentParams {
            n_cells: self.topology.cells,
            load_set: self.topology.loads.clone(),
            base_region: self.topology.base_region,
            base_cells: self.topology.base_cells,
            interference_distance: self.topology.interference_distance,
            coverage_radius: self.topology.coverage_radius,
        }
    }

    pub fn contention(&self) -> ContentionConfig {
        ContentionConfig {
            tau_max: self.dynamics.tau_max,
            exclusion: self.dynamics.exclusion,
        }
    }

    /// Checks everything a single `generate` / `run` needs.
    pub fn validate(&self) -> Result<()> {
        let cfg = |e: Error| Error::Config(e.to_string());
        self.deployment().validate().map_err(cfg)?;
        self.contention().validate().map_err(cfg)?;
        if self.dynamics.max_rounds == 0 {
            return Err(Error::Config("max_rounds must be at least 1".into()));
        }
        let max_load = self.deployment().max_load();
        if self.game.channels < max_load {
            return Err(Error::Config(format!(
                "channels ({}) must be at least the maximum load ({max_load})",
                self.game.channels
            )));
        }
        if self.game.channels > crate::channels::MAX_CHANNELS {
            return Err(Error::Config(format!(
                "at most {} channels are supported",
                crate::channels::MAX_CHANNELS
            )));
        }
        Ok(())
    }

    /// The experiment plan described by the `[experiment]` section.
    pub fn plan(&self) -> Result<ExperimentPlan> {
        let e = self
            .experiment
            .as_ref()
            .ok_or_else(|| Error::Config("config has no [experiment] section".into()))?;
        let plan = ExperimentPlan {
            id: e.id.clone(),
            kind: e.kind,
            deployment: self.deployment(),
            cells_grid: e.cells_grid.clone(),
            channels_grid: e.channels_grid.clone(),
            algorithms: e.algorithms.clone(),
            topologies: e.topologies,
            trials: e.trials,
            ne_runs: e.ne_runs,
            contention: self.contention(),
            max_rounds: self.dynamics.max_rounds,
            seed: self.seed,
            oracle_cap: u128::from(e.oracle_cap),
        };
        if e.id.is_empty() || e.id.contains(['/', '\\']) {
            return Err(Error::Config(format!("invalid experiment id {:?}", e.id)));
        }
        plan.validate()
            .map_err(|err| Error::Config(err.to_string()))?;
        Ok(plan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_the_reference_setup() {
        let c = RunConfig::from_toml("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.topology.cells, 20);
        assert_eq!(c.topology.base_region, 200.0);
        assert_eq!(c.topology.interference_distance, 60.0);
        assert_eq!(c.topology.loads, vec![1, 2, 3]);
        assert_eq!(c.game.channels, 5);
        c.validate().unwrap();
    }

    #[test]
    fn every_preset_parses_and_validates() {
        for (name, _) in PRESETS {
            let c = RunConfig::preset(name).unwrap();
            c.validate().unwrap();
            if c.experiment.is_some() {
                c.plan().unwrap();
            }
        }
        assert!(RunConfig::preset("nope").is_err());
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(RunConfig::from_toml("schema_version = 2").is_err());
        assert!(RunConfig::from_toml("bogus = 1").is_err());
        let c = RunConfig::from_toml("[topology]\ninterference_distance = 0.0").unwrap();
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let c = RunConfig::from_toml("[game]\nchannels = 2").unwrap();
        assert!(c.validate().is_err());
        let c = RunConfig::from_toml("[experiment]\ncells_grid = []").unwrap();
        assert!(c.plan().is_err());
    }

    #[test]
    fn overrides_reach_experiment_section() {
        let mut c = RunConfig::preset("sweep-cells").unwrap();
        c.apply(&Overrides {
            cells: Some(12),
            trials: Some(3),
            algorithm: Some(Algorithm::Standard),
            workers: Some(2),
            ..Overrides::default()
        });
        let e = c.experiment.as_ref().unwrap();
        assert_eq!(e.cells_grid, vec![12]);
        assert_eq!(e.trials, 3);
        assert_eq!(e.algorithms, vec![Algorithm::Standard]);
        assert_eq!(c.output.workers, 2);
    }

    #[test]
    fn embedded_copy_omits_output_and_round_trips() {
        let mut c = RunConfig::preset("convergence").unwrap();
        c.output.workers = 7;
        let json = c.embedded();
        assert!(!json.contains("workers"));
        let back: RunConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(back.experiment, c.experiment);
        assert_eq!(
            RunConfig::from_toml(&c.to_toml()).unwrap().experiment,
            c.experiment
        );
    }
}
