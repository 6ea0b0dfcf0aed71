//! Small-cell deployments and their interference graphs.
//!
//! Two SAPs interfere when their euclidean distance is strictly below the
//! interference distance `d0`. The graph is stored both as a sorted edge list
//! (`i < j`) and as per-SAP sorted neighbor lists.
//!
//! # File format
//!
//! Topologies are saved as line-oriented text:
//!
//! ```text
//! spectrum-game topology v1
//! region_side 200.0
//! interference_distance 60.0
//! coverage_radius 20.0
//! cells 3
//! 0 12.5 40.25 2
//! 1 30.0 41.0 1
//! 2 180.0 7.5 3
//! edges 1
//! 0 1
//! ```
//!
//! Each cell line is `index x y load`; each edge line is `i j` with `i < j`,
//! in ascending order. Floats are written in shortest round-trip form, so a
//! save/load cycle reproduces the topology bit for bit. Lines starting with
//! `#` and blank lines are ignored on load. Loading recomputes the edge set
//! from the positions and rejects files whose edge section disagrees.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TOPOLOGY_HEADER: &str = "spectrum-game topology v1";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }
}

/// Parameters for a random deployment.
///
/// The square side scales as `base_region * sqrt(n_cells / base_cells)` so
/// the SAP density stays fixed as the network grows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeploymentParams {
    pub n_cells: usize,
    pub load_set: Vec<usize>,
    pub base_region: f64,
    pub base_cells: usize,
    pub interference_distance: f64,
    /// Recorded in topology files; does not influence the game.
    pub coverage_radius: f64,
}

impl Default for DeploymentParams {
    fn default() -> Self {
        DeploymentParams {
            n_cells: 20,
            load_set: vec![1, 2, 3],
            base_region: 200.0,
            base_cells: 20,
            interference_distance: 60.0,
            coverage_radius: 20.0,
        }
    }
}

impl DeploymentParams {
    pub fn with_cells(&self, n_cells: usize) -> Self {
        DeploymentParams {
            n_cells,
            ..self.clone()
        }
    }

    pub fn region_side(&self) -> f64 {
        self.base_region * (self.n_cells as f64 / self.base_cells as f64).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cells == 0 {
            return Err(Error::InvalidParameter("n_cells must be at least 1".into()));
        }
        if self.load_set.is_empty() {
            return Err(Error::InvalidParameter("load set is empty".into()));
        }
        if self.load_set.contains(&0) {
            return Err(Error::InvalidParameter("loads must be positive".into()));
        }
        if self.base_cells == 0 {
            return Err(Error::InvalidParameter(
                "base_cells must be at least 1".into(),
            ));
        }
        if !(self.base_region.is_finite() && self.base_region > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "region must have positive area (base_region = {})",
                self.base_region
            )));
        }
        if !(self.interference_distance.is_finite() && self.interference_distance > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "interference distance must be positive (d0 = {})",
                self.interference_distance
            )));
        }
        if !(self.coverage_radius.is_finite() && self.coverage_radius >= 0.0) {
            return Err(Error::InvalidParameter(
                "coverage radius must be non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn max_load(&self) -> usize {
        self.load_set.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkTopology {
    positions: Vec<Point>,
    loads: Vec<usize>,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    region_side: f64,
    interference_distance: f64,
    coverage_radius: f64,
}

impl NetworkTopology {
    /// Builds a topology, deriving the edge set from `positions` and `d0`.
    pub fn new(
        positions: Vec<Point>,
        loads: Vec<usize>,
        region_side: f64,
        interference_distance: f64,
    ) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::Validation("topology has no cells".into()));
        }
        if positions.len() != loads.len() {
            return Err(Error::Validation(format!(
                "{} positions but {} loads",
                positions.len(),
                loads.len()
            )));
        }
        if loads.contains(&0) {
            return Err(Error::Validation("loads must be positive".into()));
        }
        if positions
            .iter()
            .any(|p| !(p.x.is_finite() && p.y.is_finite()))
        {
            return Err(Error::Validation("positions must be finite".into()));
        }
        if !(interference_distance.is_finite() && interference_distance > 0.0) {
            return Err(Error::Validation(format!(
                "interference distance must be positive, got {interference_distance}"
            )));
        }
        if !(region_side.is_finite() && region_side > 0.0) {
            return Err(Error::Validation(format!(
                "region side must be positive, got {region_side}"
            )));
        }

        let n = positions.len();
        let mut edges = Vec::new();
        let mut neighbors = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if positions[i].distance(positions[j]) < interference_distance {
                    edges.push((i, j));
                    neighbors[i].push(j);
                    neighbors[j].push(i);
                }
            }
        }
        for list in &mut neighbors {
            list.sort_unstable();
        }

        Ok(NetworkTopology {
            positions,
            loads,
            edges,
            neighbors,
            region_side,
            interference_distance,
            coverage_radius: 0.0,
        })
    }

    pub fn with_coverage_radius(mut self, radius: f64) -> Self {
        self.coverage_radius = radius;
        self
    }

    pub fn n_cells(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn loads(&self) -> &[usize] {
        &self.loads
    }

    pub fn load(&self, n: usize) -> usize {
        self.loads[n]
    }

    pub fn max_load(&self) -> usize {
        self.loads.iter().copied().max().unwrap_or(0)
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn region_side(&self) -> f64 {
        self.region_side
    }

    pub fn interference_distance(&self) -> f64 {
        self.interference_distance
    }

    pub fn coverage_radius(&self) -> f64 {
        self.coverage_radius
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && i < self.n_cells() && self.neighbors[i].binary_search(&j).is_ok()
    }

    /// Neighbor set J_n, sorted ascending.
    pub fn neighbors(&self, n: usize) -> Result<&[usize]> {
        self.neighbors
            .get(n)
            .map(Vec::as_slice)
            .ok_or(Error::IndexOutOfRange {
                index: n,
                n_cells: self.n_cells(),
            })
    }

    /// Unchecked neighbor access for hot loops.
    pub(crate) fn neighbors_of(&self, n: usize) -> &[usize] {
        &self.neighbors[n]
    }

    pub fn degree(&self, n: usize) -> usize {
        self.neighbors[n].len()
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n_cells() as f64
    }

    /// Graph distance between two SAPs, `None` when disconnected.
    pub fn hop_distance(&self, from: usize, to: usize) -> Option<usize> {
        if from == to {
            return Some(0);
        }
        let mut dist = vec![usize::MAX; self.n_cells()];
        let mut queue = std::collections::VecDeque::new();
        dist[from] = 0;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    if v == to {
                        return Some(dist[v]);
                    }
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// Histogram of loads as `(load, count)` in ascending load order.
    pub fn load_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist = std::collections::BTreeMap::new();
        for &k in &self.loads {
            *hist.entry(k).or_insert(0usize) += 1;
        }
        hist.into_iter().collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{TOPOLOGY_HEADER}").unwrap();
        writeln!(out, "region_side {:?}", self.region_side).unwrap();
        writeln!(
            out,
            "interference_distance {:?}",
            self.interference_distance
        )
        .unwrap();
        writeln!(out, "coverage_radius {:?}", self.coverage_radius).unwrap();
        writeln!(out, "cells {}", self.n_cells()).unwrap();
        for (i, (p, k)) in self.positions.iter().zip(&self.loads).enumerate() {
            writeln!(out, "{i} {:?} {:?} {k}", p.x, p.y).unwrap();
        }
        writeln!(out, "edges {}", self.edges.len()).unwrap();
        for (i, j) in &self.edges {
            writeln!(out, "{i} {j}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("unexpected end of file, expected {what}")))
        };

        let (line_no, header) = next("header")?;
        if header != TOPOLOGY_HEADER {
            return Err(Error::parse(
                line_no,
                format!("unsupported header {header:?}"),
            ));
        }
        let region_side: f64 = keyed_value(next("region_side")?, "region_side")?;
        let d0: f64 = keyed_value(next("interference_distance")?, "interference_distance")?;
        let coverage: f64 = keyed_value(next("coverage_radius")?, "coverage_radius")?;
        let n: usize = keyed_value(next("cells")?, "cells")?;

        let mut positions = Vec::with_capacity(n);
        let mut loads = Vec::with_capacity(n);
        for expected in 0..n {
            let (line_no, line) = next("cell line")?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::parse(line_no, "cell line needs: index x y load"));
            }
            let index: usize = parse_field(line_no, fields[0], "index")?;
            if index != expected {
                return Err(Error::parse(
                    line_no,
                    format!("expected cell index {expected}, found {index}"),
                ));
            }
            let x: f64 = parse_field(line_no, fields[1], "x")?;
            let y: f64 = parse_field(line_no, fields[2], "y")?;
            let k: usize = parse_field(line_no, fields[3], "load")?;
            positions.push(Point::new(x, y));
            loads.push(k);
        }

        let n_edges: usize = keyed_value(next("edges")?, "edges")?;
        let mut edges = Vec::with_capacity(n_edges);
        for _ in 0..n_edges {
            let (line_no, line) = next("edge line")?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::parse(line_no, "edge line needs: i j"));
            }
            let i: usize = parse_field(line_no, fields[0], "i")?;
            let j: usize = parse_field(line_no, fields[1], "j")?;
            edges.push((i, j));
        }
        if let Some((line_no, _)) = lines.next() {
            return Err(Error::parse(line_no, "trailing content after edge section"));
        }

        let topology =
            NetworkTopology::new(positions, loads, region_side, d0)?.with_coverage_radius(coverage);
        if topology.edges != edges {
            let bad = edges
                .iter()
                .find(|&&(i, j)| !(i < j && topology.has_edge(i, j)))
                .map(|(i, j)| format!("edge ({i}, {j}) violates the d0 rule"))
                .unwrap_or_else(|| {
                    "edge section does not match the d0 rule (missing or unordered edges)".into()
                });
            return Err(Error::Validation(bad));
        }
        Ok(topology)
    }

    pub fn save_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }
}

fn keyed_value<T: std::str::FromStr>((line_no, line): (usize, &str), key: &str) -> Result<T> {
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => parse_field(line_no, v, key),
        _ => Err(Error::parse(line_no, format!("expected `{key} <value>`"))),
    }
}

fn parse_field<T: std::str::FromStr>(line_no: usize, raw: &str, what: &str) -> Result<T> {
    raw.parse()
        .map_err(|_| Error::parse(line_no, format!("invalid {what}: {raw:?}")))
}

/// Draws a random deployment: positions i.i.d. uniform in the scaled square,
/// loads i.i.d. uniform over `load_set`. Deterministic in `seed`.
pub fn generate_topology(params: &DeploymentParams, seed: u64) -> Result<NetworkTopology> {
    params.validate()?;
    let side = params.region_side();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = Vec::with_capacity(params.n_cells);
    let mut loads = Vec::with_capacity(params.n_cells);
    for _ in 0..params.n_cells {
        let x = rng.gen_range(0.0..side);
        let y = rng.gen_range(0.0..side);
        positions.push(Point::new(x, y));
        loads.push(params.load_set[rng.gen_range(0..params.load_set.len())]);
    }
    Ok(
        NetworkTopology::new(positions, loads, side, params.interference_distance)?
            .with_coverage_radius(params.coverage_radius),
    )
}

/// Convenience wrapper over [`generate_topology`] with explicit arguments.
pub fn generate(
    n_cells: usize,
    load_set: &[usize],
    base_region: f64,
    base_cells: usize,
    d0: f64,
    seed: u64,
) -> Result<NetworkTopology> {
    let params = DeploymentParams {
        n_cells,
        load_set: load_set.to_vec(),
        base_region,
        base_cells,
        interference_distance: d0,
        coverage_radius: 0.0,
    };
    generate_topology(&params, seed)
}
