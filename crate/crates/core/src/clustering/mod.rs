//! Community detection.
//!
//! All optimizers maximize resolution-scaled modularity
//!
//! ```text
//! Q(γ) = Σ_c [ e_c / W − γ (d_c / 2W)² ]
//! ```
//!
//! where `W` is the total edge weight, `e_c` the weight inside community `c`
//! and `d_c` the summed weighted degree of its members. `γ = 1` is classic
//! modularity; smaller values favor fewer, larger communities.

mod aggregate;
mod io;
mod kmeans;
mod leiden;
mod local_move;
mod louvain;
mod quality;
mod spectral;

pub use aggregate::aggregate;
pub use io::{read_partition, write_partition};
pub use kmeans::{kmeans, KMeansOutcome};
pub use leiden::{leiden, leiden_run, split_disconnected};
pub use local_move::local_move;
pub use louvain::{louvain, louvain_run};
pub use quality::quality;
pub use spectral::{
    normalized_laplacian_eigenpairs, spectral_cluster, EigenPairs, DEFAULT_SPECTRAL_SIZE_CAP,
};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error, PartialEq)]
pub enum ClusterError {
    #[error("partition covers {found} nodes but the graph has {expected}")]
    NodeCountMismatch { expected: usize, found: usize },
    #[error("community ids are not consecutive: id {missing} is unused")]
    NonConsecutiveIds { missing: usize },
    #[error("graph has no edges")]
    NoEdges,
    #[error("resolution must be positive and finite, got {0}")]
    InvalidResolution(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("spectral clustering refused: graph has {n} nodes, size cap is {cap}")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("spectral clustering requires a connected graph")]
    NotConnected,
    #[error("cluster count {k} out of range for {n} points")]
    InvalidClusterCount { k: usize, n: usize },
    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("partition file line {line}: {message}")]
    PartitionFile { line: usize, message: String },
    #[error("partition file does not assign node {node}")]
    MissingNode { node: NodeId },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for ClusterError {
    fn from(e: std::io::Error) -> Self {
        ClusterError::Io(e.to_string())
    }
}

/// Assignment of every node to a community, with ids `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    assignment: Vec<usize>,
    k: usize,
}

impl Partition {
    /// Validates that the ids used are exactly `0..k`.
    pub fn new(assignment: Vec<usize>) -> Result<Self, ClusterError> {
        let k = assignment.iter().max().map_or(0, |&m| m + 1);
        let mut used = vec![false; k];
        for &c in &assignment {
            used[c] = true;
        }
        if let Some(missing) = used.iter().position(|&u| !u) {
            return Err(ClusterError::NonConsecutiveIds { missing });
        }
        Ok(Partition { assignment, k })
    }

    /// Renumbers arbitrary labels by order of first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let assignment = labels
            .iter()
            .map(|&l| {
                let next = ids.len();
                *ids.entry(l).or_insert(next)
            })
            .collect();
        Partition {
            assignment,
            k: ids.len(),
        }
    }

    /// Drops unused ids from labels in `0..slots`, keeping their relative order.
    pub(crate) fn compact(labels: &[usize], slots: usize) -> Self {
        let mut map = vec![usize::MAX; slots];
        for &l in labels {
            map[l] = 0;
        }
        let mut k = 0;
        for m in map.iter_mut() {
            if *m == 0 {
                *m = k;
                k += 1;
            }
        }
        Partition {
            assignment: labels.iter().map(|&l| map[l]).collect(),
            k,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            assignment: (0..n).collect(),
            k: n,
        }
    }

    /// Everything in community 0.
    pub fn whole(n: usize) -> Self {
        Partition {
            assignment: vec![0; n],
            k: usize::from(n > 0),
        }
    }

    /// Number of nodes covered.
    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Number of non-empty communities.
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn community(&self, u: NodeId) -> usize {
        self.assignment[u]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn into_assignment(self) -> Vec<usize> {
        self.assignment
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    /// Members of each community in ascending node order.
    pub fn members(&self) -> Vec<Vec<NodeId>> {
        let mut members = vec![Vec::new(); self.k];
        for (u, &c) in self.assignment.iter().enumerate() {
            members[c].push(u);
        }
        members
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<(), ClusterError> {
        if self.len() != n {
            Err(ClusterError::NodeCountMismatch {
                expected: n,
                found: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

/// Resolution parameter γ of the quality function; always positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Resolution(f64);

impl Resolution {
    /// Classic modularity.
    pub const STANDARD: Resolution = Resolution(1.0);
    /// The low-resolution preset that yields a few large, field-level clusters.
    pub const PAPER_TUNED: Resolution = Resolution(0.05);

    pub fn new(gamma: f64) -> Result<Self, ClusterError> {
        if gamma.is_finite() && gamma > 0.0 {
            Ok(Resolution(gamma))
        } else {
            Err(ClusterError::InvalidResolution(gamma))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution::STANDARD
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parameters shared by the optimizers.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringConfig {
    pub resolution: Resolution,
    pub seed: u64,
    /// Upper bound on aggregation levels.
    pub max_levels: usize,
    /// Upper bound on repeated Leiden runs, each starting from the last result.
    pub max_iterations: usize,
    /// Upper bound on node sweeps within one level.
    pub max_passes_per_level: usize,
    /// When set, every level's local moving continues until a sweep over all
    /// nodes makes no move. Otherwise a level ends once a sweep over the
    /// nodes whose neighborhood changed is quiet, which is much faster on
    /// large graphs and rarely leaves an improving move behind.
    pub full_sweep_convergence: bool,
    /// Louvain stops once a level improves quality by less than this.
    pub min_quality_gain: f64,
    /// Temperature of the randomized merge in Leiden's refinement.
    pub randomness: f64,
    /// Largest graph spectral clustering will attempt.
    pub spectral_size_cap: usize,
}

impl Default for ClusteringConfig {
    fn default() -> Self {
        ClusteringConfig {
            resolution: Resolution::STANDARD,
            seed: 0,
            max_levels: 50,
            max_iterations: 20,
            max_passes_per_level: 1_000,
            full_sweep_convergence: false,
            min_quality_gain: 1e-10,
            randomness: 0.01,
            spectral_size_cap: DEFAULT_SPECTRAL_SIZE_CAP,
        }
    }
}

impl ClusteringConfig {
    pub fn with_resolution(mut self, resolution: Resolution) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), ClusterError> {
        Resolution::new(self.resolution.value())?;
        if self.max_levels == 0 {
            return Err(ClusterError::InvalidConfig("max_levels must be at least 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(ClusterError::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if self.max_passes_per_level == 0 {
            return Err(ClusterError::InvalidConfig(
                "max_passes_per_level must be at least 1".into(),
            ));
        }
        if self.min_quality_gain.is_nan() || self.min_quality_gain < 0.0 {
            return Err(ClusterError::InvalidConfig(
                "min_quality_gain must be non-negative".into(),
            ));
        }
        if !(self.randomness > 0.0 && self.randomness.is_finite()) {
            return Err(ClusterError::InvalidConfig("randomness must be positive".into()));
        }
        Ok(())
    }
}

/// Per-level trace of a multilevel run.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelStats {
    /// Nodes in the graph optimized at this level.
    pub nodes: usize,
    /// Communities after local moving.
    pub communities: usize,
    /// Node sweeps performed.
    pub passes: usize,
    /// Quality of the flattened partition after this level.
    pub quality: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusteringRun {
    pub partition: Partition,
    pub levels: Vec<LevelStats>,
    /// Quality of `partition` on the input graph.
    pub quality: f64,
}
