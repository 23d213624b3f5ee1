//! Undirected graphs in compressed adjacency form, plus ingestion and cleaning.
//!
//! Citations are directed, but every analysis in this crate treats a link as
//! undirected: a pair of papers citing each other becomes a single edge of
//! weight 1. Raw graphs carry unit weights and no self-loops; aggregated
//! graphs produced during multilevel clustering carry summed weights and a
//! per-node self-loop weight holding the collapsed intra-community weight.

mod clean;
mod labels;
mod parse;

pub use clean::{
    connected_components, largest_connected_component, prune_low_degree, NodeMapping,
};
pub use labels::{load_labels, LabelMap, UNLABELED};
pub use parse::{build_graph, parse_edge_list, write_edge_list, write_mapping, EdgeList};

use std::collections::VecDeque;

use rayon::prelude::*;
use thiserror::Error;

/// Node identifier. Graph nodes are always numbered `0..n`.
pub type NodeId = usize;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("empty input")]
    EmptyInput,
    #[error("empty graph")]
    EmptyGraph,
    #[error("all {n} nodes pruned at degree threshold {k}")]
    AllPruned { n: usize, k: usize },
    #[error("node id {id} out of range for graph with {n} nodes")]
    NodeOutOfRange { id: NodeId, n: usize },
    #[error("node {id} has conflicting labels {first:?} and {second:?}")]
    ConflictingLabel {
        id: NodeId,
        first: String,
        second: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Immutable undirected graph in CSR layout.
///
/// Neighbor lists are sorted ascending and duplicate-free, the adjacency is
/// symmetric with equal weights in both directions, and self-loops are never
/// stored in the adjacency: their weight lives in [`Graph::self_weight`].
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    weights: Vec<f64>,
    self_weights: Vec<f64>,
    strengths: Vec<f64>,
    edge_count: usize,
    total_weight: f64,
}

impl Graph {
    /// Builds an unweighted simple graph with `n` nodes.
    ///
    /// Self-loops are dropped and both orientations of a pair collapse to one
    /// edge. Panics if an endpoint is `>= n`.
    pub fn with_node_count<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut arcs: Vec<(NodeId, NodeId)> = Vec::new();
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n = {n}");
            if u != v {
                arcs.push((u, v));
                arcs.push((v, u));
            }
        }
        arcs.par_sort_unstable();
        arcs.dedup();

        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &arcs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets: Vec<NodeId> = arcs.into_iter().map(|(_, v)| v).collect();
        let weights = vec![1.0; targets.len()];
        let strengths = (0..n).map(|u| (offsets[u + 1] - offsets[u]) as f64).collect();
        let edge_count = targets.len() / 2;
        Graph {
            offsets,
            targets,
            weights,
            self_weights: vec![0.0; n],
            strengths,
            edge_count,
            total_weight: edge_count as f64,
        }
    }

    /// Builds an unweighted graph whose node count is one past the largest endpoint.
    pub fn from_edges(edges: &[(NodeId, NodeId)]) -> Self {
        let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
        Self::with_node_count(n, edges.iter().copied())
    }

    /// Assembles a weighted graph from per-node adjacency that is already
    /// sorted, symmetric and free of self entries.
    pub(crate) fn from_weighted_adjacency(
        adjacency: Vec<Vec<(NodeId, f64)>>,
        self_weights: Vec<f64>,
    ) -> Self {
        let n = adjacency.len();
        debug_assert_eq!(self_weights.len(), n);
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let total: usize = adjacency.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        let mut weights = Vec::with_capacity(total);
        let mut strengths = Vec::with_capacity(n);
        let mut arc_weight = 0.0;
        for (u, list) in adjacency.into_iter().enumerate() {
            let mut s = 2.0 * self_weights[u];
            for (v, w) in list {
                debug_assert_ne!(u, v);
                targets.push(v);
                weights.push(w);
                s += w;
                arc_weight += w;
            }
            strengths.push(s);
            offsets.push(targets.len());
        }
        let edge_count = targets.len() / 2;
        let total_weight = arc_weight / 2.0 + self_weights.iter().sum::<f64>();
        Graph {
            offsets,
            targets,
            weights,
            self_weights,
            strengths,
            edge_count,
            total_weight,
        }
    }

    /// Number of nodes.
    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges, self-loops excluded.
    #[inline]
    pub fn m(&self) -> usize {
        self.edge_count
    }

    /// Number of distinct neighbors of `u`.
    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Weighted degree: incident edge weight plus twice the self-loop weight.
    #[inline]
    pub fn strength(&self, u: NodeId) -> f64 {
        self.strengths[u]
    }

    #[inline]
    pub fn self_weight(&self, u: NodeId) -> f64 {
        self.self_weights[u]
    }

    /// Sum of all edge weights, self-loops included. Equals `m` on raw graphs.
    #[inline]
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn neighbor_weights(&self, u: NodeId) -> &[f64] {
        &self.weights[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Iterates `(neighbor, weight)` pairs of `u` in ascending neighbor order.
    #[inline]
    pub fn weighted_neighbors(&self, u: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.neighbors(u)
            .iter()
            .copied()
            .zip(self.neighbor_weights(u).iter().copied())
    }

    /// Weight of edge `(u, v)`, zero when absent. `u == v` yields the self-loop weight.
    pub fn edge_weight(&self, u: NodeId, v: NodeId) -> f64 {
        if u == v {
            return self.self_weights[u];
        }
        match self.neighbors(u).binary_search(&v) {
            Ok(i) => self.neighbor_weights(u)[i],
            Err(_) => 0.0,
        }
    }

    /// Each undirected edge once, as `(u, v, weight)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.weighted_neighbors(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    /// True when any edge weight differs from 1 or any self-loop weight is set.
    pub fn is_weighted(&self) -> bool {
        self.weights.iter().any(|&w| w != 1.0) || self.self_weights.iter().any(|&w| w != 0.0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|u| self.degree(u)).collect()
    }

    /// Subgraph induced by nodes with `keep[u] == true`, relabeled consecutively
    /// in ascending order of the original ids.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (Graph, NodeMapping) {
        assert_eq!(keep.len(), self.n());
        let mapping = NodeMapping::from_retained(keep);
        let adjacency = mapping
            .new_to_old()
            .iter()
            .map(|&old| {
                self.weighted_neighbors(old)
                    .filter_map(|(v, w)| mapping.to_new(v).map(|nv| (nv, w)))
                    .collect()
            })
            .collect();
        let self_weights = mapping
            .new_to_old()
            .iter()
            .map(|&old| self.self_weights[old])
            .collect();
        (Graph::from_weighted_adjacency(adjacency, self_weights), mapping)
    }

    /// True when every node is reachable from node 0. The empty graph is not connected.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }
}
