//! Structural statistics: degree distribution, hubs, depth-limited
//! neighborhoods and reach profiles.
//!
//! Breadth-first searches visit neighbors in ascending id order, so layer
//! contents are reproducible.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("node {root} out of range for graph with {n} nodes")]
    NodeOutOfRange { root: NodeId, n: usize },
    #[error("k = {k} out of range 1..={n}")]
    CountOutOfRange { k: usize, n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub median: f64,
    /// Degree → number of nodes with that degree.
    pub histogram: BTreeMap<usize, usize>,
}

/// Mean degree of an undirected graph with `n` nodes and `m` edges.
pub fn mean_degree(n: usize, m: usize) -> f64 {
    2.0 * m as f64 / n as f64
}

/// Exact degree statistics. For even `n` the median is the midpoint of
/// the two central values.
pub fn degree_stats(g: &Graph) -> Result<DegreeStats, AnalysisError> {
    let n = g.n();
    if n == 0 {
        return Err(AnalysisError::EmptyGraph);
    }
    let mut degrees = g.degrees();
    degrees.sort_unstable();
    let median = if n % 2 == 1 {
        degrees[n / 2] as f64
    } else {
        (degrees[n / 2 - 1] + degrees[n / 2]) as f64 / 2.0
    };
    let mut histogram = BTreeMap::new();
    for &d in &degrees {
        *histogram.entry(d).or_insert(0) += 1;
    }
    Ok(DegreeStats {
        min: degrees[0],
        max: degrees[n - 1],
        mean: mean_degree(n, g.m()),
        median,
        histogram,
    })
}

/// The `k` highest-degree nodes, by descending degree then ascending id.
pub fn top_degree_nodes(g: &Graph, k: usize) -> Result<Vec<(NodeId, usize)>, AnalysisError> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(AnalysisError::CountOutOfRange { k, n });
    }
    let mut nodes: Vec<(NodeId, usize)> = (0..n).map(|u| (u, g.degree(u))).collect();
    let by_rank = |a: &(NodeId, usize), b: &(NodeId, usize)| b.1.cmp(&a.1).then(a.0.cmp(&b.0));
    if k < n {
        nodes.select_nth_unstable_by(k - 1, by_rank);
        nodes.truncate(k);
    }
    nodes.sort_unstable_by(by_rank);
    Ok(nodes)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborhoodCensus {
    pub root: NodeId,
    pub depth: usize,
    /// Reached nodes, root included.
    pub n_nodes: usize,
    /// Edges with both endpoints reached.
    pub n_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachProfile {
    pub root: NodeId,
    /// Entry `d` counts nodes within distance `d` of the root.
    pub cumulative: Vec<usize>,
}

/// Hop distances from `root`, truncated at `max_depth`. Unreached nodes get `None`.
fn bfs_distances(g: &Graph, root: NodeId, max_depth: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        if du == max_depth {
            continue;
        }
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

fn check_root(g: &Graph, root: NodeId) -> Result<(), AnalysisError> {
    if root >= g.n() {
        Err(AnalysisError::NodeOutOfRange { root, n: g.n() })
    } else {
        Ok(())
    }
}

/// Nodes within `depth` hops of `root` and the edges induced among them.
pub fn neighborhood_census(
    g: &Graph,
    root: NodeId,
    depth: usize,
) -> Result<NeighborhoodCensus, AnalysisError> {
    check_root(g, root)?;
    let dist = bfs_distances(g, root, depth);
    let mut n_nodes = 0;
    let mut arcs = 0;
    for u in (0..g.n()).filter(|&u| dist[u].is_some()) {
        n_nodes += 1;
        arcs += g.neighbors(u).iter().filter(|&&v| dist[v].is_some()).count();
    }
    Ok(NeighborhoodCensus {
        root,
        depth,
        n_nodes,
        n_edges: arcs / 2,
    })
}

/// Cumulative reached-node counts for depths `0..=max_depth`.
pub fn reach_profile(
    g: &Graph,
    root: NodeId,
    max_depth: usize,
) -> Result<ReachProfile, AnalysisError> {
    check_root(g, root)?;
    let mut cumulative = Vec::with_capacity(max_depth + 1);
    let mut seen = vec![false; g.n()];
    seen[root] = true;
    let mut frontier = vec![root];
    let mut reached = 1;
    cumulative.push(reached);
    while cumulative.len() <= max_depth {
        if frontier.is_empty() {
            // Fixed point: pad with the final count.
            cumulative.push(reached);
            continue;
        }
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    next.push(v);
                }
            }
        }
        reached += next.len();
        cumulative.push(reached);
        frontier = next;
    }
    Ok(ReachProfile { root, cumulative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::connected_components;
    use crate::graph::fixtures::*;
    use proptest::prelude::*;

    #[test]
    fn f7_degree_stats() {
        let s = degree_stats(&f7()).unwrap();
        assert_eq!((s.min, s.max), (2, 3));
        assert!((s.mean - 16.0 / 7.0).abs() < 1e-12);
        assert_eq!(s.median, 2.0);
        assert_eq!(s.histogram, BTreeMap::from([(2, 5), (3, 2)]));
    }

    #[test]
    fn single_edge_stats() {
        let s = degree_stats(&Graph::from_edges(&[(0, 1)])).unwrap();
        assert_eq!((s.min, s.max, s.mean, s.median), (1, 1, 1.0, 1.0));
    }

    #[test]
    fn even_median_is_midpoint() {
        // Sorted degrees 1, 1, 2, 2.
        let s = degree_stats(&path(4)).unwrap();
        assert_eq!(s.median, 1.5);
    }

    #[test]
    fn empty_graph_has_no_stats() {
        let g = Graph::with_node_count(0, std::iter::empty());
        assert_eq!(degree_stats(&g), Err(AnalysisError::EmptyGraph));
    }

    #[test]
    fn mean_degree_formula() {
        let mean = mean_degree(698_135, 4_590_190);
        assert!((mean - 13.15).abs() < 0.005, "{mean}");
    }

    #[test]
    fn hubs() {
        assert_eq!(top_degree_nodes(&f7(), 2).unwrap(), vec![(2, 3), (4, 3)]);
        assert_eq!(top_degree_nodes(&f7(), 1).unwrap(), vec![(2, 3)]);
        assert_eq!(top_degree_nodes(&star4(), 1).unwrap(), vec![(0, 3)]);
        assert!(top_degree_nodes(&f7(), 0).is_err());
        assert!(top_degree_nodes(&f7(), 8).is_err());
    }

    #[test]
    fn census_examples() {
        let c = neighborhood_census(&star4(), 0, 1).unwrap();
        assert_eq!((c.n_nodes, c.n_edges), (4, 3));
        let c = neighborhood_census(&f7(), 0, 2).unwrap();
        assert_eq!((c.n_nodes, c.n_edges), (4, 4));
        let c = neighborhood_census(&f7(), 0, 0).unwrap();
        assert_eq!((c.n_nodes, c.n_edges), (1, 0));
        assert_eq!(
            neighborhood_census(&f7(), 99, 1),
            Err(AnalysisError::NodeOutOfRange { root: 99, n: 7 })
        );
    }

    #[test]
    fn profile_examples() {
        assert_eq!(reach_profile(&f7(), 0, 4).unwrap().cumulative, vec![1, 3, 4, 5, 7]);
        assert_eq!(reach_profile(&star4(), 0, 2).unwrap().cumulative, vec![1, 4, 4]);
        let tri = Graph::from_edges(&[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(reach_profile(&tri, 0, 3).unwrap().cumulative, vec![1, 3, 3, 3]);
        assert!(reach_profile(&f7(), 7, 1).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..30).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..(3 * n))
                .prop_map(move |e| Graph::with_node_count(n, e))
        })
    }

    proptest! {
        #[test]
        fn stats_are_consistent(g in arb_graph()) {
            let s = degree_stats(&g).unwrap();
            prop_assert_eq!(s.histogram.values().sum::<usize>(), g.n());
            prop_assert!((s.mean * g.n() as f64 - 2.0 * g.m() as f64).abs() < 1e-9);
            prop_assert!(s.min as f64 <= s.median && s.median <= s.max as f64);
            let all = top_degree_nodes(&g, g.n()).unwrap();
            let mut ids: Vec<_> = all.iter().map(|&(u, _)| u).collect();
            ids.sort();
            prop_assert_eq!(ids, (0..g.n()).collect::<Vec<_>>());
        }

        #[test]
        fn census_matches_profile(g in arb_graph(), root in 0usize..30, depth in 0usize..6) {
            let root = root % g.n();
            let census = neighborhood_census(&g, root, depth).unwrap();
            let profile = reach_profile(&g, root, depth).unwrap();
            prop_assert_eq!(profile.cumulative.len(), depth + 1);
            prop_assert_eq!(census.n_nodes, profile.cumulative[depth]);
            prop_assert!(census.n_edges <= g.m());
            prop_assert_eq!(profile.cumulative[0], 1);
            prop_assert!(profile.cumulative.windows(2).all(|w| w[0] <= w[1]));
            let (label, sizes) = connected_components(&g);
            prop_assert!(*profile.cumulative.last().unwrap() <= sizes[label[root]]);
        }
    }
}
