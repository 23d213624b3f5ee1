use std::collections::BTreeMap;

use crate::clustering::Partition;
use crate::graph::Graph;

use super::{check_graph, EvalError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeDecision {
    /// Small cluster, in the input partition's numbering.
    pub from: usize,
    /// Receiving cluster, in the input partition's numbering.
    pub to: usize,
    /// External edges from `from` that land in `to`.
    pub edges_to_target: u64,
    pub external_edges: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnmergedReason {
    NoExternalEdges,
    /// No single large cluster receives more than half of the external edges.
    NoMajority,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnmergedCluster {
    pub cluster: usize,
    pub size: usize,
    pub reason: UnmergedReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeOutcome {
    /// Merged partition, ids compacted in the order of the surviving input ids.
    pub partition: Partition,
    pub merges: Vec<MergeDecision>,
    pub unmerged: Vec<UnmergedCluster>,
}

/// Folds every cluster smaller than `min_size` into the large cluster that
/// receives a strict majority of its external edges.
///
/// Small clusters are processed by ascending size, then ascending id. Edges
/// into a small cluster that has already been merged count toward its
/// target. Clusters with no external edges, or without a strict majority
/// toward one large cluster, are left in place and reported.
pub fn merge_small_clusters(
    g: &Graph,
    p: &Partition,
    min_size: usize,
) -> Result<MergeOutcome, EvalError> {
    check_graph(g, p)?;
    let sizes = p.sizes();
    let k = p.k();
    let is_small: Vec<bool> = sizes.iter().map(|&s| s < min_size).collect();

    // External edge tallies of each small cluster, keyed by the other cluster.
    let mut tallies: BTreeMap<usize, BTreeMap<usize, u64>> = BTreeMap::new();
    for (u, v, _) in g.edges() {
        let (a, b) = (p.community(u), p.community(v));
        if a == b {
            continue;
        }
        if is_small[a] {
            *tallies.entry(a).or_default().entry(b).or_insert(0) += 1;
        }
        if is_small[b] {
            *tallies.entry(b).or_default().entry(a).or_insert(0) += 1;
        }
    }

    let mut order: Vec<usize> = (0..k).filter(|&c| is_small[c]).collect();
    order.sort_by_key(|&c| (sizes[c], c));

    let mut target: Vec<usize> = (0..k).collect();
    let mut merges = Vec::new();
    let mut unmerged = Vec::new();
    for c in order {
        let mut resolved: BTreeMap<usize, u64> = BTreeMap::new();
        for (&other, &count) in tallies.get(&c).into_iter().flatten() {
            *resolved.entry(target[other]).or_insert(0) += count;
        }
        let external: u64 = resolved.values().sum();
        if external == 0 {
            unmerged.push(UnmergedCluster {
                cluster: c,
                size: sizes[c],
                reason: UnmergedReason::NoExternalEdges,
            });
            continue;
        }
        let (best, best_count) = resolved
            .iter()
            .fold((usize::MAX, 0), |acc, (&t, &n)| if n > acc.1 { (t, n) } else { acc });
        if 2 * best_count > external && !is_small[best] {
            target[c] = best;
            merges.push(MergeDecision {
                from: c,
                to: best,
                edges_to_target: best_count,
                external_edges: external,
            });
        } else {
            unmerged.push(UnmergedCluster {
                cluster: c,
                size: sizes[c],
                reason: UnmergedReason::NoMajority,
            });
        }
    }

    let labels: Vec<usize> = p.assignment().iter().map(|&c| target[c]).collect();
    Ok(MergeOutcome {
        partition: Partition::compact(&labels, k),
        merges,
        unmerged,
    })
}
