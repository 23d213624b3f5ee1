//! Scoring a partition: cluster sizes, the inter-cluster link matrix, label
//! fragmentation, cluster purity, and merging of small clusters.
//!
//! Nodes without a ground-truth label are counted under the reserved label
//! [`UNLABELED`](crate::graph::UNLABELED), so every node and every edge is
//! accounted for in each table.

mod merge;
mod report;

pub use merge::{merge_small_clusters, MergeDecision, MergeOutcome, UnmergedCluster, UnmergedReason};
pub use report::{format_percent, format_significant, ClusterReport};

use std::collections::BTreeMap;

use thiserror::Error;

use crate::clustering::Partition;
use crate::graph::{Graph, LabelMap};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("partition covers {found} nodes but the graph has {expected}")]
    NodeCountMismatch { expected: usize, found: usize },
    #[error("label map covers {found} nodes but the partition has {expected}")]
    LabelCountMismatch { expected: usize, found: usize },
    #[error("link matrix is empty")]
    EmptyMatrix,
}

fn check_graph(g: &Graph, p: &Partition) -> Result<(), EvalError> {
    if g.n() != p.len() {
        return Err(EvalError::NodeCountMismatch {
            expected: g.n(),
            found: p.len(),
        });
    }
    Ok(())
}

fn check_labels(p: &Partition, labels: &LabelMap) -> Result<(), EvalError> {
    if labels.len() != p.len() {
        return Err(EvalError::LabelCountMismatch {
            expected: p.len(),
            found: labels.len(),
        });
    }
    Ok(())
}

/// `(cluster_id, size)` sorted by descending size, then ascending id.
pub fn cluster_sizes(p: &Partition) -> Vec<(usize, usize)> {
    let mut sizes: Vec<(usize, usize)> = p.sizes().into_iter().enumerate().collect();
    sizes.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    sizes
}

/// Symmetric edge counts between clusters; the diagonal holds intra-cluster edges.
///
/// Stored sparsely, since most cluster pairs of a fine partition share no edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkMatrix {
    k: usize,
    /// Keyed by `(i, j)` with `i <= j`.
    counts: BTreeMap<(usize, usize), u64>,
}

impl LinkMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.counts.get(&key).copied().unwrap_or(0)
    }

    /// Sum over the upper triangle and diagonal, i.e. the edge count.
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn trace(&self) -> u64 {
        self.counts
            .iter()
            .filter(|((i, j), _)| i == j)
            .map(|(_, &c)| c)
            .sum()
    }

    /// Non-zero entries `(i, j, count)` with `i <= j`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.counts.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut dense = vec![vec![0; self.k]; self.k];
        for (i, j, c) in self.entries() {
            dense[i][j] = c;
            dense[j][i] = c;
        }
        dense
    }

    /// Builds a matrix from explicit entries; each unordered pair once.
    pub fn from_entries<I>(k: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut counts = BTreeMap::new();
        for (i, j, c) in entries {
            assert!(i < k && j < k);
            let key = if i <= j { (i, j) } else { (j, i) };
            if c > 0 {
                *counts.entry(key).or_insert(0) += c;
            }
        }
        LinkMatrix { k, counts }
    }
}

pub fn link_matrix(g: &Graph, p: &Partition) -> Result<LinkMatrix, EvalError> {
    check_graph(g, p)?;
    let entries = g
        .edges()
        .map(|(u, v, _)| (p.community(u), p.community(v), 1));
    Ok(LinkMatrix::from_entries(p.k(), entries))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSummary {
    pub intra: u64,
    pub inter: u64,
    pub intra_fraction: f64,
}

impl LinkSummary {
    pub fn total(&self) -> u64 {
        self.intra + self.inter
    }
}

/// Intra-cluster (trace) versus inter-cluster link counts.
pub fn link_summary(lm: &LinkMatrix) -> Result<LinkSummary, EvalError> {
    let total = lm.total();
    if total == 0 {
        return Err(EvalError::EmptyMatrix);
    }
    let intra = lm.trace();
    Ok(LinkSummary {
        intra,
        inter: total - intra,
        intra_fraction: intra as f64 / total as f64,
    })
}

/// Edge counts between label pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelCensus {
    /// Label names; the reserved unlabeled label comes last when present.
    pub labels: Vec<String>,
    /// Symmetric; `counts[a][b]` is the number of edges joining labels `a` and `b`.
    pub counts: Vec<Vec<u64>>,
}

impl LabelCensus {
    fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn get(&self, a: &str, b: &str) -> u64 {
        match (self.index(a), self.index(b)) {
            (Some(i), Some(j)) => self.counts[i][j],
            _ => 0,
        }
    }

    /// Edges whose endpoints share a label.
    pub fn internal(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn external(&self) -> u64 {
        let l = self.labels.len();
        (0..l)
            .flat_map(|i| ((i + 1)..l).map(move |j| (i, j)))
            .map(|(i, j)| self.counts[i][j])
            .sum()
    }
}

pub fn label_link_census(g: &Graph, labels: &LabelMap) -> Result<LabelCensus, EvalError> {
    if labels.len() != g.n() {
        return Err(EvalError::LabelCountMismatch {
            expected: g.n(),
            found: labels.len(),
        });
    }
    let (names, idx) = labels.with_reserved();
    let l = names.len();
    let mut counts = vec![vec![0u64; l]; l];
    for (u, v, _) in g.edges() {
        let (a, b) = (idx[u], idx[v]);
        counts[a][b] += 1;
        if a != b {
            counts[b][a] += 1;
        }
    }
    Ok(LabelCensus {
        labels: names,
        counts,
    })
}

/// Cluster × label node counts.
struct Contingency {
    labels: Vec<String>,
    /// `counts[c][l]`
    counts: Vec<Vec<usize>>,
}

impl Contingency {
    fn new(p: &Partition, labels: &LabelMap) -> Self {
        let (names, idx) = labels.with_reserved();
        let mut counts = vec![vec![0; names.len()]; p.k()];
        for (u, &l) in idx.iter().enumerate() {
            counts[p.community(u)][l] += 1;
        }
        Contingency {
            labels: names,
            counts,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FragmentationRow {
    pub label: String,
    pub total: usize,
    /// Clusters holding at least one node with this label.
    pub n_clusters: usize,
    pub dominant_cluster: usize,
    /// Share of the label's nodes that sit in the dominant cluster.
    pub concentration: f64,
}

/// For each label: how many clusters it spreads over and how concentrated
/// it is in its largest share. Dominance ties go to the lowest cluster id.
pub fn label_fragmentation(
    p: &Partition,
    labels: &LabelMap,
) -> Result<Vec<FragmentationRow>, EvalError> {
    check_labels(p, labels)?;
    let table = Contingency::new(p, labels);
    let rows = table
        .labels
        .iter()
        .enumerate()
        .map(|(l, name)| {
            let column = table.counts.iter().map(|row| row[l]);
            let total: usize = column.clone().sum();
            let n_clusters = column.clone().filter(|&c| c > 0).count();
            let (dominant_cluster, top) = column
                .enumerate()
                .fold((0, 0), |best, (c, x)| if x > best.1 { (c, x) } else { best });
            FragmentationRow {
                label: name.clone(),
                total,
                n_clusters,
                dominant_cluster,
                concentration: top as f64 / total as f64,
            }
        })
        .filter(|row| row.total > 0)
        .collect();
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurityRow {
    pub cluster: usize,
    pub size: usize,
    pub dominant_label: String,
    /// Share of the cluster carrying the dominant label.
    pub purity: f64,
}

/// Per cluster: the most frequent label and its share. Ties go to the
/// lexicographically smallest label.
pub fn cluster_purity(p: &Partition, labels: &LabelMap) -> Result<Vec<PurityRow>, EvalError> {
    check_labels(p, labels)?;
    let table = Contingency::new(p, labels);
    let rows = table
        .counts
        .iter()
        .enumerate()
        .map(|(c, row)| {
            let size: usize = row.iter().sum();
            let top = row.iter().copied().max().unwrap_or(0);
            let dominant_label = row
                .iter()
                .zip(&table.labels)
                .filter(|(&x, _)| x == top)
                .map(|(_, name)| name)
                .min()
                .cloned()
                .unwrap_or_default();
            PurityRow {
                cluster: c,
                size,
                dominant_label,
                purity: top as f64 / size as f64,
            }
        })
        .collect();
    Ok(rows)
}
