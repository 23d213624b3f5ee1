use std::collections::VecDeque;

use super::{Graph, GraphError, NodeId};

/// Correspondence between node ids before and after a relabeling step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeMapping {
    old_to_new: Vec<Option<NodeId>>,
    new_to_old: Vec<NodeId>,
}

impl NodeMapping {
    pub fn identity(n: usize) -> Self {
        NodeMapping {
            old_to_new: (0..n).map(Some).collect(),
            new_to_old: (0..n).collect(),
        }
    }

    /// Keeps the flagged ids, numbered in ascending order of their old id.
    pub fn from_retained(keep: &[bool]) -> Self {
        let mut old_to_new = vec![None; keep.len()];
        let mut new_to_old = Vec::new();
        for (old, &k) in keep.iter().enumerate() {
            if k {
                old_to_new[old] = Some(new_to_old.len());
                new_to_old.push(old);
            }
        }
        NodeMapping {
            old_to_new,
            new_to_old,
        }
    }

    #[inline]
    pub fn to_new(&self, old: NodeId) -> Option<NodeId> {
        self.old_to_new.get(old).copied().flatten()
    }

    #[inline]
    pub fn to_old(&self, new: NodeId) -> NodeId {
        self.new_to_old[new]
    }

    pub fn new_to_old(&self) -> &[NodeId] {
        &self.new_to_old
    }

    /// Size of the id space before relabeling.
    pub fn old_len(&self) -> usize {
        self.old_to_new.len()
    }

    pub fn is_identity(&self) -> bool {
        self.new_to_old.len() == self.old_to_new.len()
            && self.new_to_old.iter().enumerate().all(|(i, &o)| i == o)
    }

    /// Mapping equivalent to applying `self` and then `next`.
    pub fn then(&self, next: &NodeMapping) -> NodeMapping {
        assert_eq!(next.old_len(), self.new_to_old.len());
        let old_to_new = self
            .old_to_new
            .iter()
            .map(|m| m.and_then(|mid| next.to_new(mid)))
            .collect();
        let new_to_old = next
            .new_to_old
            .iter()
            .map(|&mid| self.new_to_old[mid])
            .collect();
        NodeMapping {
            old_to_new,
            new_to_old,
        }
    }
}

/// Labels every node with its component index. Components are numbered in
/// order of their smallest node id. Returns the labels and the component sizes.
pub fn connected_components(g: &Graph) -> (Vec<usize>, Vec<usize>) {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let mut label = vec![UNSEEN; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        if label[root] != UNSEEN {
            continue;
        }
        let c = sizes.len();
        label[root] = c;
        queue.push_back(root);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &v in g.neighbors(u) {
                if label[v] == UNSEEN {
                    label[v] = c;
                    queue.push_back(v);
                }
            }
        }
        sizes.push(size);
    }
    (label, sizes)
}

/// Induced subgraph on the largest connected component.
///
/// Among equally large components the one containing the smallest node id
/// wins. Relabeling preserves relative node order.
pub fn largest_connected_component(g: &Graph) -> Result<(Graph, NodeMapping), GraphError> {
    if g.n() == 0 {
        return Err(GraphError::EmptyGraph);
    }
    let (label, sizes) = connected_components(g);
    // Components are numbered by smallest member, so the first maximum wins ties.
    let best = sizes
        .iter()
        .enumerate()
        .fold(0, |best, (c, &s)| if s > sizes[best] { c } else { best });
    let keep: Vec<bool> = label.iter().map(|&c| c == best).collect();
    Ok(g.induced_subgraph(&keep))
}

/// Removes nodes of degree `<= k`.
///
/// A single pass judges every node by its degree in the input graph. The
/// iterative mode keeps peeling until every survivor has degree `> k`.
pub fn prune_low_degree(
    g: &Graph,
    k: usize,
    iterative: bool,
) -> Result<(Graph, NodeMapping), GraphError> {
    let n = g.n();
    let mut keep: Vec<bool> = (0..n).map(|u| g.degree(u) > k).collect();
    if iterative {
        let mut degree = g.degrees();
        let mut queue: VecDeque<NodeId> = (0..n).filter(|&u| !keep[u]).collect();
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if keep[v] {
                    degree[v] -= 1;
                    if degree[v] <= k {
                        keep[v] = false;
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    if !keep.iter().any(|&x| x) {
        return Err(GraphError::AllPruned { n, k });
    }
    Ok(g.induced_subgraph(&keep))
}
