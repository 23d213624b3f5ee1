use crate::graph::Graph;

use super::{ClusterError, Partition, Resolution};

/// Resolution-scaled modularity of `p` on `g`.
///
/// Self-loop weight counts once toward a community's internal weight and
/// twice toward its degree, which keeps the value unchanged under
/// aggregation.
pub fn quality(g: &Graph, p: &Partition, gamma: Resolution) -> Result<f64, ClusterError> {
    p.check_len(g.n())?;
    if g.total_weight() <= 0.0 {
        return Err(ClusterError::NoEdges);
    }
    Ok(quality_of(g, p.assignment(), p.k(), gamma.value()))
}

pub(crate) fn quality_of(g: &Graph, membership: &[usize], k: usize, gamma: f64) -> f64 {
    let w = g.total_weight();
    let mut internal = vec![0.0; k];
    let mut degree = vec![0.0; k];
    for u in 0..g.n() {
        let c = membership[u];
        degree[c] += g.strength(u);
        internal[c] += g.self_weight(u);
        let mut arcs = 0.0;
        for (v, wt) in g.weighted_neighbors(u) {
            if membership[v] == c {
                arcs += wt;
            }
        }
        internal[c] += arcs / 2.0;
    }
    internal
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e / w - gamma * (d / (2.0 * w)).powi(2))
        .sum()
}
