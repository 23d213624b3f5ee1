use crate::graph::Graph;

use super::local_move::NeighborWeights;
use super::{ClusterError, Partition};

/// Collapses each community of `p` into a single node.
///
/// Weights between communities are summed; weight inside a community,
/// including its members' self-loops, becomes the new node's self-loop.
/// Node `c` of the result stands for community `c`.
pub fn aggregate(g: &Graph, p: &Partition) -> Result<Graph, ClusterError> {
    p.check_len(g.n())?;
    Ok(aggregate_by(g, p.assignment(), p.k()))
}

pub(crate) fn aggregate_by(g: &Graph, membership: &[usize], k: usize) -> Graph {
    let n = g.n();
    // Bucket nodes by community.
    let mut start = vec![0usize; k + 1];
    for &c in membership {
        start[c + 1] += 1;
    }
    for c in 0..k {
        start[c + 1] += start[c];
    }
    let mut fill = start.clone();
    let mut members = vec![0usize; n];
    for (u, &c) in membership.iter().enumerate() {
        members[fill[c]] = u;
        fill[c] += 1;
    }

    let mut around = NeighborWeights::new(k);
    let mut adjacency = Vec::with_capacity(k);
    let mut self_weights = vec![0.0; k];
    for c in 0..k {
        let mut inside = 0.0;
        for &u in &members[start[c]..start[c + 1]] {
            self_weights[c] += g.self_weight(u);
            for (v, w) in g.weighted_neighbors(u) {
                let d = membership[v];
                if d == c {
                    inside += w;
                } else {
                    around.add(d, w);
                }
            }
        }
        self_weights[c] += inside / 2.0;
        let mut list: Vec<(usize, f64)> = around.touched().iter().map(|&d| (d, around.get(d))).collect();
        list.sort_unstable_by_key(|&(d, _)| d);
        adjacency.push(list);
        around.clear();
    }
    Graph::from_weighted_adjacency(adjacency, self_weights)
}
