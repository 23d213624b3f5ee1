use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

use super::{ClusterError, Partition, Resolution};

/// Result of [`move_nodes`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct MoveOutcome {
    pub moved: bool,
    pub passes: usize,
}

/// Scratch space for accumulating edge weight from one node to the
/// communities around it.
pub(crate) struct NeighborWeights {
    weight: Vec<f64>,
    marked: Vec<bool>,
    touched: Vec<usize>,
}

impl NeighborWeights {
    pub fn new(slots: usize) -> Self {
        NeighborWeights {
            weight: vec![0.0; slots],
            marked: vec![false; slots],
            touched: Vec::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, c: usize, w: f64) {
        if !self.marked[c] {
            self.marked[c] = true;
            self.touched.push(c);
        }
        self.weight[c] += w;
    }

    #[inline]
    pub fn get(&self, c: usize) -> f64 {
        self.weight[c]
    }

    /// Communities touched so far, in first-touch order.
    #[inline]
    pub fn touched(&self) -> &[usize] {
        &self.touched
    }

    pub fn clear(&mut self) {
        for &c in &self.touched {
            self.weight[c] = 0.0;
            self.marked[c] = false;
        }
        self.touched.clear();
    }
}

/// Tolerance below which a gain difference is treated as a tie, scaled by the
/// node's weighted degree so it tracks the magnitude of the terms involved.
#[inline]
pub(crate) fn gain_tolerance(strength: f64) -> f64 {
    1e-12 * (1.0 + strength)
}

/// Greedy node moving in place.
///
/// Nodes are visited in a freshly shuffled order each sweep. A node joins
/// the neighboring community with the largest gain (ties go to the lowest
/// community id) when that gain beats staying put. Leaving for an empty
/// community of its own is also a candidate, with gain zero.
///
/// After a sweep that moved something, the next sweep only revisits nodes
/// with a neighbor that changed community since their last visit. When such
/// a pruned sweep is quiet the run ends, unless `exhaustive` is set: then a
/// full sweep follows, and the run ends only when a full sweep makes no
/// move. At most `max_passes` sweeps run. Community ids in `membership` must
/// be `< g.n()`.
pub(crate) fn move_nodes<R: Rng>(
    g: &Graph,
    membership: &mut [usize],
    gamma: f64,
    rng: &mut R,
    max_passes: usize,
    exhaustive: bool,
) -> MoveOutcome {
    let n = g.n();
    let two_w = 2.0 * g.total_weight();
    let mut comm_strength = vec![0.0; n];
    let mut comm_size = vec![0usize; n];
    for u in 0..n {
        comm_strength[membership[u]] += g.strength(u);
        comm_size[membership[u]] += 1;
    }
    // Unused ids, smallest on top.
    let mut empty: Vec<usize> = (0..n).rev().filter(|&c| comm_size[c] == 0).collect();
    let mut around = NeighborWeights::new(n);
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut stale = vec![true; n];
    let mut full = true;
    let mut moved = false;
    let mut passes = 0;

    while passes < max_passes {
        passes += 1;
        order.clear();
        if full {
            order.extend(0..n);
        } else {
            order.extend((0..n).filter(|&u| stale[u]));
        }
        order.shuffle(rng);
        let mut moves = 0usize;
        for &u in &order {
            stale[u] = false;
            let ku = g.strength(u);
            let current = membership[u];
            for (v, w) in g.weighted_neighbors(u) {
                around.add(membership[v], w);
            }
            comm_strength[current] -= ku;
            let scale = gamma * ku / two_w;
            let stay = around.get(current) - scale * comm_strength[current];
            let tol = gain_tolerance(ku);

            let alone = match empty.last() {
                Some(&c) if comm_size[current] > 1 => Some(c),
                _ => None,
            };
            let mut best: Option<(usize, f64)> = None;
            for &c in around.touched().iter().chain(alone.as_ref()) {
                if c == current {
                    continue;
                }
                let gain = around.get(c) - scale * comm_strength[c];
                best = match best {
                    Some((bc, bg)) if !(gain > bg + tol || (gain >= bg - tol && c < bc)) => best,
                    _ => Some((c, gain)),
                };
            }
            match best {
                Some((c, gain)) if gain > stay + tol => {
                    if alone == Some(c) {
                        empty.pop();
                    }
                    membership[u] = c;
                    comm_strength[c] += ku;
                    comm_size[c] += 1;
                    comm_size[current] -= 1;
                    if comm_size[current] == 0 {
                        empty.push(current);
                    }
                    moves += 1;
                    for &v in g.neighbors(u) {
                        if membership[v] != c {
                            stale[v] = true;
                        }
                    }
                }
                _ => comm_strength[current] += ku,
            }
            around.clear();
        }
        if moves == 0 {
            if full || !exhaustive {
                break;
            }
            full = true;
        } else {
            moved = true;
            full = false;
        }
    }
    MoveOutcome { moved, passes }
}

/// One round of greedy local moving starting from `p`.
///
/// Returns the new partition and whether any node moved. Community ids that
/// survive keep their relative order, so an unchanged partition comes back
/// identical.
pub fn local_move(
    g: &Graph,
    p: &Partition,
    gamma: Resolution,
    seed: u64,
) -> Result<(Partition, bool), ClusterError> {
    p.check_len(g.n())?;
    if g.total_weight() <= 0.0 {
        return Err(ClusterError::NoEdges);
    }
    let mut membership = p.assignment().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcome = move_nodes(g, &mut membership, gamma.value(), &mut rng, usize::MAX, true);
    Ok((Partition::compact(&membership, g.n()), outcome.moved))
}
