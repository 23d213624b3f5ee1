use std::borrow::Cow;
use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

use super::aggregate::aggregate_by;
use super::local_move::{move_nodes, NeighborWeights};
use super::quality::quality_of;
use super::{ClusterError, ClusteringConfig, ClusteringRun, LevelStats, Partition};

/// Leiden modularity optimization. Every returned community induces a
/// connected subgraph.
pub fn leiden(g: &Graph, cfg: &ClusteringConfig) -> Result<Partition, ClusterError> {
    leiden_run(g, cfg).map(|run| run.partition)
}

/// Leiden with its per-level trace.
///
/// A level runs greedy local moving, then refines each community into
/// well-connected sub-communities by randomized merging of singletons, and
/// aggregates on the refined partition. The next level starts with the
/// refined nodes grouped by their unrefined community, so local moving can
/// still pull pieces apart. Levels stop when local moving leaves every
/// node alone, when refinement merges nothing, or at `max_levels`.
///
/// The whole procedure is then repeated from its own result, up to
/// `max_iterations` times, until a repetition improves quality by less than
/// `min_quality_gain`. `levels` lists the levels of every repetition.
pub fn leiden_run(g: &Graph, cfg: &ClusteringConfig) -> Result<ClusteringRun, ClusterError> {
    cfg.validate()?;
    if g.total_weight() <= 0.0 {
        return Err(ClusterError::NoEdges);
    }
    let gamma = cfg.resolution.value();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut levels = Vec::new();
    let mut partition = Partition::singletons(g.n());
    let mut quality = quality_of(g, partition.assignment(), partition.k(), gamma);

    for _ in 0..cfg.max_iterations {
        let candidate = run_levels(g, partition.assignment(), cfg, &mut rng, &mut levels);
        let q = quality_of(g, candidate.assignment(), candidate.k(), gamma);
        let improved = q > quality + cfg.min_quality_gain;
        if q >= quality {
            partition = candidate;
            quality = q;
        }
        if !improved {
            break;
        }
    }
    Ok(ClusteringRun {
        partition,
        levels,
        quality,
    })
}

/// One multilevel Leiden pass starting from `initial`, which must use ids
/// below `g.n()`. Returns a partition with connected communities.
fn run_levels<R: Rng>(
    g: &Graph,
    initial: &[usize],
    cfg: &ClusteringConfig,
    rng: &mut R,
    levels: &mut Vec<LevelStats>,
) -> Partition {
    let gamma = cfg.resolution.value();
    // Original node -> node of the current level graph.
    let mut flat: Vec<usize> = (0..g.n()).collect();
    let mut level_graph: Cow<'_, Graph> = Cow::Borrowed(g);
    // Community of each node of the current level graph.
    let mut membership: Vec<usize> = initial.to_vec();

    for _ in 0..cfg.max_levels {
        let current = level_graph.as_ref();
        let outcome = move_nodes(
            current,
            &mut membership,
            gamma,
            rng,
            cfg.max_passes_per_level,
            cfg.full_sweep_convergence,
        );
        let level = Partition::compact(&membership, current.n());
        let q = quality_of(current, level.assignment(), level.k(), gamma);
        levels.push(LevelStats {
            nodes: current.n(),
            communities: level.k(),
            passes: outcome.passes,
            quality: q,
        });
        let k = level.k();
        membership = level.into_assignment();
        if k == current.n() {
            break;
        }

        let refined = refine(current, &membership, k, gamma, cfg.randomness, rng);
        if refined.k() == current.n() {
            break;
        }
        let mut next_membership = vec![0; refined.k()];
        for (u, &r) in refined.assignment().iter().enumerate() {
            next_membership[r] = membership[u];
        }
        for x in flat.iter_mut() {
            *x = refined.community(*x);
        }
        let next = aggregate_by(current, refined.assignment(), refined.k());
        level_graph = Cow::Owned(next);
        membership = next_membership;
    }

    let assignment: Vec<usize> = flat.iter().map(|&x| membership[x]).collect();
    split_disconnected(g, &assignment)
}

/// Splits every community into the connected components of the subgraph it
/// induces. Ids are assigned by order of first appearance.
///
/// For any γ > 0 this never lowers quality: two parts with no edge between
/// them always score at least as well apart as together.
pub fn split_disconnected(g: &Graph, assignment: &[usize]) -> Partition {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let mut label = vec![UNSEEN; n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for root in 0..n {
        if label[root] != UNSEEN {
            continue;
        }
        label[root] = next;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if label[v] == UNSEEN && assignment[v] == assignment[u] {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    Partition { assignment: label, k: next }
}

/// Refinement: inside each community, merge singletons into sub-communities
/// they are well connected to.
///
/// A node is eligible while it is still alone and its edge weight into the
/// rest of its community is at least `γ k_v (K_S − k_v) / 2W`. Candidate
/// sub-communities must satisfy the same test as a whole and must not lose
/// quality by absorbing the node. One candidate is drawn with probability
/// proportional to `exp(gain / θ)`, staying alone counting as gain 0.
fn refine<R: Rng>(
    g: &Graph,
    membership: &[usize],
    k: usize,
    gamma: f64,
    theta: f64,
    rng: &mut R,
) -> Partition {
    let n = g.n();
    let scale = gamma / (2.0 * g.total_weight());
    let mut community_strength = vec![0.0; k];
    for u in 0..n {
        community_strength[membership[u]] += g.strength(u);
    }
    let mut refined: Vec<usize> = (0..n).collect();
    let mut strength: Vec<f64> = (0..n).map(|u| g.strength(u)).collect();
    // Edge weight from each sub-community to the rest of its community.
    let mut external: Vec<f64> = (0..n)
        .map(|u| {
            g.weighted_neighbors(u)
                .filter(|&(v, _)| membership[v] == membership[u])
                .map(|(_, w)| w)
                .sum()
        })
        .collect();
    let mut alone = vec![true; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut around = NeighborWeights::new(n);
    let mut candidates: Vec<(usize, f64)> = Vec::new();

    for &u in &order {
        if refined[u] != u || !alone[u] {
            continue;
        }
        let s = membership[u];
        let ku = strength[u];
        let total = community_strength[s];
        if external[u] < scale * ku * (total - ku) {
            continue;
        }
        for (v, w) in g.weighted_neighbors(u) {
            if membership[v] == s {
                around.add(refined[v], w);
            }
        }
        candidates.clear();
        candidates.push((u, 0.0));
        for &c in around.touched() {
            let kc = strength[c];
            if external[c] < scale * kc * (total - kc) {
                continue;
            }
            let gain = around.get(c) - scale * ku * kc;
            if gain >= 0.0 {
                candidates.push((c, gain));
            }
        }
        let max_gain = candidates.iter().fold(0.0f64, |m, &(_, gain)| m.max(gain));
        let weights: Vec<f64> = candidates
            .iter()
            .map(|&(_, gain)| ((gain - max_gain) / theta).exp())
            .collect();
        let mut draw = rng.gen::<f64>() * weights.iter().sum::<f64>();
        let mut chosen = candidates[candidates.len() - 1].0;
        for (&(c, _), &w) in candidates.iter().zip(&weights) {
            if draw < w {
                chosen = c;
                break;
            }
            draw -= w;
        }
        if chosen != u {
            refined[u] = chosen;
            external[chosen] += external[u] - 2.0 * around.get(chosen);
            strength[chosen] += ku;
            strength[u] = 0.0;
            alone[chosen] = false;
        }
        around.clear();
    }
    Partition::compact(&refined, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::{quality, Resolution};
    use crate::graph::fixtures::f7;

    fn cfg(gamma: f64, seed: u64) -> ClusteringConfig {
        ClusteringConfig::default()
            .with_resolution(Resolution::new(gamma).unwrap())
            .with_seed(seed)
    }

    fn communities_connected(g: &Graph, p: &Partition) -> bool {
        split_disconnected(g, p.assignment()).k() == p.k()
    }

    #[test]
    fn f7_optimum() {
        let g = f7();
        let run = leiden_run(&g, &cfg(1.0, 42)).unwrap();
        assert_eq!(run.partition.k(), 2);
        assert!((run.quality - 0.3671875).abs() < 1e-12, "{}", run.quality);
        assert!(communities_connected(&g, &run.partition));
    }

    #[test]
    fn f7_low_resolution_is_one_cluster() {
        let g = f7();
        let p = leiden(&g, &cfg(0.05, 42)).unwrap();
        assert_eq!(p.k(), 1);
        assert!((quality(&g, &p, Resolution::PAPER_TUNED).unwrap() - 0.95).abs() < 1e-12);
    }

    #[test]
    fn disconnected_triangles_stay_apart() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        for seed in 0..10 {
            let p = leiden(&g, &cfg(1.0, seed)).unwrap();
            assert_eq!(p.assignment(), &[0, 0, 0, 1, 1, 1]);
        }
    }

    #[test]
    fn split_separates_components() {
        let g = Graph::from_edges(&[(0, 1), (2, 3), (1, 2)]);
        let p = split_disconnected(&g, &[0, 1, 1, 0]);
        assert_eq!(p.assignment(), &[0, 1, 1, 2]);
        let before = quality(&g, &Partition::new(vec![0, 1, 1, 0]).unwrap(), Resolution::STANDARD);
        let after = quality(&g, &p, Resolution::STANDARD);
        assert!(after.unwrap() >= before.unwrap());
    }

    #[test]
    fn refinement_stays_inside_communities() {
        let g = f7();
        let membership = vec![0, 0, 0, 0, 1, 1, 1];
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let r = refine(&g, &membership, 2, 1.0, 0.01, &mut rng);
        for u in 0..7 {
            for v in 0..7 {
                if r.community(u) == r.community(v) {
                    assert_eq!(membership[u], membership[v]);
                }
            }
        }
        assert!(communities_connected(&g, &r));
    }
}
