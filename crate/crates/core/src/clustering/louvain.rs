use std::borrow::Cow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

use super::aggregate::aggregate_by;
use super::local_move::move_nodes;
use super::quality::quality_of;
use super::{ClusterError, ClusteringConfig, ClusteringRun, LevelStats, Partition};

/// Louvain multilevel modularity optimization.
pub fn louvain(g: &Graph, cfg: &ClusteringConfig) -> Result<Partition, ClusterError> {
    louvain_run(g, cfg).map(|run| run.partition)
}

/// Louvain with its per-level trace.
///
/// Each level runs greedy local moving from singletons and then collapses
/// the communities found into nodes. The run ends when a level moves
/// nothing, improves quality by less than `min_quality_gain`, leaves a
/// single community, or `max_levels` is hit.
pub fn louvain_run(g: &Graph, cfg: &ClusteringConfig) -> Result<ClusteringRun, ClusterError> {
    cfg.validate()?;
    if g.total_weight() <= 0.0 {
        return Err(ClusterError::NoEdges);
    }
    let gamma = cfg.resolution.value();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut flat: Vec<usize> = (0..g.n()).collect();
    let mut level_graph: Cow<'_, Graph> = Cow::Borrowed(g);
    let mut levels = Vec::new();
    let mut previous = quality_of(g, &flat, g.n(), gamma);

    for _ in 0..cfg.max_levels {
        let current = level_graph.as_ref();
        let mut membership: Vec<usize> = (0..current.n()).collect();
        let outcome = move_nodes(
            current,
            &mut membership,
            gamma,
            &mut rng,
            cfg.max_passes_per_level,
            cfg.full_sweep_convergence,
        );
        if !outcome.moved {
            break;
        }
        let level = Partition::compact(&membership, current.n());
        let q = quality_of(current, level.assignment(), level.k(), gamma);
        levels.push(LevelStats {
            nodes: current.n(),
            communities: level.k(),
            passes: outcome.passes,
            quality: q,
        });
        for x in flat.iter_mut() {
            *x = level.community(*x);
        }
        let gain = q - previous;
        previous = q;
        if level.k() == 1 || gain < cfg.min_quality_gain {
            break;
        }
        let next = aggregate_by(current, level.assignment(), level.k());
        level_graph = Cow::Owned(next);
    }

    let partition = Partition::from_labels(&flat);
    let quality = quality_of(g, partition.assignment(), partition.k(), gamma);
    Ok(ClusteringRun {
        partition,
        levels,
        quality,
    })
}
