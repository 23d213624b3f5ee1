//! Seeded stochastic block model graphs with planted communities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, LabelMap, NodeId};

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("at least one non-empty block is required")]
    NoNodes,
}

/// A planted-partition graph: `blocks[u]` is the block that generated node `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedGraph {
    pub n: usize,
    /// Each unordered pair once, `u < v`, grouped by block pair.
    pub edges: Vec<(NodeId, NodeId)>,
    pub blocks: Vec<usize>,
}

impl PlantedGraph {
    pub fn graph(&self) -> Graph {
        Graph::with_node_count(self.n, self.edges.iter().copied())
    }

    /// Planted blocks as labels `block0`, `block1`, ...
    pub fn block_labels(&self) -> LabelMap {
        let pairs = self
            .blocks
            .iter()
            .enumerate()
            .map(|(u, b)| (u, format!("block{b}")));
        LabelMap::from_pairs(self.n, pairs).expect("one label per node")
    }
}

/// Samples each within-block pair with probability `p_in` and each
/// cross-block pair with probability `p_out`.
///
/// Nodes are numbered block by block. Each block pair draws from its own
/// random stream, so the result depends only on the arguments, never on the
/// number of worker threads. Sampling skips geometrically between hits and
/// costs time proportional to the number of edges produced.
pub fn stochastic_block_model(
    block_sizes: &[usize],
    p_in: f64,
    p_out: f64,
    seed: u64,
) -> Result<PlantedGraph, GenerateError> {
    for p in [p_in, p_out] {
        if !(0.0..=1.0).contains(&p) {
            return Err(GenerateError::InvalidProbability(p));
        }
    }
    let n: usize = block_sizes.iter().sum();
    if n == 0 {
        return Err(GenerateError::NoNodes);
    }
    let mut starts = Vec::with_capacity(block_sizes.len());
    let mut acc = 0;
    for &s in block_sizes {
        starts.push(acc);
        acc += s;
    }
    let b = block_sizes.len();
    let pairs: Vec<(usize, usize)> = (0..b).flat_map(|a| (a..b).map(move |c| (a, c))).collect();

    let chunks: Vec<Vec<(NodeId, NodeId)>> = pairs
        .par_iter()
        .enumerate()
        .map(|(stream, &(a, c))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream as u64);
            if a == c {
                sample_within(block_sizes[a], starts[a], p_in, &mut rng)
            } else {
                sample_between(
                    (starts[a], block_sizes[a]),
                    (starts[c], block_sizes[c]),
                    p_out,
                    &mut rng,
                )
            }
        })
        .collect();

    let mut edges = Vec::with_capacity(chunks.iter().map(Vec::len).sum());
    for chunk in chunks {
        edges.extend(chunk);
    }
    let blocks = block_sizes
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| std::iter::repeat(i).take(s))
        .collect();
    Ok(PlantedGraph { n, edges, blocks })
}

/// Number of failures before the next success of a Bernoulli(`p`) sequence.
fn skip<R: Rng>(p: f64, log_q: f64, rng: &mut R) -> u64 {
    if p >= 1.0 {
        return 0;
    }
    let u: f64 = 1.0 - rng.gen::<f64>();
    let s = (u.ln() / log_q).floor();
    if s >= u64::MAX as f64 {
        u64::MAX
    } else {
        s as u64
    }
}

fn sample_within<R: Rng>(size: usize, start: usize, p: f64, rng: &mut R) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    if p <= 0.0 || size < 2 {
        return out;
    }
    let log_q = (1.0 - p).ln();
    // Walk the upper triangle row by row; (i, j) is the next candidate pair.
    let (mut i, mut j) = (0usize, 1usize);
    loop {
        let mut s = skip(p, log_q, rng);
        while s > 0 {
            let left = (size - j) as u64;
            if s < left {
                j += s as usize;
                s = 0;
            } else {
                s -= left;
                i += 1;
                j = i + 1;
                if j >= size {
                    return out;
                }
            }
        }
        out.push((start + i, start + j));
        j += 1;
        if j >= size {
            i += 1;
            j = i + 1;
            if j >= size {
                return out;
            }
        }
    }
}

fn sample_between<R: Rng>(
    (a_start, a_size): (usize, usize),
    (b_start, b_size): (usize, usize),
    p: f64,
    rng: &mut R,
) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    let total = (a_size as u64) * (b_size as u64);
    if p <= 0.0 || total == 0 {
        return out;
    }
    let log_q = (1.0 - p).ln();
    let mut t = 0u64;
    loop {
        t = t.saturating_add(skip(p, log_q, rng));
        if t >= total {
            return out;
        }
        let i = (t / b_size as u64) as usize;
        let j = (t % b_size as u64) as usize;
        out.push((a_start + i, b_start + j));
        t += 1;
    }
}
