//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here works from first definitions on tiny inputs and shares
//! no code with the library beyond the `Graph` accessors.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::VecDeque;

use citenet::graph::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const F7_EDGES: [(usize, usize); 8] = [
    (0, 1),
    (0, 2),
    (1, 2),
    (2, 3),
    (3, 4),
    (4, 5),
    (4, 6),
    (5, 6),
];

pub fn f7() -> Graph {
    Graph::from_edges(&F7_EDGES)
}

/// Modularity from the pairwise definition
/// `(1/2m) Σ_ij [A_ij − γ k_i k_j / 2m] δ(c_i, c_j)` over a dense adjacency.
pub fn pairwise_quality(n: usize, edges: &[(usize, usize)], membership: &[usize], gamma: f64) -> f64 {
    let mut a = vec![vec![0.0f64; n]; n];
    for &(u, v) in edges {
        if u != v {
            a[u][v] = 1.0;
            a[v][u] = 1.0;
        }
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if membership[i] == membership[j] {
                total += a[i][j] - gamma * k[i] * k[j] / two_m;
            }
        }
    }
    total / two_m
}

/// Every set partition of `n` elements as a restricted growth string.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for c in 0..=max + 1 {
            prefix.push(c);
            grow(prefix, max.max(c), n, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    grow(&mut vec![0], 0, n, &mut out);
    out
}

/// Best quality over all set partitions, by exhaustive search.
pub fn optimum(n: usize, edges: &[(usize, usize)], gamma: f64) -> f64 {
    all_partitions(n)
        .iter()
        .map(|p| pairwise_quality(n, edges, p, gamma))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Edge list of a random connected simple graph: a random spanning tree
/// plus each remaining pair with probability `p`.
pub fn random_connected(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut present = vec![vec![false; n]; n];
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v));
        present[u][v] = true;
    }
    for u in 0..n {
        for v in (u + 1)..n {
            if !present[u][v] && rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Edge list of a random graph that may be disconnected.
pub fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    edges
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Whether `members` induce a connected subgraph of `g`, by BFS.
pub fn induces_connected(g: &Graph, members: &[usize]) -> bool {
    if members.is_empty() {
        return true;
    }
    let inside: std::collections::HashSet<usize> = members.iter().copied().collect();
    let mut seen = std::collections::HashSet::from([members[0]]);
    let mut queue = VecDeque::from([members[0]]);
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if inside.contains(&v) && seen.insert(v) {
                queue.push_back(v);
            }
        }
    }
    seen.len() == members.len()
}

/// Groups node ids by community id.
pub fn groups(membership: &[usize]) -> Vec<Vec<usize>> {
    let k = membership.iter().max().map_or(0, |&c| c + 1);
    let mut out = vec![Vec::new(); k];
    for (u, &c) in membership.iter().enumerate() {
        out[c].push(u);
    }
    out
}
