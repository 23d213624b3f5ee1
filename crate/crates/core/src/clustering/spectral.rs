//! Spectral clustering on the symmetric normalized Laplacian
//! `L = I − D^{-1/2} A D^{-1/2}`.
//!
//! The `k` smallest eigenpairs are found by subspace iteration on
//! `M = 2I − L`, whose largest eigenvalues correspond to the smallest of `L`.
//! The trivial eigenvector `D^{1/2} 1` of a connected graph is known in
//! closed form and deflated from the start. Rows of the resulting `n × k`
//! embedding are normalized to unit length and grouped by k-means.
//!
//! The dense work is `O(n k)` per iteration, but convergence slows sharply
//! as the spectrum crowds on large sparse graphs, so graphs above a size cap
//! are refused up front.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

use super::{kmeans, ClusterError, ClusteringConfig, Partition};

pub const DEFAULT_SPECTRAL_SIZE_CAP: usize = 50_000;

const TOLERANCE: f64 = 1e-8;
const MAX_ITERATIONS: usize = 10_000;
/// Extra guard vectors carried in the subspace to speed convergence.
const OVERSAMPLING: usize = 4;

/// Eigenpairs in ascending eigenvalue order; `vectors[j]` has unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub iterations: usize,
}

/// Clusters a connected graph into `k` groups.
pub fn spectral_cluster(
    g: &Graph,
    k: usize,
    cfg: &ClusteringConfig,
) -> Result<Partition, ClusterError> {
    let n = g.n();
    if n > cfg.spectral_size_cap {
        return Err(ClusterError::SizeCapExceeded {
            n,
            cap: cfg.spectral_size_cap,
        });
    }
    if k < 2 || k > n {
        return Err(ClusterError::InvalidClusterCount { k, n });
    }
    let pairs = normalized_laplacian_eigenpairs(g, k, cfg.seed)?;
    let embedding: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let row: Vec<f64> = pairs.vectors.iter().map(|v| v[i]).collect();
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                row.into_iter().map(|x| x / norm).collect()
            } else {
                row
            }
        })
        .collect();
    let outcome = kmeans(&embedding, k, cfg.seed)?;
    Partition::new(outcome.assignment)
}

/// The `k` smallest eigenpairs of the normalized Laplacian of a connected graph.
pub fn normalized_laplacian_eigenpairs(
    g: &Graph,
    k: usize,
    seed: u64,
) -> Result<EigenPairs, ClusterError> {
    let n = g.n();
    if k == 0 || k > n {
        return Err(ClusterError::InvalidClusterCount { k, n });
    }
    if g.total_weight() <= 0.0 {
        return Err(ClusterError::NoEdges);
    }
    if !g.is_connected() {
        return Err(ClusterError::NotConnected);
    }
    let op = Operator::new(g);
    let mut trivial: Vec<f64> = (0..n).map(|u| g.strength(u).sqrt()).collect();
    normalize(&mut trivial);

    let wanted = k - 1;
    let mut values = vec![0.0];
    let mut vectors = vec![trivial.clone()];
    if wanted == 0 {
        return Ok(EigenPairs {
            values,
            vectors,
            iterations: 0,
        });
    }
    let block = (wanted + OVERSAMPLING).min(n - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut basis: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.gen::<f64>() - 0.5).collect())
        .collect();
    orthonormalize(&mut basis, &trivial, &mut rng);

    let mut residual = f64::INFINITY;
    for iteration in 1..=MAX_ITERATIONS {
        let mut next: Vec<Vec<f64>> = basis.iter().map(|x| op.apply(x)).collect();
        orthonormalize(&mut next, &trivial, &mut rng);
        let images: Vec<Vec<f64>> = next.iter().map(|x| op.apply(x)).collect();

        // Rayleigh-Ritz on the current subspace.
        let mut h = vec![vec![0.0; block]; block];
        for i in 0..block {
            for j in i..block {
                let v = dot(&next[i], &images[j]);
                h[i][j] = v;
                h[j][i] = v;
            }
        }
        let (mu, rot) = jacobi_eigen(h);
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&a, &b| mu[b].total_cmp(&mu[a]));
        basis = order.iter().map(|&c| combine(&next, &rot, c)).collect();
        let rotated_images: Vec<Vec<f64>> =
            order.iter().map(|&c| combine(&images, &rot, c)).collect();

        residual = (0..wanted)
            .map(|j| {
                let m = mu[order[j]];
                rotated_images[j]
                    .iter()
                    .zip(&basis[j])
                    .map(|(y, x)| (y - m * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if residual <= TOLERANCE {
            for j in 0..wanted {
                values.push(2.0 - mu[order[j]]);
                vectors.push(basis[j].clone());
            }
            return Ok(EigenPairs {
                values,
                vectors,
                iterations: iteration,
            });
        }
    }
    Err(ClusterError::NotConverged {
        iterations: MAX_ITERATIONS,
        residual,
    })
}

/// `x ↦ (2I − L) x = x + D^{-1/2} A D^{-1/2} x`.
struct Operator<'g> {
    g: &'g Graph,
    inv_sqrt_degree: Vec<f64>,
}

impl<'g> Operator<'g> {
    fn new(g: &'g Graph) -> Self {
        Operator {
            g,
            inv_sqrt_degree: (0..g.n()).map(|u| 1.0 / g.strength(u).sqrt()).collect(),
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let s = &self.inv_sqrt_degree;
        (0..self.g.n())
            .map(|u| {
                let mut acc = 2.0 * self.g.self_weight(u) * s[u] * x[u];
                for (v, w) in self.g.weighted_neighbors(u) {
                    acc += w * s[v] * x[v];
                }
                x[u] + s[u] * acc
            })
            .collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = dot(x, x).sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

fn project_out(x: &mut [f64], basis: &[f64]) {
    let c = dot(x, basis);
    x.iter_mut().zip(basis).for_each(|(v, b)| *v -= c * b);
}

/// Modified Gram-Schmidt (applied twice) against `fixed` and earlier columns.
/// Collapsed columns are replaced by fresh random directions.
fn orthonormalize<R: Rng>(cols: &mut [Vec<f64>], fixed: &[f64], rng: &mut R) {
    for j in 0..cols.len() {
        let mut attempts = 0;
        loop {
            let original = dot(&cols[j], &cols[j]).sqrt();
            for _ in 0..2 {
                project_out(&mut cols[j], fixed);
                for i in 0..j {
                    let (done, rest) = cols.split_at_mut(j);
                    project_out(&mut rest[0], &done[i]);
                }
            }
            let norm = normalize(&mut cols[j]);
            if norm > 1e-10 * original.max(1e-300) && norm > 0.0 {
                break;
            }
            attempts += 1;
            assert!(attempts < 100, "cannot extend orthonormal basis");
            for v in cols[j].iter_mut() {
                *v = rng.gen::<f64>() - 0.5;
            }
        }
    }
}

/// Column `c` of `rot` applied to the vectors in `cols`.
fn combine(cols: &[Vec<f64>], rot: &[Vec<f64>], c: usize) -> Vec<f64> {
    let n = cols[0].len();
    let mut out = vec![0.0; n];
    for (i, col) in cols.iter().enumerate() {
        let r = rot[i][c];
        out.iter_mut().zip(col).for_each(|(o, x)| *o += r * x);
    }
    out
}

/// Cyclic Jacobi eigendecomposition of a small symmetric matrix.
/// Returns eigenvalues and the eigenvector matrix (eigenvectors in columns).
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>() + off;
        if off <= 1e-30 * scale.max(1e-300) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let akp = row[p];
                    let akq = row[q];
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (head, tail) = a.split_at_mut(q);
                for (apk, aqk) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    let (x, y) = (*apk, *aqk);
                    *apk = c * x - s * y;
                    *aqk = s * x + c * y;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}
