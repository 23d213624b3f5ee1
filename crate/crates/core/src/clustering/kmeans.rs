use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ClusterError, Partition};

const RESTARTS: usize = 10;
const MAX_ITERATIONS: usize = 100;
const RELATIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansOutcome {
    /// Cluster of each point, numbered by order of first appearance.
    pub assignment: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Sum of squared distances to the assigned centroid.
    pub inertia: f64,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = squared_distance(point, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// k-means++ seeding: each new center is drawn with probability
/// proportional to its squared distance from the nearest chosen center.
fn seed_centers<R: Rng>(points: &[Vec<f64>], k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    chosen[first] = true;
    let mut centers = vec![points[first].clone()];
    let mut dist: Vec<f64> = points
        .iter()
        .map(|p| squared_distance(p, &centers[0]))
        .collect();
    while centers.len() < k {
        let total: f64 = dist.iter().sum();
        let pick = if total > 0.0 {
            let mut draw = rng.gen::<f64>() * total;
            let mut pick = None;
            for (i, &d) in dist.iter().enumerate() {
                if d > 0.0 && draw < d {
                    pick = Some(i);
                    break;
                }
                draw -= d;
            }
            pick.unwrap_or_else(|| dist.iter().rposition(|&d| d > 0.0).unwrap())
        } else {
            // Every point coincides with a center; take any unused one.
            let free: Vec<usize> = (0..n).filter(|&i| !chosen[i]).collect();
            free[rng.gen_range(0..free.len())]
        };
        chosen[pick] = true;
        centers.push(points[pick].clone());
        let c = centers.last().unwrap();
        for (d, p) in dist.iter_mut().zip(points) {
            *d = d.min(squared_distance(p, c));
        }
    }
    centers
}

/// Lloyd iterations from `centroids` until the relative inertia change drops
/// below tolerance. Returns assignment and inertia.
fn lloyd(points: &[Vec<f64>], centroids: &mut [Vec<f64>]) -> (Vec<usize>, f64) {
    let n = points.len();
    let k = centroids.len();
    let dim = points[0].len();
    let mut assignment = vec![0; n];
    let mut previous = f64::INFINITY;
    let mut inertia = 0.0;
    for _ in 0..MAX_ITERATIONS {
        inertia = 0.0;
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, centroids);
            assignment[i] = c;
            inertia += d;
        }
        let stalled = previous.is_finite() && previous - inertia <= RELATIVE_TOLERANCE * previous;
        if inertia == 0.0 || stalled {
            break;
        }
        previous = inertia;

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignment) {
            counts[c] += 1;
            for (s, x) in sums[c].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                for (dst, s) in centroids[c].iter_mut().zip(&sums[c]) {
                    *dst = s / counts[c] as f64;
                }
            } else {
                // Re-seed an empty cluster at the worst-served point.
                let (far, _) = points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (i, squared_distance(p, &centroids[assignment[i]])))
                    .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
                centroids[c] = points[far].clone();
                assignment[far] = c;
            }
        }
    }
    (assignment, inertia)
}

/// Seeded k-means: k-means++ initialization, Lloyd refinement, best of
/// several restarts by inertia. Deterministic for a fixed seed.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansOutcome, ClusterError> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(ClusterError::InvalidClusterCount { k, n });
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(ClusterError::InvalidConfig("points differ in dimension".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<usize>, Vec<Vec<f64>>, f64)> = None;
    for _ in 0..RESTARTS {
        let mut centroids = seed_centers(points, k, &mut rng);
        let (assignment, inertia) = lloyd(points, &mut centroids);
        if best.as_ref().map_or(true, |b| inertia < b.2) {
            best = Some((assignment, centroids, inertia));
        }
        if inertia == 0.0 {
            break;
        }
    }
    let (raw, centroids, inertia) = best.unwrap();
    let assignment = Partition::from_labels(&raw).into_assignment();
    // Reorder centroids to match the renumbered clusters.
    let mut ordered = vec![Vec::new(); k];
    for (&old, &new) in raw.iter().zip(&assignment) {
        if ordered[new].is_empty() {
            ordered[new] = centroids[old].clone();
        }
    }
    ordered.retain(|c| !c.is_empty());
    Ok(KMeansOutcome {
        assignment,
        centroids: ordered,
        inertia,
    })
}
