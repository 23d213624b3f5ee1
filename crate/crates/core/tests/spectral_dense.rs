mod common;

use citenet::clustering::{normalized_laplacian_eigenpairs, spectral_cluster, ClusteringConfig};
use citenet::graph::Graph;
use common::*;
use nalgebra::{DMatrix, SymmetricEigen};

fn dense_laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::<f64>::identity(n, n);
    for (u, v, w) in g.edges() {
        let x = w / (g.strength(u) * g.strength(v)).sqrt();
        l[(u, v)] -= x;
        l[(v, u)] -= x;
    }
    l
}

fn dense_spectrum(g: &Graph) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(dense_laplacian(g)).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values
}

#[test]
fn eigenvalues_match_dense_solver() {
    let mut r = rng(11);
    let mut graphs = vec![f7()];
    for n in [12, 30, 45] {
        graphs.push(Graph::with_node_count(n, random_connected(n, 0.15, &mut r)));
    }
    for g in &graphs {
        let dense = dense_spectrum(g);
        for k in [2, 3, 4] {
            let pairs = normalized_laplacian_eigenpairs(g, k, 5).unwrap();
            for (j, &value) in pairs.values.iter().enumerate() {
                assert!((value - dense[j]).abs() < 1e-7, "n={} j={j}: {value} vs {}", g.n(), dense[j]);
            }
            let l = dense_laplacian(g);
            for (value, vector) in pairs.values.iter().zip(&pairs.vectors) {
                let x = nalgebra::DVector::from_column_slice(vector);
                assert!((&l * &x - &x * *value).norm() <= 1e-6);
                assert!((x.norm() - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn f7_split_follows_the_second_eigenvector() {
    let g = f7();
    let eig = SymmetricEigen::new(dense_laplacian(&g));
    let mut order: Vec<usize> = (0..7).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let fiedler = eig.eigenvectors.column(order[1]);
    // Node 3 sits on the symmetry axis and may go either way.
    let side = |u: usize| fiedler[u] > 0.0;
    assert!(side(0) == side(1) && side(1) == side(2));
    assert!(side(4) == side(5) && side(5) == side(6));
    assert_ne!(side(0), side(4));

    let p = spectral_cluster(&g, 2, &ClusteringConfig::default()).unwrap();
    let a = p.assignment();
    assert!(a[0] == a[1] && a[1] == a[2]);
    assert!(a[4] == a[5] && a[5] == a[6]);
    assert_ne!(a[0], a[4]);
}

#[test]
fn ring_of_cliques_is_recovered() {
    // Five 6-cliques joined in a ring by single edges.
    let mut edges = Vec::new();
    for c in 0..5 {
        let base = 6 * c;
        for i in 0..6 {
            for j in (i + 1)..6 {
                edges.push((base + i, base + j));
            }
        }
        edges.push((base + 5, (base + 6) % 30));
    }
    let g = Graph::from_edges(&edges);
    let p = spectral_cluster(&g, 5, &ClusteringConfig::default().with_seed(3)).unwrap();
    assert_eq!(p.k(), 5);
    for c in 0..5 {
        let a = p.assignment();
        assert!((0..6).all(|i| a[6 * c + i] == a[6 * c]));
    }
}
