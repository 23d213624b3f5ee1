//! Community detection and evaluation for citation networks.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`graph`] parses edge lists and cleans them (largest component, degree pruning).
//! 2. [`analysis`] reports degree statistics, hubs and neighborhood sizes.
//! 3. [`clustering`] partitions the graph with Louvain, Leiden or spectral clustering.
//! 4. [`evaluation`] scores a partition against the graph and optional ground-truth labels.
//!
//! ```
//! use citenet::clustering::{leiden, quality, ClusteringConfig, Resolution};
//! use citenet::graph::Graph;
//!
//! // Two triangles joined through node 3.
//! let g = Graph::from_edges(&[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 5), (4, 6), (5, 6)]);
//! let p = leiden(&g, &ClusteringConfig::default().with_seed(42)).unwrap();
//! assert_eq!(p.k(), 2);
//! assert_eq!(quality(&g, &p, Resolution::STANDARD).unwrap(), 0.3671875);
//! ```

pub mod analysis;
pub mod clustering;
pub mod evaluation;
pub mod generate;
pub mod graph;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/modularity.md")]
    mod modularity {}
    #[doc = include_str!("../../../book/src/optimizers.md")]
    mod optimizers {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
    #[doc = include_str!("../../../book/src/planted.md")]
    mod planted {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
