//! Shared fixtures for the benchmarks.

use spreadrank_core::synthetic::citation_digraph;
use spreadrank_core::DirectedGraph;

/// Citation-like digraph with 653 nodes and 1416 arcs.
pub fn citation_653() -> DirectedGraph {
    citation_digraph(653, 1416, 2024).expect("valid size")
}

/// A larger graph with the same average degree.
pub fn citation_scaled(n: usize) -> DirectedGraph {
    let arcs = (n as f64 * 1416.0 / 653.0).round() as usize;
    citation_digraph(n, arcs, 2024).expect("valid size")
}
