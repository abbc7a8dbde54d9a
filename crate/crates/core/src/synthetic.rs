//! Seeded synthetic citation-like digraphs for tests and benchmarks.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::seed::rng_for;

/// Growing citation network with preferential attachment.
///
/// Nodes arrive one at a time; each arc points from an existing (older) node
/// to the newcomer, matching the influence direction. The older endpoint is
/// drawn with probability proportional to `out_degree + 1`. Arcs are spread
/// as evenly as possible over the arrivals so the result has exactly `arcs`
/// arcs. Requires `arcs <= n (n - 1) / 2`.
pub fn citation_digraph(n: usize, arcs: usize, seed: u64) -> Result<DirectedGraph> {
    if n < 2 {
        return Err(Error::invalid("need at least two nodes"));
    }
    if arcs > n * (n - 1) / 2 {
        return Err(Error::invalid(format!("{arcs} arcs do not fit a DAG on {n} nodes")));
    }
    let mut rng = rng_for(seed, &[0x5EED]);
    // Arrival t (1..n) can cite at most t older nodes.
    let mut quota = vec![0usize; n];
    let mut left = arcs;
    while left > 0 {
        let before = left;
        for (t, q) in quota.iter_mut().enumerate().skip(1) {
            if left == 0 {
                break;
            }
            if *q < t {
                *q += 1;
                left -= 1;
            }
        }
        debug_assert!(left < before);
    }

    // `urn` holds each node once plus once per arc it emits.
    let mut urn: Vec<usize> = vec![0];
    let mut list = Vec::with_capacity(arcs);
    let mut chosen = Vec::new();
    for (t, &q) in quota.iter().enumerate().skip(1) {
        chosen.clear();
        while chosen.len() < q {
            let u = urn[rng.random_range(0..urn.len())];
            if !chosen.contains(&u) {
                chosen.push(u);
            }
        }
        for &u in &chosen {
            list.push((u, t));
            urn.push(u);
        }
        urn.push(t);
    }
    DirectedGraph::from_arcs(n, list)
}
