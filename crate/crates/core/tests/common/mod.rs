//! Brute-force reference implementations shared by the integration tests.
//!
//! Nothing here goes through the library's adjacency or traversal code: every
//! oracle rebuilds plain adjacency lists from the raw arc list.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spreadrank_core::voterank::KernelVariant;
use spreadrank_core::DirectedGraph;

/// Random digraph arcs on `n` nodes; may contain self-loops and duplicates.
pub fn random_arcs(n: usize, arcs: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..arcs).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect()
}

/// A random digraph whose size and density vary with `seed`.
pub fn random_case(seed: u64, max_n: usize) -> (usize, Vec<(usize, usize)>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
    let n = rng.random_range(2..=max_n);
    let density = [0.5, 1.0, 2.0, 4.0, 8.0][rng.random_range(0..5)];
    let m = ((n as f64) * density) as usize + 1;
    (n, random_arcs(n, m, seed))
}

pub fn graph(n: usize, arcs: &[(usize, usize)]) -> DirectedGraph {
    DirectedGraph::from_arcs(n, arcs.iter().copied()).unwrap()
}

/// Sorted, deduplicated, loop-free out-adjacency.
pub fn adjacency(n: usize, arcs: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); n];
    for &(u, v) in arcs {
        if u != v {
            out[u].push(v);
        }
    }
    for list in &mut out {
        list.sort_unstable();
        list.dedup();
    }
    out
}

pub fn reverse(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut rev = vec![Vec::new(); adj.len()];
    for (u, list) in adj.iter().enumerate() {
        for &v in list {
            rev[v].push(u);
        }
    }
    rev
}

pub fn undirected(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut und = adj.to_vec();
    for (u, list) in adj.iter().enumerate() {
        for &v in list {
            und[v].push(u);
        }
    }
    for list in &mut und {
        list.sort_unstable();
        list.dedup();
    }
    und
}

pub fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    dist
}

/// Number of shortest paths from `s` to every node, by explicit path
/// enumeration over BFS layers.
fn path_counts(adj: &[Vec<usize>], dist: &[Option<usize>], s: usize) -> Vec<f64> {
    let n = adj.len();
    let mut by_layer: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if let Some(d) = dist[v] {
            if by_layer.len() <= d {
                by_layer.resize(d + 1, Vec::new());
            }
            by_layer[d].push(v);
        }
    }
    let mut count = vec![0.0; n];
    count[s] = 1.0;
    for layer in &by_layer {
        for &u in layer {
            for &v in &adj[u] {
                if dist[v] == Some(dist[u].unwrap() + 1) {
                    count[v] += count[u];
                }
            }
        }
    }
    count
}

/// Pair-dependency betweenness over all ordered pairs.
pub fn betweenness_oracle(n: usize, arcs: &[(usize, usize)]) -> Vec<f64> {
    let adj = adjacency(n, arcs);
    let dist: Vec<Vec<Option<usize>>> = (0..n).map(|s| bfs(&adj, s)).collect();
    let sigma: Vec<Vec<f64>> = (0..n).map(|s| path_counts(&adj, &dist[s], s)).collect();
    let mut b = vec![0.0; n];
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let Some(dxy) = dist[x][y] else { continue };
            for v in 0..n {
                if v == x || v == y {
                    continue;
                }
                if let (Some(dxv), Some(dvy)) = (dist[x][v], dist[v][y]) {
                    if dxv + dvy == dxy {
                        b[v] += sigma[x][v] * sigma[v][y] / sigma[x][y];
                    }
                }
            }
        }
    }
    b
}

/// Reachability-corrected closeness from all-pairs BFS.
pub fn closeness_oracle(n: usize, arcs: &[(usize, usize)], undirected_mode: bool) -> Vec<f64> {
    let mut adj = adjacency(n, arcs);
    if undirected_mode {
        adj = undirected(&adj);
    }
    (0..n)
        .map(|s| {
            let dist = bfs(&adj, s);
            let reached: Vec<usize> = dist.iter().enumerate().filter(|(v, _)| *v != s).filter_map(|(_, d)| *d).collect();
            if reached.is_empty() {
                0.0
            } else {
                let r = reached.len() as f64;
                let total: usize = reached.iter().sum();
                (r / (n - 1) as f64) * (r / total as f64)
            }
        })
        .collect()
}

pub fn oracle_delta(variant: KernelVariant, k: f64, d: usize) -> f64 {
    match variant {
        KernelVariant::Original => {
            if d == 1 {
                1.0 / k
            } else {
                0.0
            }
        }
        KernelVariant::Lred => 1.0 / (k * d as f64),
        KernelVariant::Xred => 1.0 / k.powi(d as i32),
    }
}

/// VoteRank from scratch: full rescoring and a full BFS every round.
pub fn voterank_oracle(n: usize, arcs: &[(usize, usize)], variant: KernelVariant, horizon: Option<usize>, count: usize) -> Vec<usize> {
    let adj = adjacency(n, arcs);
    let m: usize = adj.iter().map(Vec::len).sum();
    let k = m as f64 / n as f64;
    let h = match variant {
        KernelVariant::Original => 1,
        _ => horizon.unwrap_or(k.ceil() as usize),
    };
    let mut ability = vec![1.0f64; n];
    let mut elected = vec![false; n];
    let mut order = Vec::new();
    for _ in 0..count {
        let mut best: Option<(usize, f64)> = None;
        for v in 0..n {
            if elected[v] {
                continue;
            }
            let score: f64 = adj[v].iter().map(|&u| ability[u]).sum();
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((v, score));
            }
        }
        let (w, _) = best.unwrap();
        elected[w] = true;
        ability[w] = 0.0;
        order.push(w);
        let dist = bfs(&adj, w);
        for u in 0..n {
            if let Some(d) = dist[u] {
                if d >= 1 && d <= h {
                    ability[u] = (ability[u] - oracle_delta(variant, k, d)).max(0.0);
                }
            }
        }
    }
    order
}

/// Exact expected final spread of the turn-based SIR process, by enumerating
/// every joint outcome of each turn's Bernoulli trials (one infection coin per
/// infected-susceptible arc, one recovery coin per infected node).
///
/// Panics if any turn needs more than `max_events` coins.
pub fn sir_exact_expectation(n: usize, arcs: &[(usize, usize)], seeds: &[usize], mu: f64, beta: f64, max_events: usize) -> f64 {
    let adj = adjacency(n, arcs);
    // 0 = S, 1 = I, 2 = R
    let mut start = vec![0u8; n];
    for &s in seeds {
        start[s] = 1;
    }
    let mut memo = HashMap::new();
    expect(&adj, start, mu, beta, max_events, &mut memo)
}

fn expect(adj: &[Vec<usize>], state: Vec<u8>, mu: f64, beta: f64, max_events: usize, memo: &mut HashMap<Vec<u8>, f64>) -> f64 {
    if let Some(&v) = memo.get(&state) {
        return v;
    }
    let n = state.len();
    let infected: Vec<usize> = (0..n).filter(|&v| state[v] == 1).collect();
    if infected.is_empty() {
        let r = state.iter().filter(|&&s| s == 2).count();
        return r as f64 / n as f64;
    }
    let contacts: Vec<(usize, usize)> = infected
        .iter()
        .flat_map(|&i| adj[i].iter().filter(|&&u| state[u] == 0).map(move |&u| (i, u)))
        .collect();
    let events = contacts.len() + infected.len();
    assert!(events <= max_events, "{events} coins in one turn");

    let mut p_self = 0.0;
    let mut acc = 0.0;
    for mask in 0u32..(1u32 << events) {
        let mut p = 1.0;
        let mut next = state.clone();
        for (j, &(_, u)) in contacts.iter().enumerate() {
            if mask >> j & 1 == 1 {
                p *= mu;
                next[u] = 1;
            } else {
                p *= 1.0 - mu;
            }
        }
        for (j, &i) in infected.iter().enumerate() {
            if mask >> (contacts.len() + j) & 1 == 1 {
                p *= beta;
                next[i] = 2;
            } else {
                p *= 1.0 - beta;
            }
        }
        if p == 0.0 {
            continue;
        }
        if next == state {
            p_self += p;
        } else {
            acc += p * expect(adj, next, mu, beta, max_events, memo);
        }
    }
    let value = acc / (1.0 - p_self);
    memo.insert(state, value);
    value
}
