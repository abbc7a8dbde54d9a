//! Degree, closeness and betweenness centrality plus top-k selection.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId, Traversal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DegreeMode {
    Total,
    In,
    #[default]
    Out,
}

/// One score per node, indexed by [`NodeId`].
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub measure: &'static str,
    pub scores: Vec<f64>,
}

impl CentralityScores {
    pub fn get(&self, v: NodeId) -> f64 {
        self.scores[v.index()]
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Highest `k` nodes by score; ties go to the smaller id.
    pub fn top_k(&self, k: usize) -> Result<Ranking> {
        let n = self.scores.len();
        if k == 0 || k > n {
            return Err(Error::invalid(format!("top_k needs 1 <= k <= {n}, got {k}")));
        }
        let mut order: Vec<NodeId> = (0..n).map(NodeId::new).collect();
        order.sort_by(|&a, &b| self.scores[b.index()].total_cmp(&self.scores[a.index()]).then(a.cmp(&b)));
        order.truncate(k);
        Ok(Ranking(order))
    }
}

/// Nodes in descending score order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking(pub Vec<NodeId>);

impl Ranking {
    pub fn nodes(&self) -> &[NodeId] {
        &self.0
    }
}

pub fn degree_centrality(g: &DirectedGraph, mode: DegreeMode) -> CentralityScores {
    let scores = g
        .nodes()
        .map(|v| match mode {
            DegreeMode::Total => g.in_degree(v) + g.out_degree(v),
            DegreeMode::In => g.in_degree(v),
            DegreeMode::Out => g.out_degree(v),
        } as f64)
        .collect();
    let measure = match mode {
        DegreeMode::Total => "degree",
        DegreeMode::In => "in_degree",
        DegreeMode::Out => "out_degree",
    };
    CentralityScores { measure, scores }
}

/// Reachability-corrected closeness.
///
/// A node reaching `r` others with total distance `s` scores
/// `(r / (n - 1)) * (r / s)`, and 0 when it reaches nobody.
pub fn closeness_centrality(g: &DirectedGraph, dir: Traversal) -> CentralityScores {
    let n = g.node_count();
    let scores = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![usize::MAX; n], VecDeque::new()),
            |(dist, queue), s| {
                dist.fill(usize::MAX);
                dist[s] = 0;
                queue.push_back(NodeId::new(s));
                let (mut reached, mut total) = (0usize, 0usize);
                while let Some(u) = queue.pop_front() {
                    let d = dist[u.index()];
                    for w in g.neighbors(u, dir) {
                        if dist[w.index()] == usize::MAX {
                            dist[w.index()] = d + 1;
                            reached += 1;
                            total += d + 1;
                            queue.push_back(w);
                        }
                    }
                }
                if reached == 0 {
                    0.0
                } else {
                    let r = reached as f64;
                    (r / (n - 1) as f64) * (r / total as f64)
                }
            },
        )
        .collect();
    CentralityScores {
        measure: "closeness",
        scores,
    }
}

const SOURCE_CHUNK: usize = 32;

/// Unnormalized directed betweenness (Brandes accumulation).
///
/// Sources are processed in fixed-size chunks whose partial sums are added in
/// chunk order, so the result does not depend on the thread count.
pub fn betweenness_centrality(g: &DirectedGraph) -> CentralityScores {
    let n = g.node_count();
    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut work = BrandesWork::new(n);
            for &s in chunk {
                work.accumulate(g, NodeId::new(s), &mut acc);
            }
            acc
        })
        .collect();
    let mut scores = vec![0.0; n];
    for part in partials {
        for (t, p) in scores.iter_mut().zip(part) {
            *t += p;
        }
    }
    CentralityScores {
        measure: "betweenness",
        scores,
    }
}

struct BrandesWork {
    dist: Vec<i64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    order: Vec<NodeId>,
    queue: VecDeque<NodeId>,
}

impl BrandesWork {
    fn new(n: usize) -> Self {
        BrandesWork {
            dist: vec![-1; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::new(),
        }
    }

    fn accumulate(&mut self, g: &DirectedGraph, s: NodeId, acc: &mut [f64]) {
        self.dist.fill(-1);
        self.sigma.fill(0.0);
        self.delta.fill(0.0);
        self.order.clear();

        self.dist[s.index()] = 0;
        self.sigma[s.index()] = 1.0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let dv = self.dist[v.index()];
            for &w in g.out_neighbors(v) {
                if self.dist[w.index()] < 0 {
                    self.dist[w.index()] = dv + 1;
                    self.queue.push_back(w);
                }
                if self.dist[w.index()] == dv + 1 {
                    self.sigma[w.index()] += self.sigma[v.index()];
                }
            }
        }
        // Predecessors of w are its in-neighbors one layer closer to s.
        for &w in self.order.iter().rev() {
            let dw = self.dist[w.index()];
            let coeff = (1.0 + self.delta[w.index()]) / self.sigma[w.index()];
            for &v in g.in_neighbors(w) {
                if self.dist[v.index()] == dw - 1 {
                    self.delta[v.index()] += self.sigma[v.index()] * coeff;
                }
            }
            if w != s {
                acc[w.index()] += self.delta[w.index()];
            }
        }
    }
}
