//! VoteRank spreader election with pluggable voting-ability reduction.
//!
//! Every node starts with voting ability 1. A node's voting score is the sum
//! of the voting abilities of its out-neighbors. Each round elects the
//! highest-scoring unelected node (ties to the smaller id), zeroes its ability
//! and score, and lowers the ability of every node within the kernel horizon
//! by `delta(d)`, where `d` is the out-distance from the new spreader.
//!
//! Three kernels are provided, all with `delta(1) = 1/<k>`:
//!
//! | variant    | `delta(d)`      | horizon        |
//! |------------|-----------------|----------------|
//! | `Original` | `1/<k>` at d=1  | 1              |
//! | `Lred`     | `1/(<k> d)`     | `ceil(<k>)`    |
//! | `Xred`     | `1/<k>^d`       | `ceil(<k>)`    |
//!
//! For undirected analysis, run on [`DirectedGraph::symmetrized`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelVariant {
    Original,
    Lred,
    Xred,
}

/// Suppression amount by distance, and how far it reaches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionKernel {
    variant: KernelVariant,
    avg_degree: f64,
    horizon: usize,
}

impl ReductionKernel {
    /// Kernel for a given average (out-)degree `<k>`.
    pub fn new(variant: KernelVariant, avg_degree: f64) -> Result<Self> {
        if !(avg_degree.is_finite() && avg_degree > 0.0) {
            return Err(Error::invalid(format!("average degree must be positive, got {avg_degree}")));
        }
        let horizon = match variant {
            KernelVariant::Original => 1,
            KernelVariant::Lred | KernelVariant::Xred => (avg_degree.ceil() as usize).max(1),
        };
        Ok(ReductionKernel {
            variant,
            avg_degree,
            horizon,
        })
    }

    /// Kernel for `g`, with `<k> = m / n` (the average out-degree).
    pub fn for_graph(variant: KernelVariant, g: &DirectedGraph) -> Result<Self> {
        if g.arc_count() == 0 {
            return Err(Error::invalid("voting ability reduction needs at least one arc"));
        }
        Self::new(variant, g.arc_count() as f64 / g.node_count() as f64)
    }

    /// Replaces the horizon. The original kernel ignores anything past d=1.
    pub fn with_horizon(mut self, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::invalid("horizon must be at least 1"));
        }
        self.horizon = horizon;
        Ok(self)
    }

    pub fn variant(&self) -> KernelVariant {
        self.variant
    }

    pub fn avg_degree(&self) -> f64 {
        self.avg_degree
    }

    /// Base suppression `1/<k>`.
    pub fn base(&self) -> f64 {
        1.0 / self.avg_degree
    }

    pub fn horizon(&self) -> usize {
        match self.variant {
            KernelVariant::Original => 1,
            _ => self.horizon,
        }
    }

    /// Suppression at distance `d`; zero outside `1..=horizon`.
    pub fn delta(&self, d: usize) -> f64 {
        if d == 0 || d > self.horizon() {
            return 0.0;
        }
        self.delta_unbounded(d)
    }

    /// Kernel formula without the horizon cut-off.
    pub fn delta_unbounded(&self, d: usize) -> f64 {
        let k = self.avg_degree;
        match self.variant {
            KernelVariant::Original if d == 1 => 1.0 / k,
            KernelVariant::Original => 0.0,
            KernelVariant::Lred => 1.0 / (k * d as f64),
            KernelVariant::Xred => 1.0 / k.powi(d as i32),
        }
    }
}

/// Voting abilities, voting scores and the spreaders elected so far.
#[derive(Debug, Clone, PartialEq)]
pub struct VoteState {
    pub ability: Vec<f64>,
    pub score: Vec<f64>,
    pub elected: Vec<NodeId>,
    is_elected: Vec<bool>,
}

impl VoteState {
    pub fn new(g: &DirectedGraph) -> Self {
        let n = g.node_count();
        let mut state = VoteState {
            ability: vec![1.0; n],
            score: vec![0.0; n],
            elected: Vec::new(),
            is_elected: vec![false; n],
        };
        for v in g.nodes() {
            state.score[v.index()] = voting_score(g, &state, v);
        }
        state
    }

    pub fn is_elected(&self, v: NodeId) -> bool {
        self.is_elected[v.index()]
    }
}

/// Sum of the voting abilities of `v`'s out-neighbors.
pub fn voting_score(g: &DirectedGraph, state: &VoteState, v: NodeId) -> f64 {
    // Folding from +0.0 keeps empty sums out of -0.0, which the heap's total
    // order would rank below +0.0.
    g.out_neighbors(v).iter().fold(0.0, |acc, u| acc + state.ability[u.index()])
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    score: f64,
    node: NodeId,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // Max-heap order: higher score first, then smaller id.
    fn cmp(&self, other: &Self) -> Ordering {
        self.score.total_cmp(&other.score).then_with(|| other.node.cmp(&self.node))
    }
}

/// An elected spreader and the score it won with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Election {
    pub node: NodeId,
    pub score: f64,
}

/// Incremental election engine.
///
/// After each election only the in-neighbors of nodes whose ability changed
/// are rescored, and each rescoring sums the out-neighborhood afresh in
/// adjacency order. Stale heap entries are skipped on pop.
pub struct VoteRank<'g> {
    graph: &'g DirectedGraph,
    kernel: ReductionKernel,
    state: VoteState,
    heap: BinaryHeap<Candidate>,
    // BFS scratch: visit stamps, current and next frontier.
    stamp: Vec<u32>,
    epoch: u32,
    frontier: Vec<NodeId>,
    next: Vec<NodeId>,
    changed: Vec<NodeId>,
    dirty: Vec<NodeId>,
}

impl<'g> VoteRank<'g> {
    pub fn new(graph: &'g DirectedGraph, kernel: ReductionKernel) -> Self {
        let state = VoteState::new(graph);
        let heap = graph
            .nodes()
            .map(|node| Candidate {
                score: state.score[node.index()],
                node,
            })
            .collect();
        VoteRank {
            graph,
            kernel,
            state,
            heap,
            stamp: vec![0; graph.node_count()],
            epoch: 0,
            frontier: Vec::new(),
            next: Vec::new(),
            changed: Vec::new(),
            dirty: Vec::new(),
        }
    }

    pub fn state(&self) -> &VoteState {
        &self.state
    }

    pub fn kernel(&self) -> &ReductionKernel {
        &self.kernel
    }

    fn pop_best(&mut self) -> Option<Candidate> {
        while let Some(c) = self.heap.pop() {
            let i = c.node.index();
            if !self.state.is_elected[i] && c.score.to_bits() == self.state.score[i].to_bits() {
                return Some(c);
            }
        }
        None
    }

    /// Elects the next spreader and applies the voting-ability reduction.
    pub fn elect(&mut self) -> Result<Election> {
        let best = self.pop_best().ok_or_else(|| Error::invalid("every node is already elected"))?;
        let winner = best.node;
        let state = &mut self.state;
        state.is_elected[winner.index()] = true;
        state.elected.push(winner);
        state.score[winner.index()] = 0.0;

        self.changed.clear();
        if state.ability[winner.index()] != 0.0 {
            state.ability[winner.index()] = 0.0;
            self.changed.push(winner);
        }

        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        self.stamp[winner.index()] = self.epoch;
        self.frontier.clear();
        self.frontier.push(winner);
        for d in 1..=self.kernel.horizon() {
            self.next.clear();
            for &u in &self.frontier {
                for &w in self.graph.out_neighbors(u) {
                    if self.stamp[w.index()] != self.epoch {
                        self.stamp[w.index()] = self.epoch;
                        self.next.push(w);
                    }
                }
            }
            if self.next.is_empty() {
                break;
            }
            let delta = self.kernel.delta(d);
            for &w in &self.next {
                let va = &mut state.ability[w.index()];
                let reduced = (*va - delta).max(0.0);
                if reduced != *va {
                    *va = reduced;
                    self.changed.push(w);
                }
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
        }

        // Rescore the voters of every node whose ability moved.
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        self.dirty.clear();
        for &u in &self.changed {
            for &x in self.graph.in_neighbors(u) {
                if self.stamp[x.index()] != self.epoch && !state.is_elected[x.index()] {
                    self.stamp[x.index()] = self.epoch;
                    self.dirty.push(x);
                }
            }
        }
        for &x in &self.dirty {
            let score = voting_score(self.graph, state, x);
            state.score[x.index()] = score;
            self.heap.push(Candidate { score, node: x });
        }

        Ok(Election {
            node: winner,
            score: best.score,
        })
    }
}

/// Runs `count` elections from a fresh state.
pub fn elect_spreaders(g: &DirectedGraph, kernel: ReductionKernel, count: usize) -> Result<Vec<Election>> {
    let n = g.node_count();
    if count == 0 || count > n {
        return Err(Error::invalid(format!("spreader count must be in 1..={n}, got {count}")));
    }
    let mut engine = VoteRank::new(g, kernel);
    (0..count).map(|_| engine.elect()).collect()
}

/// Ordered spreader list for `variant` with the kernel derived from `g`.
pub fn select_spreaders(g: &DirectedGraph, variant: KernelVariant, count: usize) -> Result<Vec<NodeId>> {
    let kernel = ReductionKernel::for_graph(variant, g)?;
    Ok(elect_spreaders(g, kernel, count)?.into_iter().map(|e| e.node).collect())
}

/// `max(1, round(p * n))` with halves rounded up.
pub fn spreader_count_from_fraction(n: usize, p: f64) -> Result<usize> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!("fraction must be in (0, 1], got {p}")));
    }
    let count = (p * n as f64 + 0.5).floor() as usize;
    Ok(count.clamp(1, n.max(1)))
}
