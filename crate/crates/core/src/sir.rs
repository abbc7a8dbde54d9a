//! Discrete-turn SIR spreading.
//!
//! Each turn, every node that was infected when the turn started tries to
//! infect each susceptible out-neighbor with probability `mu`, then recovers
//! with probability `beta`. Nodes infected during a turn act from the next
//! turn on. `R(t)` is the recovered fraction after turn `t`; the run ends when
//! nobody is infected or `max_turns` is hit.

use rand::distr::{Bernoulli, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::seed::{derive_seed, SimRng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirParams {
    /// Per-contact infection probability.
    pub mu: f64,
    /// Per-turn recovery probability.
    pub beta: f64,
    /// Turn cap; `None` means `10 n`.
    pub max_turns: Option<usize>,
    pub seed: u64,
}

impl SirParams {
    pub fn new(mu: f64, beta: f64, seed: u64) -> Result<Self> {
        let p = SirParams {
            mu,
            beta,
            max_turns: None,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(Error::invalid(format!("mu must be in [0, 1], got {}", self.mu)));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return Err(Error::invalid(format!("beta must be in (0, 1], got {}", self.beta)));
        }
        if self.max_turns == Some(0) {
            return Err(Error::invalid("max_turns must be positive"));
        }
        Ok(())
    }

    /// Spreading ratio `mu / beta`.
    pub fn lambda(&self) -> f64 {
        self.mu / self.beta
    }

    fn turn_cap(&self, n: usize) -> usize {
        self.max_turns.unwrap_or(10 * n).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Health {
    Susceptible,
    Infected,
    Recovered,
}

/// Result of one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SirOutcome {
    /// `R(t)` after each turn `t = 1..=turns`.
    pub trajectory: Vec<f64>,
    pub final_spread: f64,
    /// Number of recovered nodes at the end.
    pub recovered: usize,
    pub turns: usize,
    /// The turn cap was reached with infected nodes left.
    pub truncated: bool,
}

/// A single simulation that can be advanced turn by turn.
pub struct SirRun<'g, 'r> {
    graph: &'g DirectedGraph,
    rng: &'r mut SimRng,
    infect: Bernoulli,
    recover: Bernoulli,
    health: Vec<Health>,
    infected: Vec<NodeId>,
    fresh: Vec<NodeId>,
    recovered: usize,
    turns: usize,
    trajectory: Vec<f64>,
}

impl<'g, 'r> SirRun<'g, 'r> {
    /// Seeds the spreaders as infected. Duplicates are ignored.
    pub fn new(graph: &'g DirectedGraph, spreaders: &[NodeId], params: &SirParams, rng: &'r mut SimRng) -> Result<Self> {
        params.validate()?;
        if spreaders.is_empty() {
            return Err(Error::invalid("spreader set is empty"));
        }
        let n = graph.node_count();
        if let Some(bad) = spreaders.iter().find(|v| v.index() >= n) {
            return Err(Error::invalid(format!("spreader {bad} is not a node")));
        }
        let mut infected = spreaders.to_vec();
        infected.sort_unstable();
        infected.dedup();
        let mut health = vec![Health::Susceptible; n];
        for v in &infected {
            health[v.index()] = Health::Infected;
        }
        Ok(SirRun {
            graph,
            rng,
            infect: Bernoulli::new(params.mu).expect("validated"),
            recover: Bernoulli::new(params.beta).expect("validated"),
            health,
            infected,
            fresh: Vec::new(),
            recovered: 0,
            turns: 0,
            trajectory: Vec::new(),
        })
    }

    pub fn health(&self) -> &[Health] {
        &self.health
    }

    pub fn is_active(&self) -> bool {
        !self.infected.is_empty()
    }

    pub fn turns(&self) -> usize {
        self.turns
    }

    /// Plays one turn. Returns `false` without doing anything once no node is
    /// infected.
    pub fn step(&mut self) -> bool {
        if self.infected.is_empty() {
            return false;
        }
        self.fresh.clear();
        for &i in &self.infected {
            for &u in self.graph.out_neighbors(i) {
                if self.health[u.index()] == Health::Susceptible && self.infect.sample(self.rng) {
                    self.health[u.index()] = Health::Infected;
                    self.fresh.push(u);
                }
            }
        }
        let mut kept = 0;
        for idx in 0..self.infected.len() {
            let i = self.infected[idx];
            if self.recover.sample(self.rng) {
                self.health[i.index()] = Health::Recovered;
                self.recovered += 1;
            } else {
                self.infected[kept] = i;
                kept += 1;
            }
        }
        self.infected.truncate(kept);
        self.infected.extend_from_slice(&self.fresh);
        self.turns += 1;
        self.trajectory.push(self.recovered as f64 / self.graph.node_count() as f64);
        true
    }

    pub fn finish(self) -> SirOutcome {
        let final_spread = self.recovered as f64 / self.graph.node_count() as f64;
        SirOutcome {
            truncated: !self.infected.is_empty(),
            trajectory: self.trajectory,
            final_spread,
            recovered: self.recovered,
            turns: self.turns,
        }
    }
}

/// Runs one simulation to completion with the given generator.
pub fn simulate(g: &DirectedGraph, spreaders: &[NodeId], params: &SirParams, rng: &mut SimRng) -> Result<SirOutcome> {
    let cap = params.turn_cap(g.node_count());
    let mut run = SirRun::new(g, spreaders, params, rng)?;
    while run.turns() < cap && run.step() {}
    Ok(run.finish())
}

/// Runs one simulation seeded from `params.seed`.
pub fn run_sir(g: &DirectedGraph, spreaders: &[NodeId], params: &SirParams) -> Result<SirOutcome> {
    let mut rng = crate::seed::rng_for(params.seed, &[]);
    simulate(g, spreaders, params, &mut rng)
}

/// Aggregate over independent runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SirSummary {
    pub runs: usize,
    pub mean_final_spread: f64,
    /// Population standard deviation.
    pub stddev_final_spread: f64,
    /// Mean `R(t)` by turn; shorter runs are padded with their final value.
    pub mean_trajectory: Vec<f64>,
    pub mean_turns: f64,
    pub truncated_runs: usize,
}

impl SirSummary {
    /// Reduces outcomes of runs on an `n`-node graph. Spread moments are
    /// taken over integer recovered counts, so they are exact up to the final
    /// division and independent of outcome order.
    pub fn from_outcomes(n: usize, outcomes: &[SirOutcome]) -> Self {
        let runs = outcomes.len();
        assert!(runs > 0, "summary needs at least one outcome");
        let k = runs as f64;
        let sum: u128 = outcomes.iter().map(|o| o.recovered as u128).sum();
        let sum_sq: u128 = outcomes.iter().map(|o| (o.recovered as u128).pow(2)).sum();
        let denom = runs as u128;
        // k^2 var(r) = k sum_sq - sum^2, exact in integers.
        let var_num = denom * sum_sq - sum * sum;
        let n = n as f64;
        let mean = sum as f64 / (k * n);
        let stddev = (var_num as f64).sqrt() / (k * n);
        let len = outcomes.iter().map(|o| o.trajectory.len()).max().unwrap_or(0);
        // Per-turn recovered counts, summed as integers.
        let mut totals = vec![0u64; len];
        for o in outcomes {
            let last = o.trajectory.last().copied().unwrap_or(o.final_spread);
            for (t, slot) in totals.iter_mut().enumerate() {
                *slot += (o.trajectory.get(t).copied().unwrap_or(last) * n).round() as u64;
            }
        }
        let mean_trajectory = totals.into_iter().map(|c| c as f64 / (k * n)).collect();
        SirSummary {
            runs,
            mean_final_spread: mean,
            stddev_final_spread: stddev,
            mean_trajectory,
            mean_turns: outcomes.iter().map(|o| o.turns as f64).sum::<f64>() / k,
            truncated_runs: outcomes.iter().filter(|o| o.truncated).count(),
        }
    }
}

/// `runs` independent simulations; run `i` is seeded from
/// `(params.seed, coords..., i)`. Runs execute in parallel and are reduced in
/// index order, so the summary does not depend on the thread count.
pub fn run_many_at(g: &DirectedGraph, spreaders: &[NodeId], params: &SirParams, runs: usize, coords: &[u64]) -> Result<SirSummary> {
    if runs == 0 {
        return Err(Error::invalid("runs must be at least 1"));
    }
    params.validate()?;
    let outcomes: Vec<SirOutcome> = (0..runs)
        .into_par_iter()
        .map(|i| {
            let mut key = coords.to_vec();
            key.push(i as u64);
            let mut rng = <SimRng as rand::SeedableRng>::seed_from_u64(derive_seed(params.seed, &key));
            simulate(g, spreaders, params, &mut rng)
        })
        .collect::<Result<_>>()?;
    Ok(SirSummary::from_outcomes(g.node_count(), &outcomes))
}

pub fn run_many(g: &DirectedGraph, spreaders: &[NodeId], params: &SirParams, runs: usize) -> Result<SirSummary> {
    run_many_at(g, spreaders, params, runs, &[])
}
