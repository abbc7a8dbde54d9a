//! Influence analysis on directed graphs.
//!
//! The crate identifies influential spreader nodes with VoteRank and its two
//! distance-decay variants (linear and exponential voting-ability reduction),
//! ranks nodes with classic centralities, and scores spreader sets with a
//! synchronous SIR Monte Carlo engine. The [`experiment`] module runs whole
//! tournaments over spreader fractions and `(mu, beta)` grids.

pub mod centrality;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod method;
pub mod seed;
pub mod sir;
pub mod synthetic;
pub mod voterank;

pub use centrality::{CentralityScores, DegreeMode, Ranking};
pub use error::{Error, Result};
pub use experiment::{ExperimentPlan, PlanResults, VictoryTable};
pub use graph::{DirectedGraph, LoadOptions, LoadReport, NodeId, Orientation, TopologyStats, Traversal};
pub use method::Method;
pub use sir::{SirOutcome, SirParams, SirSummary};
pub use voterank::{KernelVariant, ReductionKernel, VoteState};
