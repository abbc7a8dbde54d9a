//! The spreader-selection methods compared in tournaments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::centrality::{betweenness_centrality, closeness_centrality, degree_centrality, CentralityScores, DegreeMode};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId, Traversal};
use crate::voterank::{select_spreaders, KernelVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Method {
    Closeness,
    Degree,
    Betweenness,
    VoteRank,
    VoteRankLred,
    VoteRankXred,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Closeness,
        Method::Degree,
        Method::Betweenness,
        Method::VoteRank,
        Method::VoteRankLred,
        Method::VoteRankXred,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Closeness => "closeness",
            Method::Degree => "degree",
            Method::Betweenness => "betweenness",
            Method::VoteRank => "voterank",
            Method::VoteRankLred => "voterank-lred",
            Method::VoteRankXred => "voterank-xred",
        }
    }

    pub fn kernel_variant(self) -> Option<KernelVariant> {
        match self {
            Method::VoteRank => Some(KernelVariant::Original),
            Method::VoteRankLred => Some(KernelVariant::Lred),
            Method::VoteRankXred => Some(KernelVariant::Xred),
            _ => None,
        }
    }

    /// Centrality scores for the baseline methods; `None` for VoteRank ones.
    ///
    /// Degree is out-degree and closeness follows out-arcs, both measuring
    /// how far a node's influence reaches.
    pub fn scores(self, g: &DirectedGraph) -> Option<CentralityScores> {
        match self {
            Method::Closeness => Some(closeness_centrality(g, Traversal::Out)),
            Method::Degree => Some(degree_centrality(g, DegreeMode::Out)),
            Method::Betweenness => Some(betweenness_centrality(g)),
            _ => None,
        }
    }

    /// The first `count` spreaders this method picks.
    pub fn select(self, g: &DirectedGraph, count: usize) -> Result<Vec<NodeId>> {
        match self.kernel_variant() {
            Some(variant) => select_spreaders(g, variant, count),
            None => Ok(self.scores(g).expect("baseline method").top_k(count)?.0),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownMethod(s.to_owned()))
    }
}

impl TryFrom<String> for Method {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Method> for String {
    fn from(m: Method) -> String {
        m.name().to_owned()
    }
}
