//! Directed graph storage, edge-list ingestion, traversal and topology statistics.
//!
//! An arc `u -> v` means `u` influences `v` (knowledge flows from the cited,
//! older node to the citing, newer one). Adjacency is kept in compressed form
//! with every neighbor list sorted by ascending [`NodeId`], so iteration order
//! is a pure function of the arc set.

use std::collections::{HashMap, VecDeque};
use std::io::BufRead;

use serde::Serialize;

use crate::error::{Error, Result};

/// Dense node index in `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeId(u32);

impl NodeId {
    #[inline]
    pub fn new(index: usize) -> Self {
        NodeId(u32::try_from(index).expect("node index exceeds u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Whether arcs are read as directed influence links or as undirected edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Directed,
    Undirected,
}

/// Which arcs a traversal follows from the current node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Traversal {
    Out,
    In,
    Undirected,
}

impl From<Orientation> for Traversal {
    fn from(o: Orientation) -> Self {
        match o {
            Orientation::Directed => Traversal::Out,
            Orientation::Undirected => Traversal::Undirected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Delimiter {
    /// Any run of whitespace and/or commas.
    Auto,
    Char(char),
}

/// Edge-list parsing options.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    delimiter: Delimiter,
    comment_prefix: String,
    reverse_arcs: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            delimiter: Delimiter::Auto,
            comment_prefix: "#".to_owned(),
            reverse_arcs: false,
        }
    }
}

impl LoadOptions {
    /// Split tokens on a single character instead of whitespace/commas.
    pub fn delimiter(mut self, c: char) -> Self {
        self.delimiter = Delimiter::Char(c);
        self
    }

    pub fn comment_prefix(mut self, prefix: impl Into<String>) -> Self {
        self.comment_prefix = prefix.into();
        self
    }

    /// Read each line as `citing cited` and store the arc as `cited -> citing`.
    pub fn reverse_arcs(mut self, yes: bool) -> Self {
        self.reverse_arcs = yes;
        self
    }
}

/// What ingestion skipped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines: usize,
    pub skipped_lines: usize,
    pub self_loops: usize,
    pub duplicate_arcs: usize,
}

impl LoadReport {
    pub fn dropped_arcs(&self) -> usize {
        self.self_loops + self.duplicate_arcs
    }
}

/// Immutable simple digraph in compressed sparse row form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    labels: Vec<String>,
    out_offsets: Vec<usize>,
    out_targets: Vec<NodeId>,
    in_offsets: Vec<usize>,
    in_sources: Vec<NodeId>,
}

fn compress(n: usize, arcs: &[(usize, usize)], key: impl Fn(&(usize, usize)) -> (usize, usize)) -> (Vec<usize>, Vec<NodeId>) {
    let mut pairs: Vec<(usize, usize)> = arcs.iter().map(key).collect();
    pairs.sort_unstable();
    let mut offsets = vec![0usize; n + 1];
    for &(from, _) in &pairs {
        offsets[from + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let targets = pairs.into_iter().map(|(_, to)| NodeId::new(to)).collect();
    (offsets, targets)
}

impl DirectedGraph {
    /// Builds a graph from labels and arcs. Self-loops and duplicate arcs are
    /// dropped and counted in the returned report.
    pub fn from_labeled_arcs(labels: Vec<String>, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<(Self, LoadReport)> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut report = LoadReport::default();
        let mut clean = Vec::new();
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("arc ({u}, {v}) out of range for {n} nodes")));
            }
            if u == v {
                report.self_loops += 1;
            } else {
                clean.push((u, v));
            }
        }
        clean.sort_unstable();
        let before = clean.len();
        clean.dedup();
        report.duplicate_arcs = before - clean.len();

        let (out_offsets, out_targets) = compress(n, &clean, |&(u, v)| (u, v));
        let (in_offsets, in_sources) = compress(n, &clean, |&(u, v)| (v, u));
        let g = DirectedGraph {
            labels,
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
        };
        Ok((g, report))
    }

    /// Graph on nodes `0..n` labelled by their index.
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_labeled_arcs(labels, arcs).map(|(g, _)| g)
    }

    /// Parses an edge list: one `source target` pair per line.
    ///
    /// Node ids are assigned in first-seen order. Blank lines and lines
    /// starting with the comment prefix are skipped; any other line must hold
    /// exactly two tokens.
    pub fn load_edge_list<R: BufRead>(reader: R, options: &LoadOptions) -> Result<(Self, LoadReport)> {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut labels: Vec<String> = Vec::new();
        let mut arcs = Vec::new();
        let mut lines = 0usize;
        let mut skipped = 0usize;

        let mut intern = |label: &str| -> usize {
            if let Some(&id) = ids.get(label) {
                return id;
            }
            let id = labels.len();
            labels.push(label.to_owned());
            ids.insert(label.to_owned(), id);
            id
        };

        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            lines += 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || (!options.comment_prefix.is_empty() && trimmed.starts_with(&options.comment_prefix)) {
                skipped += 1;
                continue;
            }
            let tokens: Vec<&str> = match options.delimiter {
                Delimiter::Auto => trimmed
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .collect(),
                Delimiter::Char(c) => trimmed.split(c).map(str::trim).collect(),
            };
            if tokens.len() != 2 || tokens.iter().any(|t| t.is_empty()) {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected 2 tokens, found {}", tokens.iter().filter(|t| !t.is_empty()).count()),
                });
            }
            let (a, b) = (intern(tokens[0]), intern(tokens[1]));
            arcs.push(if options.reverse_arcs { (b, a) } else { (a, b) });
        }

        let (g, mut report) = Self::from_labeled_arcs(labels, arcs)?;
        report.lines = lines;
        report.skipped_lines = skipped;
        Ok((g, report))
    }

    pub fn load_path(path: impl AsRef<std::path::Path>, options: &LoadOptions) -> Result<(Self, LoadReport)> {
        let file = std::fs::File::open(path)?;
        Self::load_edge_list(std::io::BufReader::new(file), options)
    }

    /// The same nodes with every arc present in both directions; used to run
    /// directed algorithms with undirected semantics.
    pub fn symmetrized(&self) -> DirectedGraph {
        let arcs: Vec<(usize, usize)> = self
            .arcs()
            .flat_map(|(u, v)| [(u.index(), v.index()), (v.index(), u.index())])
            .collect();
        Self::from_labeled_arcs(self.labels.clone(), arcs)
            .map(|(g, _)| g)
            .expect("node set is non-empty")
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.out_targets.len()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.node_count()).map(NodeId::new)
    }

    /// Arcs in `(source, target)` order, sorted.
    pub fn arcs(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes().flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    #[inline]
    pub fn out_neighbors(&self, v: NodeId) -> &[NodeId] {
        let i = v.index();
        &self.out_targets[self.out_offsets[i]..self.out_offsets[i + 1]]
    }

    #[inline]
    pub fn in_neighbors(&self, v: NodeId) -> &[NodeId] {
        let i = v.index();
        &self.in_sources[self.in_offsets[i]..self.in_offsets[i + 1]]
    }

    #[inline]
    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out_offsets[v.index() + 1] - self.out_offsets[v.index()]
    }

    #[inline]
    pub fn in_degree(&self, v: NodeId) -> usize {
        self.in_offsets[v.index() + 1] - self.in_offsets[v.index()]
    }

    /// Neighbors reached from `v` by one step of the given traversal. For
    /// `Undirected`, a node linked both ways appears twice.
    pub fn neighbors(&self, v: NodeId, dir: Traversal) -> impl Iterator<Item = NodeId> + '_ {
        let (a, b): (&[NodeId], &[NodeId]) = match dir {
            Traversal::Out => (self.out_neighbors(v), &[]),
            Traversal::In => (self.in_neighbors(v), &[]),
            Traversal::Undirected => (self.out_neighbors(v), self.in_neighbors(v)),
        };
        a.iter().chain(b.iter()).copied()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v.index()]
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        // Linear scan; only used by the CLI for small spreader files.
        self.labels.iter().position(|l| l == label).map(NodeId::new)
    }

    /// Hop distances from `source`, following `dir`. Nodes farther than
    /// `max_depth` or unreachable are `None`.
    pub fn bfs_distances(&self, source: NodeId, dir: Traversal, max_depth: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.node_count()];
        dist[source.index()] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u.index()].unwrap();
            if max_depth.is_some_and(|m| d >= m) {
                continue;
            }
            for w in self.neighbors(u, dir) {
                if dist[w.index()].is_none() {
                    dist[w.index()] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Weakly connected components, each sorted, listed by smallest member.
    pub fn weak_components(&self) -> Vec<Vec<NodeId>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = Vec::new();
        let mut stack = Vec::new();
        for start in self.nodes() {
            if seen[start.index()] {
                continue;
            }
            seen[start.index()] = true;
            stack.push(start);
            let mut members = Vec::new();
            while let Some(u) = stack.pop() {
                members.push(u);
                for w in self.neighbors(u, Traversal::Undirected) {
                    if !seen[w.index()] {
                        seen[w.index()] = true;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    /// Largest weakly connected component; ties go to the component holding
    /// the smallest node id.
    pub fn giant_component(&self) -> Vec<NodeId> {
        let mut best: Vec<NodeId> = Vec::new();
        // Components arrive in order of their smallest member, so a strict
        // comparison keeps the earliest one on ties.
        for c in self.weak_components() {
            if c.len() > best.len() {
                best = c;
            }
        }
        best
    }

    pub fn topology_stats(&self) -> TopologyStats {
        let n = self.node_count();
        let m = self.arc_count();
        let giant = self.giant_component().len();
        TopologyStats {
            nodes: n,
            arcs: m,
            density: density(n, m),
            avg_degree: 2.0 * m as f64 / n as f64,
            avg_out_degree: m as f64 / n as f64,
            giant_component_nodes: giant,
            giant_component_fraction: giant as f64 / n as f64,
        }
    }
}

/// Directed density `m / (n (n - 1))`; zero for a single node.
pub fn density(n: usize, m: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        m as f64 / (n as f64 * (n as f64 - 1.0))
    }
}

/// Summary statistics of a loaded network.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyStats {
    pub nodes: usize,
    pub arcs: usize,
    pub density: f64,
    /// `2m / n`
    pub avg_degree: f64,
    /// `m / n`
    pub avg_out_degree: f64,
    pub giant_component_nodes: usize,
    pub giant_component_fraction: f64,
}

impl TopologyStats {
    /// Statistics derived from counts alone, for when only `n` and `m` are known.
    pub fn from_counts(n: usize, m: usize, giant_component_nodes: usize) -> Self {
        TopologyStats {
            nodes: n,
            arcs: m,
            density: density(n, m),
            avg_degree: 2.0 * m as f64 / n as f64,
            avg_out_degree: m as f64 / n as f64,
            giant_component_nodes,
            giant_component_fraction: giant_component_nodes as f64 / n as f64,
        }
    }
}
