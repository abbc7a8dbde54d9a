//! Spreader tournaments: every method picks `round(p n)` spreaders, every
//! `(mu, beta)` cell scores each set by mean final SIR spread, and the
//! strictly best method takes the cell.
//!
//! Selection runs once per method (at the largest count; smaller counts are
//! prefixes because every method ranks greedily). Simulation seeds depend on
//! `(seed, p index, mu index, beta index, run)` but not on the method, so all
//! methods in a cell face the same random streams and identical spreader
//! sets tie exactly.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, NodeId};
use crate::method::Method;
use crate::sir::{run_many_at, SirParams};
use crate::voterank::spreader_count_from_fraction;

pub const DEFAULT_P_VALUES: [f64; 15] = [
    0.0001, 0.0005, 0.0008, 0.001, 0.002, 0.003, 0.005, 0.008, 0.01, 0.015, 0.02, 0.025, 0.03, 0.035, 0.04,
];
pub const DEFAULT_MU_VALUES: [f64; 11] = [0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55];
pub const DEFAULT_BETA_VALUES: [f64; 6] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6];
pub const DEFAULT_RUNS: usize = 1000;

// Seed-space tags that keep figure streams apart from grid cells.
const RT_CURVE_TAG: u64 = 0xF1;
const P_SWEEP_TAG: u64 = 0xF2;
const BETA_SWEEP_TAG: u64 = 0xF3;

fn default_methods() -> Vec<Method> {
    Method::ALL.to_vec()
}
fn default_p_values() -> Vec<f64> {
    DEFAULT_P_VALUES.to_vec()
}
fn default_mu_values() -> Vec<f64> {
    DEFAULT_MU_VALUES.to_vec()
}
fn default_beta_values() -> Vec<f64> {
    DEFAULT_BETA_VALUES.to_vec()
}
fn default_runs() -> usize {
    DEFAULT_RUNS
}

/// `R(t)` curves for every method at one operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RtCurveSpec {
    pub p: f64,
    pub mu: f64,
    pub beta: f64,
}

/// Final spread against `p` at fixed `(mu, beta)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PSweepSpec {
    pub mu: f64,
    pub beta: f64,
    #[serde(default)]
    pub p_values: Option<Vec<f64>>,
}

/// Final spread against `beta` at fixed `(p, mu)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaSweepSpec {
    pub p: f64,
    pub mu: f64,
    #[serde(default)]
    pub beta_values: Option<Vec<f64>>,
}

/// Tournament configuration, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    #[serde(default)]
    pub graph_path: Option<PathBuf>,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_p_values")]
    pub p_values: Vec<f64>,
    #[serde(default = "default_mu_values")]
    pub mu_values: Vec<f64>,
    #[serde(default = "default_beta_values")]
    pub beta_values: Vec<f64>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rt_curve: Option<RtCurveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_sweep: Option<PSweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_sweep: Option<BetaSweepSpec>,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        ExperimentPlan {
            graph_path: None,
            methods: default_methods(),
            p_values: default_p_values(),
            mu_values: default_mu_values(),
            beta_values: default_beta_values(),
            runs: DEFAULT_RUNS,
            seed: 0,
            rt_curve: None,
            p_sweep: None,
            beta_sweep: None,
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("p must be in (0, 1], got {p}")))
    }
}

fn check_methods(methods: &[Method]) -> Result<()> {
    if methods.is_empty() {
        return Err(Error::invalid("no methods given"));
    }
    for (i, m) in methods.iter().enumerate() {
        if methods[..i].contains(m) {
            return Err(Error::invalid(format!("method {m} listed twice")));
        }
    }
    Ok(())
}

impl ExperimentPlan {
    pub fn from_json(text: &str) -> Result<Self> {
        let plan: ExperimentPlan = serde_json::from_str(text)?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn cells_per_row(&self) -> usize {
        self.mu_values.len() * self.beta_values.len()
    }

    pub fn validate(&self) -> Result<()> {
        check_methods(&self.methods)?;
        if self.p_values.is_empty() || self.mu_values.is_empty() || self.beta_values.is_empty() {
            return Err(Error::invalid("p, mu and beta grids must be non-empty"));
        }
        if self.runs == 0 {
            return Err(Error::invalid("runs must be at least 1"));
        }
        self.p_values.iter().try_for_each(|&p| check_p(p))?;
        for &mu in &self.mu_values {
            for &beta in &self.beta_values {
                SirParams::new(mu, beta, 0)?;
            }
        }
        if let Some(c) = &self.rt_curve {
            check_p(c.p)?;
            SirParams::new(c.mu, c.beta, 0)?;
        }
        if let Some(s) = &self.p_sweep {
            SirParams::new(s.mu, s.beta, 0)?;
            s.p_values.iter().flatten().try_for_each(|&p| check_p(p))?;
        }
        if let Some(s) = &self.beta_sweep {
            check_p(s.p)?;
            for &beta in s.beta_values.as_deref().unwrap_or(&DEFAULT_BETA_VALUES) {
                SirParams::new(s.mu, beta, 0)?;
            }
        }
        Ok(())
    }
}

/// Spreader lists per method, long enough for the largest requested count.
#[derive(Debug, Clone)]
pub struct Selections {
    methods: Vec<Method>,
    lists: Vec<Vec<NodeId>>,
}

impl Selections {
    pub fn compute(g: &DirectedGraph, methods: &[Method], max_count: usize) -> Result<Self> {
        let lists = methods
            .par_iter()
            .map(|m| m.select(g, max_count))
            .collect::<Result<Vec<_>>>()?;
        Ok(Selections {
            methods: methods.to_vec(),
            lists,
        })
    }

    pub fn spreaders(&self, method_index: usize, count: usize) -> &[NodeId] {
        &self.lists[method_index][..count]
    }

    pub fn methods(&self) -> &[Method] {
        &self.methods
    }
}

fn counts_for(n: usize, ps: &[f64]) -> Result<Vec<usize>> {
    ps.iter().map(|&p| spreader_count_from_fraction(n, p)).collect()
}

/// Mean and standard deviation of the final spread for one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub p: f64,
    pub mu: f64,
    pub beta: f64,
    pub method: Method,
    pub mean_final_spread: f64,
    pub stddev: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VictoryRow {
    pub p: f64,
    /// Cells won outright, aligned with [`VictoryTable::methods`].
    pub wins: Vec<usize>,
    /// Cells where the best mean was shared.
    pub ties: usize,
}

impl VictoryRow {
    pub fn total(&self) -> usize {
        self.wins.iter().sum::<usize>() + self.ties
    }
}

/// Per-`p` count of `(mu, beta)` cells won by each method.
#[derive(Debug, Clone, PartialEq)]
pub struct VictoryTable {
    pub methods: Vec<Method>,
    pub rows: Vec<VictoryRow>,
}

impl VictoryTable {
    /// Tabulates winners from cell results. Rows follow the first appearance
    /// of each `p`, method columns the first appearance of each method.
    pub fn from_cells(cells: &[CellResult]) -> Self {
        let mut methods: Vec<Method> = Vec::new();
        let mut ps: Vec<f64> = Vec::new();
        // (p, mu, beta) by bit pattern -> best mean and its holders
        let mut order: Vec<(u64, u64, u64)> = Vec::new();
        let mut grouped: HashMap<(u64, u64, u64), Vec<(Method, f64)>> = HashMap::new();
        for c in cells {
            if !methods.contains(&c.method) {
                methods.push(c.method);
            }
            if !ps.iter().any(|p| p.to_bits() == c.p.to_bits()) {
                ps.push(c.p);
            }
            let key = (c.p.to_bits(), c.mu.to_bits(), c.beta.to_bits());
            grouped
                .entry(key)
                .or_insert_with(|| {
                    order.push(key);
                    Vec::new()
                })
                .push((c.method, c.mean_final_spread));
        }
        let mut rows: Vec<VictoryRow> = ps
            .iter()
            .map(|&p| VictoryRow {
                p,
                wins: vec![0; methods.len()],
                ties: 0,
            })
            .collect();
        for key in order {
            let entries = &grouped[&key];
            let best = entries.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
            let mut holders = entries.iter().filter(|e| e.1 == best);
            let row = rows.iter_mut().find(|r| r.p.to_bits() == key.0).expect("row exists");
            match (holders.next(), holders.next()) {
                (Some(&(m, _)), None) => {
                    let col = methods.iter().position(|&x| x == m).unwrap();
                    row.wins[col] += 1;
                }
                _ => row.ties += 1,
            }
        }
        VictoryTable { methods, rows }
    }

    /// `p,method,wins,ties`; `ties` is the row's shared-best cell count,
    /// repeated on each method line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,method,wins,ties\n");
        for row in &self.rows {
            for (m, w) in self.methods.iter().zip(&row.wins) {
                writeln!(out, "{:.6},{},{},{}", row.p, m, w, row.ties).unwrap();
            }
        }
        out
    }
}

/// Everything a grid run produces.
#[derive(Debug, Clone)]
pub struct PlanResults {
    pub table: VictoryTable,
    pub cells: Vec<CellResult>,
    pub rt_curves: Option<RtCurves>,
    pub p_sweep: Option<SweepTable>,
    pub beta_sweep: Option<SweepTable>,
}

/// Runs the whole tournament. All spreader sets are selected, and every
/// count validated, before any simulation starts.
pub fn run_plan(g: &DirectedGraph, plan: &ExperimentPlan) -> Result<PlanResults> {
    plan.validate()?;
    let n = g.node_count();
    let counts = counts_for(n, &plan.p_values)?;
    let mut max_count = counts.iter().copied().max().unwrap_or(1);
    if let Some(c) = &plan.rt_curve {
        max_count = max_count.max(spreader_count_from_fraction(n, c.p)?);
    }
    if let Some(s) = &plan.p_sweep {
        let ps = s.p_values.as_deref().unwrap_or(&plan.p_values);
        max_count = max_count.max(counts_for(n, ps)?.into_iter().max().unwrap_or(1));
    }
    if let Some(s) = &plan.beta_sweep {
        max_count = max_count.max(spreader_count_from_fraction(n, s.p)?);
    }
    let selections = Selections::compute(g, &plan.methods, max_count)?;

    let n_mu = plan.mu_values.len();
    let n_beta = plan.beta_values.len();
    let n_methods = plan.methods.len();
    let total = plan.p_values.len() * n_mu * n_beta * n_methods;
    let cells = (0..total)
        .into_par_iter()
        .map(|flat| {
            let mi = flat % n_methods;
            let bi = (flat / n_methods) % n_beta;
            let ui = (flat / (n_methods * n_beta)) % n_mu;
            let pi = flat / (n_methods * n_beta * n_mu);
            let params = SirParams::new(plan.mu_values[ui], plan.beta_values[bi], plan.seed)?;
            let spreaders = selections.spreaders(mi, counts[pi]);
            let s = run_many_at(g, spreaders, &params, plan.runs, &[pi as u64, ui as u64, bi as u64])?;
            Ok(CellResult {
                p: plan.p_values[pi],
                mu: params.mu,
                beta: params.beta,
                method: plan.methods[mi],
                mean_final_spread: s.mean_final_spread,
                stddev: s.stddev_final_spread,
                runs: s.runs,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let table = VictoryTable::from_cells(&cells);

    let rt_curves = match &plan.rt_curve {
        Some(c) => Some(rt_curves_with(g, &selections, c.p, c.mu, c.beta, plan.runs, plan.seed)?),
        None => None,
    };
    let p_sweep = match &plan.p_sweep {
        Some(s) => {
            let ps = s.p_values.as_deref().unwrap_or(&plan.p_values);
            Some(p_sweep_with(g, &selections, ps, s.mu, s.beta, plan.runs, plan.seed)?)
        }
        None => None,
    };
    let beta_sweep = match &plan.beta_sweep {
        Some(s) => {
            let betas = s.beta_values.as_deref().unwrap_or(&DEFAULT_BETA_VALUES);
            Some(beta_sweep_with(g, &selections, s.p, s.mu, betas, plan.runs, plan.seed)?)
        }
        None => None,
    };

    Ok(PlanResults {
        table,
        cells,
        rt_curves,
        p_sweep,
        beta_sweep,
    })
}

/// `p,mu,beta,method,mean_final_spread,stddev,runs`. Floats use the shortest
/// representation that parses back to the same value, so the file reloads
/// losslessly.
pub fn raw_results_csv(cells: &[CellResult]) -> String {
    let mut out = String::from("p,mu,beta,method,mean_final_spread,stddev,runs\n");
    for c in cells {
        writeln!(out, "{},{},{},{},{},{},{}", c.p, c.mu, c.beta, c.method, c.mean_final_spread, c.stddev, c.runs).unwrap();
    }
    out
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    p: f64,
    mu: f64,
    beta: f64,
    method: Method,
    mean_final_spread: f64,
    stddev: f64,
    runs: usize,
}

pub fn read_raw_results<R: std::io::Read>(reader: R) -> Result<Vec<CellResult>> {
    let mut rdr = csv::Reader::from_reader(reader);
    rdr.deserialize::<RawRecord>()
        .map(|r| {
            let r = r?;
            Ok(CellResult {
                p: r.p,
                mu: r.mu,
                beta: r.beta,
                method: r.method,
                mean_final_spread: r.mean_final_spread,
                stddev: r.stddev,
                runs: r.runs,
            })
        })
        .collect()
}

/// Mean `R(t)` per method at one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct RtCurves {
    pub methods: Vec<Method>,
    pub curves: Vec<Vec<f64>>,
}

impl RtCurves {
    /// `method,turn,mean_R`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,turn,mean_R\n");
        for (m, curve) in self.methods.iter().zip(&self.curves) {
            for (t, r) in curve.iter().enumerate() {
                writeln!(out, "{},{},{:.6}", m, t + 1, r).unwrap();
            }
        }
        out
    }
}

/// Mean `R(t)` series of one method's spreaders. Runs are seeded from
/// `(seed, run)`.
pub fn rt_curve(g: &DirectedGraph, method: Method, p: f64, mu: f64, beta: f64, runs: usize, seed: u64) -> Result<Vec<f64>> {
    let count = spreader_count_from_fraction(g.node_count(), p)?;
    let spreaders = method.select(g, count)?;
    let params = SirParams::new(mu, beta, seed)?;
    Ok(run_many_at(g, &spreaders, &params, runs, &[RT_CURVE_TAG])?.mean_trajectory)
}

fn rt_curves_with(g: &DirectedGraph, sel: &Selections, p: f64, mu: f64, beta: f64, runs: usize, seed: u64) -> Result<RtCurves> {
    let count = spreader_count_from_fraction(g.node_count(), p)?;
    let params = SirParams::new(mu, beta, seed)?;
    let curves = (0..sel.methods().len())
        .map(|mi| Ok(run_many_at(g, sel.spreaders(mi, count), &params, runs, &[RT_CURVE_TAG])?.mean_trajectory))
        .collect::<Result<Vec<_>>>()?;
    Ok(RtCurves {
        methods: sel.methods().to_vec(),
        curves,
    })
}

/// Mean final spread keyed by a swept parameter (`p` or `beta`) and method.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub parameter: &'static str,
    pub keys: Vec<f64>,
    pub methods: Vec<Method>,
    /// `means[key][method]`
    pub means: Vec<Vec<f64>>,
}

impl SweepTable {
    /// `<parameter>,method,mean_final_spread`
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},method,mean_final_spread\n", self.parameter);
        for (k, row) in self.keys.iter().zip(&self.means) {
            for (m, v) in self.methods.iter().zip(row) {
                writeln!(out, "{:.6},{},{:.6}", k, m, v).unwrap();
            }
        }
        out
    }
}

fn p_sweep_with(g: &DirectedGraph, sel: &Selections, ps: &[f64], mu: f64, beta: f64, runs: usize, seed: u64) -> Result<SweepTable> {
    let counts = counts_for(g.node_count(), ps)?;
    let params = SirParams::new(mu, beta, seed)?;
    let means = counts
        .iter()
        .enumerate()
        .map(|(pi, &count)| {
            (0..sel.methods().len())
                .map(|mi| Ok(run_many_at(g, sel.spreaders(mi, count), &params, runs, &[P_SWEEP_TAG, pi as u64])?.mean_final_spread))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        parameter: "p",
        keys: ps.to_vec(),
        methods: sel.methods().to_vec(),
        means,
    })
}

fn beta_sweep_with(g: &DirectedGraph, sel: &Selections, p: f64, mu: f64, betas: &[f64], runs: usize, seed: u64) -> Result<SweepTable> {
    let count = spreader_count_from_fraction(g.node_count(), p)?;
    let means = betas
        .iter()
        .enumerate()
        .map(|(bi, &beta)| {
            let params = SirParams::new(mu, beta, seed)?;
            (0..sel.methods().len())
                .map(|mi| Ok(run_many_at(g, sel.spreaders(mi, count), &params, runs, &[BETA_SWEEP_TAG, bi as u64])?.mean_final_spread))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        parameter: "beta",
        keys: betas.to_vec(),
        methods: sel.methods().to_vec(),
        means,
    })
}

/// Final spread against `p` for each method at fixed `(mu, beta)`.
pub fn p_sweep(g: &DirectedGraph, methods: &[Method], ps: &[f64], mu: f64, beta: f64, runs: usize, seed: u64) -> Result<SweepTable> {
    check_methods(methods)?;
    ps.iter().try_for_each(|&p| check_p(p))?;
    let max_count = counts_for(g.node_count(), ps)?.into_iter().max().unwrap_or(1);
    let sel = Selections::compute(g, methods, max_count)?;
    p_sweep_with(g, &sel, ps, mu, beta, runs, seed)
}

/// Final spread against `beta` for each method at fixed `(p, mu)`.
pub fn beta_sweep(g: &DirectedGraph, methods: &[Method], p: f64, mu: f64, betas: &[f64], runs: usize, seed: u64) -> Result<SweepTable> {
    check_methods(methods)?;
    check_p(p)?;
    let sel = Selections::compute(g, methods, spreader_count_from_fraction(g.node_count(), p)?)?;
    beta_sweep_with(g, &sel, p, mu, betas, runs, seed)
}

/// Writes `contents` to a temporary file beside `path`, then renames it into
/// place, so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::invalid(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let result = (|| {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    Ok(result?)
}

/// Writes `victory_table.csv`, `raw_results.csv` and any figure CSVs into
/// `dir`, creating it if needed. Returns the written paths.
pub fn write_outputs(dir: &Path, results: &PlanResults) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut files = vec![
        ("victory_table.csv", results.table.to_csv()),
        ("raw_results.csv", raw_results_csv(&results.cells)),
    ];
    if let Some(c) = &results.rt_curves {
        files.push(("rt_curve.csv", c.to_csv()));
    }
    if let Some(s) = &results.p_sweep {
        files.push(("p_sweep.csv", s.to_csv()));
    }
    if let Some(s) = &results.beta_sweep {
        files.push(("beta_sweep.csv", s.to_csv()));
    }
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        write_atomic(&path, body.as_bytes())?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_plan(methods: Vec<Method>) -> ExperimentPlan {
        ExperimentPlan {
            methods,
            p_values: vec![0.1, 0.3],
            mu_values: vec![0.2, 0.5],
            beta_values: vec![0.3, 1.0],
            runs: 40,
            seed: 9,
            ..ExperimentPlan::default()
        }
    }

    fn graph() -> DirectedGraph {
        crate::synthetic::citation_digraph(40, 80, 4).unwrap()
    }

    #[test]
    fn default_grid_has_66_cells() {
        let plan = ExperimentPlan::default();
        assert_eq!(plan.cells_per_row(), 66);
        assert_eq!(plan.p_values.len(), 15);
        plan.validate().unwrap();
    }

    #[test]
    fn single_method_wins_everything() {
        let r = run_plan(&graph(), &small_plan(vec![Method::Degree])).unwrap();
        for row in &r.table.rows {
            assert_eq!(row.wins, vec![4]);
            assert_eq!(row.ties, 0);
        }
    }

    #[test]
    fn identical_selections_always_tie() {
        // On a star every method picks the centre first.
        let g = DirectedGraph::from_arcs(12, (1..12).map(|i| (0, i))).unwrap();
        let mut plan = small_plan(vec![Method::Degree, Method::VoteRank]);
        plan.p_values = vec![0.05];
        let r = run_plan(&g, &plan).unwrap();
        assert_eq!(r.table.rows[0].wins, vec![0, 0]);
        assert_eq!(r.table.rows[0].ties, 4);
    }

    #[test]
    fn rows_sum_to_cell_count_and_reload() {
        let plan = small_plan(Method::ALL.to_vec());
        let r = run_plan(&graph(), &plan).unwrap();
        for row in &r.table.rows {
            assert_eq!(row.total(), plan.cells_per_row());
        }
        let csv = raw_results_csv(&r.cells);
        let back = read_raw_results(csv.as_bytes()).unwrap();
        assert_eq!(back, r.cells);
        assert_eq!(VictoryTable::from_cells(&back), r.table);
    }

    #[test]
    fn oversized_count_fails_before_simulating() {
        let g = DirectedGraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        let mut plan = small_plan(vec![Method::Degree]);
        plan.p_values = vec![1.0];
        // p = 1 is fine: every node seeds, spread is total.
        let r = run_plan(&g, &plan).unwrap();
        assert!(r.cells.iter().all(|c| c.mean_final_spread == 1.0));

        let empty = DirectedGraph::from_arcs(3, []).unwrap();
        assert!(run_plan(&empty, &small_plan(vec![Method::VoteRank])).is_err());
    }

    #[test]
    fn plan_json_defaults_and_validation() {
        let plan = ExperimentPlan::from_json(r#"{"methods": ["degree", "voterank-lred"], "runs": 5, "seed": 3}"#).unwrap();
        assert_eq!(plan.methods, vec![Method::Degree, Method::VoteRankLred]);
        assert_eq!(plan.cells_per_row(), 66);
        assert!(ExperimentPlan::from_json(r#"{"methods": ["pagerank"]}"#).is_err());
        assert!(ExperimentPlan::from_json(r#"{"p_values": [0.0]}"#).is_err());
        assert!(ExperimentPlan::from_json(r#"{"beta_values": [0.0]}"#).is_err());
        assert!(ExperimentPlan::from_json(r#"{"runs": 0}"#).is_err());
        assert!(ExperimentPlan::from_json(r#"{"methods": ["degree", "degree"]}"#).is_err());
        assert!(ExperimentPlan::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn rt_curve_bounds_and_flat_without_transmission() {
        let g = graph();
        let flat = rt_curve(&g, Method::Degree, 0.1, 0.0, 1.0, 30, 1).unwrap();
        assert!(flat.iter().all(|&r| r == 4.0 / 40.0));
        let curve = rt_curve(&g, Method::VoteRankLred, 0.1, 0.4, 0.3, 30, 1).unwrap();
        assert!(curve.windows(2).all(|w| w[0] <= w[1]));
        assert!(curve.iter().all(|&r| (0.0..=1.0).contains(&r)));
        assert!(*curve.last().unwrap() >= 0.1);
    }

    #[test]
    fn sweeps_have_expected_shape() {
        let g = graph();
        let t = p_sweep(&g, &[Method::Degree, Method::VoteRank], &[0.05, 1.0], 0.3, 0.5, 20, 2).unwrap();
        assert_eq!(t.means.len(), 2);
        assert_eq!(t.means[1], vec![1.0, 1.0]);
        let b = beta_sweep(&g, &[Method::VoteRank], 0.1, 0.0, &[0.2, 0.9], 20, 2).unwrap();
        assert_eq!(b.means, vec![vec![0.1], vec![0.1]]);
        assert!(t.to_csv().starts_with("p,method,mean_final_spread\n0.050000,degree,"));
    }

    #[test]
    fn victory_csv_format() {
        let table = VictoryTable {
            methods: vec![Method::Degree, Method::VoteRankLred],
            rows: vec![VictoryRow {
                p: 0.0001,
                wins: vec![60, 5],
                ties: 1,
            }],
        };
        assert_eq!(table.to_csv(), "p,method,wins,ties\n0.000100,degree,60,1\n0.000100,voterank-lred,5,1\n");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"one").unwrap();
        write_atomic(&path, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
