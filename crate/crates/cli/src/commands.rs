use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde_json::Map;
use spreadrank_core::centrality::degree_centrality;
use spreadrank_core::experiment::{run_plan, write_outputs};
use spreadrank_core::sir::run_many;
use spreadrank_core::voterank::{elect_spreaders, spreader_count_from_fraction};
use spreadrank_core::{DegreeMode, DirectedGraph, ExperimentPlan, LoadOptions, Method, NodeId, ReductionKernel, SirParams};

use crate::args::{Cli, Command, DegreeModeArg, GraphArgs, GridArgs, RankArgs, SirArgs, SizeArgs, StatsArgs};
use crate::output::{emit, field, json, round6};
use crate::CliError;

struct Ctx {
    quiet: bool,
}

impl Ctx {
    fn warn(&self, msg: impl std::fmt::Display) {
        if !self.quiet {
            eprintln!("warning: {msg}");
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Data(anyhow!("starting worker pool: {e}")))?;
    }
    let ctx = Ctx { quiet: cli.quiet };
    match cli.command {
        Command::Stats(a) => stats(&ctx, a),
        Command::Rank(a) => rank(&ctx, a),
        Command::Sir(a) => sir(&ctx, a),
        Command::Grid(a) => grid(&ctx, a),
    }
}

fn load(ctx: &Ctx, path: &Path, reverse_arcs: bool, delimiter: Option<char>) -> Result<DirectedGraph, CliError> {
    let mut opts = LoadOptions::default().reverse_arcs(reverse_arcs);
    if let Some(c) = delimiter {
        opts = opts.delimiter(c);
    }
    let (g, report) = DirectedGraph::load_path(path, &opts).map_err(|e| anyhow::Error::new(e).context(format!("reading {}", path.display())))?;
    if report.self_loops > 0 {
        ctx.warn(format_args!("{}: dropped {} self-loop(s)", path.display(), report.self_loops));
    }
    if report.duplicate_arcs > 0 {
        ctx.warn(format_args!("{}: dropped {} duplicate arc(s)", path.display(), report.duplicate_arcs));
    }
    Ok(g)
}

fn load_graph(ctx: &Ctx, a: &GraphArgs) -> Result<DirectedGraph, CliError> {
    load(ctx, &a.graph, a.reverse_arcs, a.delimiter)
}

fn resolve_count(n: usize, size: &SizeArgs) -> Result<usize, CliError> {
    let k = match (size.count, size.fraction) {
        (Some(c), _) => usize::try_from(c).unwrap_or(usize::MAX),
        (None, Some(p)) => spreader_count_from_fraction(n, p)?,
        (None, None) => n,
    };
    if k > n {
        return Err(CliError::Data(anyhow!("asked for {k} nodes but the graph has {n}")));
    }
    Ok(k)
}

fn stats(ctx: &Ctx, a: StatsArgs) -> Result<(), CliError> {
    let g = load_graph(ctx, &a.graph)?;
    let s = g.topology_stats();
    let mut m = Map::new();
    m.insert("nodes".into(), s.nodes.into());
    m.insert("arcs".into(), s.arcs.into());
    m.insert("density".into(), round6(s.density));
    m.insert("avg_degree".into(), round6(s.avg_degree));
    m.insert("avg_out_degree".into(), round6(s.avg_out_degree));
    m.insert("giant_component_nodes".into(), s.giant_component_nodes.into());
    m.insert("giant_component_fraction".into(), round6(s.giant_component_fraction));
    emit(a.out.as_deref(), &json(m))?;
    Ok(())
}

fn rank(ctx: &Ctx, a: RankArgs) -> Result<(), CliError> {
    let mut g = load_graph(ctx, &a.graph)?;
    if a.undirected {
        g = g.symmetrized();
    }
    let k = resolve_count(g.node_count(), &a.size)?;
    let mut out = String::new();
    match a.method.kernel_variant() {
        Some(variant) => {
            let mut kernel = ReductionKernel::for_graph(variant, &g)?;
            if let Some(h) = a.horizon {
                kernel = kernel.with_horizon(usize::try_from(h).unwrap_or(usize::MAX))?;
            }
            out.push_str("rank,node_label,election_round_score\n");
            for (i, e) in elect_spreaders(&g, kernel, k)?.iter().enumerate() {
                let _ = writeln!(out, "{},{},{:.6}", i + 1, field(g.label(e.node)), e.score);
            }
        }
        None => {
            if a.horizon.is_some() {
                return Err(CliError::Usage("--horizon only applies to VoteRank methods".into()));
            }
            let scores = match a.method {
                Method::Degree => degree_centrality(&g, degree_mode(a.degree_mode)),
                m => m.scores(&g).expect("centrality method"),
            };
            out.push_str("node_label,score,rank\n");
            for (i, v) in scores.top_k(k)?.nodes().iter().enumerate() {
                let _ = writeln!(out, "{},{:.6},{}", field(g.label(*v)), scores.get(*v), i + 1);
            }
        }
    }
    emit(a.out.as_deref(), &out)?;
    Ok(())
}

fn degree_mode(m: DegreeModeArg) -> DegreeMode {
    match m {
        DegreeModeArg::Total => DegreeMode::Total,
        DegreeModeArg::In => DegreeMode::In,
        DegreeModeArg::Out => DegreeMode::Out,
    }
}

/// One label per line; blank lines and `#` comments are ignored.
fn read_spreaders(g: &DirectedGraph, path: &Path) -> Result<Vec<NodeId>, CliError> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut seen = HashSet::new();
    let mut nodes = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let label = line.trim();
        if label.is_empty() || label.starts_with('#') {
            continue;
        }
        let v = g
            .node_by_label(label)
            .ok_or_else(|| anyhow!("{}:{}: unknown node `{label}`", path.display(), i + 1))?;
        if !seen.insert(v) {
            return Err(CliError::Data(anyhow!("{}:{}: node `{label}` listed twice", path.display(), i + 1)));
        }
        nodes.push(v);
    }
    if nodes.is_empty() {
        return Err(CliError::Data(anyhow!("{}: no spreaders listed", path.display())));
    }
    Ok(nodes)
}

fn sir(ctx: &Ctx, a: SirArgs) -> Result<(), CliError> {
    let mut g = load_graph(ctx, &a.graph)?;
    if a.undirected {
        g = g.symmetrized();
    }
    let spreaders = match (&a.spreaders_file, a.method) {
        (Some(path), _) => {
            if a.size.count.is_some() || a.size.fraction.is_some() {
                return Err(CliError::Usage("--count/--fraction need --method, not --spreaders-file".into()));
            }
            read_spreaders(&g, path)?
        }
        (None, Some(m)) => {
            let k = resolve_count(g.node_count(), &a.size)?;
            m.select(&g, k)?
        }
        (None, None) => unreachable!("clap requires a spreader source"),
    };
    let mut params = SirParams::new(a.mu, a.beta, a.seed)?;
    params.max_turns = a.max_turns.map(|t| usize::try_from(t).unwrap_or(usize::MAX));
    let runs = usize::try_from(a.runs).unwrap_or(usize::MAX);
    let summary = run_many(&g, &spreaders, &params, runs)?;
    if summary.truncated_runs > 0 {
        ctx.warn(format_args!("{} of {} runs hit the turn cap", summary.truncated_runs, summary.runs));
    }

    let mut m = Map::new();
    m.insert("mu".into(), a.mu.into());
    m.insert("beta".into(), a.beta.into());
    m.insert("lambda".into(), round6(params.lambda()));
    m.insert("runs".into(), summary.runs.into());
    m.insert("seed".into(), a.seed.into());
    m.insert("spreaders".into(), spreaders.len().into());
    m.insert("mean_final_spread".into(), round6(summary.mean_final_spread));
    m.insert("stddev_final_spread".into(), round6(summary.stddev_final_spread));
    m.insert("mean_turns".into(), round6(summary.mean_turns));
    m.insert("truncated_runs".into(), summary.truncated_runs.into());

    if let Some(path) = &a.curve_out {
        let mut csv = String::from("turn,mean_R\n");
        for (t, r) in summary.mean_trajectory.iter().enumerate() {
            let _ = writeln!(csv, "{t},{r:.6}");
        }
        emit(Some(path), &csv)?;
    }
    emit(a.out.as_deref(), &json(m))?;
    Ok(())
}

fn grid(ctx: &Ctx, a: GridArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&a.plan).with_context(|| format!("reading {}", a.plan.display()))?;
    let plan = ExperimentPlan::from_json(&text).map_err(|e| anyhow::Error::new(e).context(format!("parsing {}", a.plan.display())))?;
    plan.validate()?;
    let graph_path: PathBuf = match (&a.graph, &plan.graph_path) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) if p.is_relative() => a.plan.parent().unwrap_or(Path::new("")).join(p),
        (None, Some(p)) => p.clone(),
        (None, None) => return Err(CliError::Usage("no graph: pass --graph or set graph_path in the plan".into())),
    };
    let g = load(ctx, &graph_path, a.reverse_arcs, None)?;
    let results = run_plan(&g, &plan)?;
    let written = write_outputs(&a.out, &results).with_context(|| format!("writing into {}", a.out.display()))?;
    if !ctx.quiet {
        for p in written {
            eprintln!("wrote {}", p.display());
        }
    }
    Ok(())
}
