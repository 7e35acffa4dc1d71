//! Batch runner: every (generator, seed, repetition, k) combination becomes
//! one CSV row. Rows are written in instance order whatever the pool does.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use eqtree::constructive::{equitable_tree_color_with, theorem_min_k, Outcome, SolveOptions};
use eqtree::exact::{exact_equitable_tree_k, SearchBudget, Verdict};
use eqtree::generators::GenSpec;
use eqtree::graph::degeneracy;
use eqtree::{verify, Graph};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// First line of every report; bump when columns change.
pub const CSV_VERSION_LINE: &str = "# eqtree-experiment v1";

/// Columns whose values depend on the machine, not on the inputs.
pub const TIMING_COLUMNS: [&str; 3] = ["gen_ms", "solve_ms", "verify_ms"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedRange {
    #[serde(default)]
    pub start: u64,
    pub count: u64,
}

impl Default for SeedRange {
    fn default() -> Self {
        SeedRange { start: 0, count: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case", deny_unknown_fields)]
pub enum KPolicy {
    /// `ceil((Δ + 1) / 2) + offset`.
    TheoremMin {
        #[serde(default)]
        offset: i64,
    },
    /// Degeneracy plus `offset`.
    Degeneracy {
        #[serde(default)]
        offset: i64,
    },
    Fixed {
        k: usize,
    },
    /// Every k in `from..=to`, taken relative to the theorem minimum when
    /// `relative` is set.
    Sweep {
        from: i64,
        to: i64,
        #[serde(default)]
        relative: bool,
    },
}

impl Default for KPolicy {
    fn default() -> Self {
        KPolicy::TheoremMin { offset: 0 }
    }
}

impl KPolicy {
    /// Values of k for `graph`; values below 1 are dropped.
    pub fn values(&self, graph: &Graph, d: usize) -> Vec<usize> {
        let base = theorem_min_k(graph) as i64;
        let raw: Vec<i64> = match *self {
            KPolicy::TheoremMin { offset } => vec![base + offset],
            KPolicy::Degeneracy { offset } => vec![d as i64 + offset],
            KPolicy::Fixed { k } => vec![k as i64],
            KPolicy::Sweep { from, to, relative } => {
                let shift = if relative { base } else { 0 };
                (from..=to).map(|k| k + shift).collect()
            }
        };
        raw.into_iter().filter(|&k| k >= 1).map(|k| k as usize).collect()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    #[default]
    Constructive,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetConfig {
    pub nodes: u64,
    pub secs: f64,
}

impl Default for BudgetConfig {
    fn default() -> Self {
        let b = SearchBudget::default();
        BudgetConfig {
            nodes: b.node_limit,
            secs: b.time_limit.as_secs_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub generators: Vec<GenSpec>,
    /// Seeds for random generators; deterministic kinds run once.
    #[serde(default)]
    pub seeds: SeedRange,
    #[serde(default)]
    pub k_policy: KPolicy,
    #[serde(default)]
    pub solver: SolverKind,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default)]
    pub budget: BudgetConfig,
    /// Run every step with the from-scratch condition checks.
    #[serde(default)]
    pub debug: bool,
    /// Worker threads; 0 uses the rayon default.
    #[serde(default)]
    pub threads: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

fn one() -> usize {
    1
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        if config.generators.is_empty() {
            bail!("config lists no generators");
        }
        if config.repetitions == 0 {
            bail!("repetitions must be at least 1");
        }
        Ok(config)
    }

    fn budget(&self) -> SearchBudget {
        SearchBudget {
            node_limit: self.budget.nodes,
            time_limit: std::time::Duration::from_secs_f64(self.budget.secs.max(0.0)),
        }
    }
}

/// One generated graph; each k from the policy becomes a row.
#[derive(Debug, Clone)]
struct Instance {
    generator: usize,
    spec: GenSpec,
    repetition: usize,
}

fn instances(config: &ExperimentConfig) -> Vec<Instance> {
    let mut out = Vec::new();
    for (generator, spec) in config.generators.iter().enumerate() {
        let specs: Vec<GenSpec> = match spec.seed() {
            Some(_) => (0..config.seeds.count)
                .map(|i| spec.with_seed(config.seeds.start.wrapping_add(i)))
                .collect(),
            None => vec![spec.clone()],
        };
        for spec in specs {
            for repetition in 0..config.repetitions {
                out.push(Instance {
                    generator,
                    spec: spec.clone(),
                    repetition,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Row {
    pub index: usize,
    pub generator: usize,
    pub kind: &'static str,
    pub seed: Option<u64>,
    pub repetition: usize,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub max_degree: usize,
    pub k: usize,
    pub solver: &'static str,
    /// colored, stuck, sat, unsat, indeterminate or error.
    pub outcome: &'static str,
    pub verified: bool,
    /// A definite answer: a verified coloring, or UNSAT.
    pub success: bool,
    pub greedy: usize,
    pub switches: usize,
    pub max_switch_depth: usize,
    pub max_layers: usize,
    pub peeled: usize,
    pub nodes: u64,
    pub violated: String,
    pub note: String,
    pub gen_ms: f64,
    pub solve_ms: f64,
    pub verify_ms: f64,
}

fn ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn run_instance(config: &ExperimentConfig, inst: &Instance) -> Vec<Row> {
    let base = Row {
        generator: inst.generator,
        kind: inst.spec.kind_name(),
        seed: inst.spec.seed(),
        repetition: inst.repetition,
        solver: match config.solver {
            SolverKind::Constructive => "constructive",
            SolverKind::Exact => "exact",
        },
        ..Row::default()
    };
    let start = Instant::now();
    let graph = match inst.spec.generate() {
        Ok(g) => g,
        Err(e) => {
            return vec![Row {
                outcome: "error",
                note: e.to_string(),
                gen_ms: ms(start),
                ..base
            }]
        }
    };
    let gen_ms = ms(start);
    let d = degeneracy(&graph);
    let base = Row {
        n: graph.vertex_count(),
        m: graph.edge_count(),
        d,
        max_degree: graph.max_degree(),
        gen_ms,
        ..base
    };
    config
        .k_policy
        .values(&graph, d)
        .into_iter()
        .map(|k| solve_row(config, &graph, Row { k, ..base.clone() }))
        .collect()
}

fn verified(graph: &Graph, coloring: &eqtree::Coloring, row: &mut Row) -> bool {
    let start = Instant::now();
    let ok = verify(graph, coloring).map(|r| r.passed()).unwrap_or(false);
    row.verify_ms = ms(start);
    ok
}

fn solve_row(config: &ExperimentConfig, graph: &Graph, mut row: Row) -> Row {
    let start = Instant::now();
    match config.solver {
        SolverKind::Constructive => {
            let options = SolveOptions { debug: config.debug };
            match equitable_tree_color_with(graph, row.k, options) {
                Ok(Outcome::Colored(s)) => {
                    row.solve_ms = ms(start);
                    row.outcome = "colored";
                    row.verified = verified(graph, &s.coloring, &mut row);
                    row.success = row.verified;
                    row.greedy = s.stats.greedy;
                    row.switches = s.stats.switches;
                    row.max_switch_depth = s.stats.max_switch_depth;
                    row.max_layers = s.stats.max_layers;
                    row.peeled = s.stats.peeled;
                }
                Ok(Outcome::Stuck(report)) => {
                    row.solve_ms = ms(start);
                    row.outcome = "stuck";
                    row.max_layers = report.audit.measured.layers.len();
                    row.violated = report.violated_inequalities.join(";");
                    row.note = format!("vertex {}", report.failing_vertex);
                }
                Err(e) => {
                    row.solve_ms = ms(start);
                    row.outcome = "error";
                    row.note = e.to_string();
                }
            }
        }
        SolverKind::Exact => match exact_equitable_tree_k(graph, row.k, &config.budget()) {
            Ok(decision) => {
                row.solve_ms = ms(start);
                row.nodes = decision.nodes;
                row.outcome = match &decision.verdict {
                    Verdict::Sat(_) => "sat",
                    Verdict::Unsat => "unsat",
                    Verdict::Indeterminate => "indeterminate",
                };
                match &decision.verdict {
                    Verdict::Sat(c) => {
                        row.verified = verified(graph, c, &mut row);
                        row.success = row.verified;
                    }
                    Verdict::Unsat => row.success = true,
                    Verdict::Indeterminate => {}
                }
            }
            Err(e) => {
                row.solve_ms = ms(start);
                row.outcome = "error";
                row.note = e.to_string();
            }
        },
    }
    row
}

/// Runs every instance and returns the rows in instance order.
pub fn run(config: &ExperimentConfig) -> Result<Vec<Row>> {
    let list = instances(config);
    let work = || -> Vec<Row> {
        list.par_iter()
            .map(|inst| run_instance(config, inst))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    let mut rows = if config.threads == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .context("building worker pool")?
            .install(work)
    };
    for (i, row) in rows.iter_mut().enumerate() {
        row.index = i;
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub rows: usize,
    pub successes: usize,
}

impl Summary {
    pub fn of(rows: &[Row]) -> Summary {
        Summary {
            rows: rows.len(),
            successes: rows.iter().filter(|r| r.success).count(),
        }
    }

    pub fn rate(&self) -> f64 {
        if self.rows == 0 {
            0.0
        } else {
            self.successes as f64 / self.rows as f64
        }
    }
}

/// CSV text: version comment, header, rows, then a summary comment.
pub fn to_csv(rows: &[Row]) -> Result<String> {
    let mut body = Vec::new();
    {
        let mut writer = csv::Writer::from_writer(&mut body);
        if rows.is_empty() {
            writer.serialize(Row::default())?;
        } else {
            for row in rows {
                writer.serialize(row)?;
            }
        }
        writer.flush()?;
    }
    let mut text = String::from_utf8(body)?;
    if rows.is_empty() {
        // Keep only the header line.
        let header_end = text.find('\n').map_or(text.len(), |i| i + 1);
        text.truncate(header_end);
    }
    let summary = Summary::of(rows);
    Ok(format!(
        "{CSV_VERSION_LINE}\n{text}# summary: rows={} successes={} success_rate={:.6}\n",
        summary.rows,
        summary.successes,
        summary.rate()
    ))
}

pub fn run_to_file(config: &ExperimentConfig, out: Option<&Path>, stdout: &mut dyn Write) -> Result<Summary> {
    let rows = run(config)?;
    let text = to_csv(&rows)?;
    match out {
        Some(p) => fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(Summary::of(&rows))
}
