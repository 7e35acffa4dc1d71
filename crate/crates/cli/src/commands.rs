use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use eqtree::constructive::{
    equitable_tree_color_with, in_theorem_regime, theorem_min_k, Outcome, SolveOptions, SolveStats, StuckReport,
};
use eqtree::exact::{exact_equitable_tree_k, va_eq, va_eq_star, Verdict};
use eqtree::generators::{Attach, GenSpec};
use eqtree::graph::{check_kn_bound, degeneracy};
use eqtree::io::{write_dimacs, write_edge_list};
use eqtree::{verify, Coloring, Graph, VerificationReport};
use serde::Serialize;
use serde_json::json;

use crate::args::{AttachArg, ExactArgs, ExactMode, Format, GenArgs, GenKind, MeasureArgs, SolveArgs, VerifyArgs};
use crate::input::{emit, read_graph};

/// Largest graph `solve --fallback-exact` hands to the exact solver.
pub const FALLBACK_MAX_VERTICES: usize = 24;

/// Process exit status. The numeric values are stable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    /// Verified coloring written, or the command succeeded.
    Ok = 0,
    /// A report was written instead of a coloring: stuck state, UNSAT,
    /// exhausted budget or failed verification.
    Report = 1,
    /// I/O, parse or parameter error.
    Error = 2,
}

#[derive(Serialize)]
struct ColoredOutput<'a> {
    status: &'static str,
    solver: &'static str,
    k: usize,
    n: usize,
    coloring: &'a Coloring,
    verification: &'a VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<&'a SolveStats>,
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

/// Re-verifies `coloring` and writes it; an unverified coloring is an error.
fn emit_coloring(
    graph: &Graph,
    solver: &'static str,
    coloring: &Coloring,
    stats: Option<&SolveStats>,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<Exit> {
    let report = verify(graph, coloring)?;
    if !report.passed() {
        bail!(
            "{solver} solver produced a coloring that fails verification: {}",
            serde_json::to_string(&report)?
        );
    }
    let mut text = serde_json::to_string(&ColoredOutput {
        status: "colored",
        solver,
        k: coloring.k(),
        n: graph.vertex_count(),
        coloring,
        verification: &report,
        stats,
    })?;
    text.push('\n');
    emit(out, &text, stdout)?;
    Ok(Exit::Ok)
}

fn snapshot_path(args: &SolveArgs) -> PathBuf {
    if let Some(p) = &args.snapshot {
        return p.clone();
    }
    match &args.out {
        Some(out) => {
            let mut name = out.as_os_str().to_owned();
            name.push(".snapshot.json");
            PathBuf::from(name)
        }
        None => PathBuf::from("eqtree-snapshot.json"),
    }
}

fn emit_stuck(mut report: StuckReport, args: &SolveArgs, stdout: &mut dyn Write) -> Result<Exit> {
    if let Some(snapshot) = report.snapshot.take() {
        let path = snapshot_path(args);
        fs::write(&path, pretty(&snapshot)).with_context(|| format!("writing {}", path.display()))?;
        report.snapshot_path = Some(path.display().to_string());
    }
    let text = pretty(&json!({ "status": "stuck", "report": report }));
    emit(args.out.as_deref(), &text, stdout)?;
    Ok(Exit::Report)
}

pub fn solve(args: &SolveArgs, stdout: &mut dyn Write) -> Result<Exit> {
    let graph = read_graph(&args.graph)?;
    let k = match args.k {
        Some(0) => bail!("k must be at least 1"),
        Some(k) => k,
        None => theorem_min_k(&graph),
    };
    let options = SolveOptions { debug: args.debug };
    match equitable_tree_color_with(&graph, k, options)? {
        Outcome::Colored(solved) => emit_coloring(
            &graph,
            "constructive",
            &solved.coloring,
            Some(&solved.stats),
            args.out.as_deref(),
            stdout,
        ),
        Outcome::Stuck(report) => {
            if args.fallback_exact && graph.vertex_count() <= FALLBACK_MAX_VERTICES {
                let decision = exact_equitable_tree_k(&graph, k, &args.budget.budget())?;
                match &decision.verdict {
                    Verdict::Sat(c) => return emit_coloring(&graph, "exact", c, None, args.out.as_deref(), stdout),
                    Verdict::Unsat => {
                        let text = pretty(&json!({
                            "status": "unsat",
                            "solver": "exact",
                            "k": k,
                            "n": graph.vertex_count(),
                            "nodes": decision.nodes,
                            "stuck_vertex": report.failing_vertex,
                        }));
                        emit(args.out.as_deref(), &text, stdout)?;
                        return Ok(Exit::Report);
                    }
                    Verdict::Indeterminate => {}
                }
            }
            emit_stuck(*report, args, stdout)
        }
    }
}

pub fn exact(args: &ExactArgs, stdout: &mut dyn Write) -> Result<Exit> {
    let graph = read_graph(&args.graph)?;
    let budget = args.budget.budget();
    let out = args.out.as_deref();
    let start = Instant::now();
    let (text, exit) = match args.mode {
        ExactMode::Decide => {
            let Some(k) = args.k else {
                bail!("--mode decide needs --k");
            };
            let decision = exact_equitable_tree_k(&graph, k, &budget)?;
            let exit = match decision.verdict {
                Verdict::Indeterminate => Exit::Report,
                _ => Exit::Ok,
            };
            (decision.to_json() + "\n", exit)
        }
        ExactMode::VaEq | ExactMode::VaEqStar => {
            let (name, result) = match args.mode {
                ExactMode::VaEq => ("va-eq", va_eq(&graph, &budget)),
                _ => ("va-eq-star", va_eq_star(&graph, &budget)),
            };
            let millis = start.elapsed().as_millis();
            match result {
                Ok(value) => (
                    json!({ "mode": name, "value": value, "millis": millis }).to_string() + "\n",
                    Exit::Ok,
                ),
                Err(eqtree::exact::ExactError::Indeterminate { k, nodes }) => (
                    json!({ "mode": name, "verdict": "INDETERMINATE", "k": k, "nodes": nodes, "millis": millis })
                        .to_string()
                        + "\n",
                    Exit::Report,
                ),
                Err(e) => return Err(e.into()),
            }
        }
    };
    emit(out, &text, stdout)?;
    Ok(exit)
}

fn need(value: Option<usize>, flag: &str, kind: GenKind) -> Result<usize> {
    value.with_context(|| format!("--{flag} is required for {kind:?}"))
}

pub fn gen_spec(args: &GenArgs) -> Result<GenSpec> {
    if let Some(json) = &args.spec {
        let mut spec: GenSpec = serde_json::from_str(json).context("parsing --spec")?;
        if let Some(seed) = args.seed {
            spec = spec.with_seed(seed);
        }
        return Ok(spec);
    }
    let kind = args.kind.context("either --spec or --kind is required")?;
    Ok(match kind {
        GenKind::RandomDDegenerate => GenSpec::RandomDDegenerate {
            n: need(args.n, "n", kind)?,
            d: need(args.d, "d", kind)?,
            attach: match args.attach {
                AttachArg::Uniform => Attach::Uniform,
                AttachArg::Skewed => Attach::Skewed,
            },
            min_max_degree: args.min_max_degree,
            seed: args.seed.unwrap_or(0),
        },
        GenKind::CompleteBipartite => GenSpec::CompleteBipartite {
            a: need(args.a, "a", kind)?,
            b: need(args.b, "b", kind)?,
        },
        GenKind::Complete => GenSpec::Complete {
            n: need(args.n, "n", kind)?,
        },
        GenKind::Cycle => GenSpec::Cycle {
            n: need(args.n, "n", kind)?,
        },
        GenKind::Path => GenSpec::Path {
            n: need(args.n, "n", kind)?,
        },
        GenKind::TreewidthGadget => GenSpec::TreewidthGadget {
            d: need(args.d, "d", kind)?,
            s_count: need(args.s_count, "s-count", kind)?,
        },
    })
}

pub fn gen(args: &GenArgs, stdout: &mut dyn Write) -> Result<Exit> {
    let graph = gen_spec(args)?.generate()?;
    let text = match args.format {
        Format::Edgelist => write_edge_list(&graph),
        Format::Dimacs => write_dimacs(&graph),
    };
    emit(args.out.as_deref(), &text, stdout)?;
    Ok(Exit::Ok)
}

/// Reads a bare coloring, or the `coloring` field of `solve` output.
pub fn read_coloring(path: &Path) -> Result<Coloring> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(inner) = value.get_mut("coloring") {
        value = inner.take();
    }
    serde_json::from_value(value).with_context(|| format!("{} is not a valid coloring", path.display()))
}

pub fn verify_cmd(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<Exit> {
    let graph = read_graph(&args.graph)?;
    let coloring = read_coloring(&args.coloring)?;
    let report = verify(&graph, &coloring)?;
    emit(None, &pretty(&report), stdout)?;
    Ok(if report.passed() { Exit::Ok } else { Exit::Report })
}

pub fn measure(args: &MeasureArgs, stdout: &mut dyn Write) -> Result<Exit> {
    let graph = read_graph(&args.graph)?;
    let d = degeneracy(&graph);
    let k = theorem_min_k(&graph);
    let violations = if d >= 2 {
        Some(check_kn_bound(&graph, d)?.len())
    } else {
        None
    };
    let text = pretty(&json!({
        "n": graph.vertex_count(),
        "m": graph.edge_count(),
        "degeneracy": d,
        "max_degree": graph.max_degree(),
        "theorem_min_k": k,
        "in_regime_at_min_k": in_theorem_regime(&graph, k),
        "bound_violations": violations,
    }));
    emit(None, &text, stdout)?;
    Ok(Exit::Ok)
}
