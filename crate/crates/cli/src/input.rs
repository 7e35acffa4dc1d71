use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use eqtree::io::{parse_dimacs, parse_edge_list};
use eqtree::Graph;

use crate::args::{Format, GraphInput};

pub fn guess_format(path: &Path) -> Format {
    match path.extension().and_then(|e| e.to_str()) {
        Some("col" | "dimacs") => Format::Dimacs,
        _ => Format::Edgelist,
    }
}

pub fn parse_graph(text: &str, format: Format) -> Result<Graph> {
    let built = match format {
        Format::Edgelist => parse_edge_list(text)?,
        Format::Dimacs => parse_dimacs(text)?,
    };
    if built.duplicate_edges > 0 {
        eprintln!("warning: ignored {} duplicate edge(s)", built.duplicate_edges);
    }
    Ok(built.graph)
}

pub fn read_graph(input: &GraphInput) -> Result<Graph> {
    let text = fs::read_to_string(&input.input).with_context(|| format!("reading {}", input.input.display()))?;
    let format = input.format.unwrap_or_else(|| guess_format(&input.input));
    parse_graph(&text, format).with_context(|| format!("parsing {}", input.input.display()))
}

/// Writes `text` to `path`, or to `stdout` when no path is given.
pub fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => stdout.write_all(text.as_bytes()).context("writing stdout"),
    }
}
