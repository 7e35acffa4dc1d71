//! Replays the checked-in fuzz seeds through the parsers with the same
//! round-trip assertions the fuzz targets make.

use std::fs;
use std::path::PathBuf;

use eqtree::generators::GenSpec;
use eqtree::io::{parse_dimacs, parse_edge_list, write_dimacs, write_edge_list};
use eqtree::Coloring;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            (path.display().to_string(), fs::read(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn edge_list_seeds() {
    let mut accepted = 0;
    for (name, data) in seeds("edge_list") {
        let text = String::from_utf8(data).unwrap();
        if let Ok(built) = parse_edge_list(&text) {
            let again = parse_edge_list(&write_edge_list(&built.graph)).unwrap();
            assert_eq!(again.graph, built.graph, "{name}");
            accepted += 1;
        }
    }
    assert!(accepted >= 4);
}

#[test]
fn dimacs_seeds() {
    let mut accepted = 0;
    for (name, data) in seeds("dimacs") {
        let text = String::from_utf8(data).unwrap();
        if let Ok(built) = parse_dimacs(&text) {
            let again = parse_dimacs(&write_dimacs(&built.graph)).unwrap();
            assert_eq!(again.graph, built.graph, "{name}");
            accepted += 1;
        }
    }
    assert!(accepted >= 2);
}

#[test]
fn coloring_seeds() {
    let mut accepted = 0;
    for (_, data) in seeds("coloring_json") {
        if let Ok(c) = serde_json::from_slice::<Coloring>(&data) {
            assert!(c.is_total());
            let back: Coloring = serde_json::from_str(&c.to_json()).unwrap();
            assert_eq!(back, c);
            accepted += 1;
        }
    }
    assert_eq!(accepted, 1);
}

#[test]
fn gen_spec_seeds() {
    for (name, data) in seeds("gen_spec_json") {
        let spec: GenSpec = serde_json::from_slice(&data).unwrap_or_else(|e| panic!("{name}: {e}"));
        let back: GenSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        let _ = spec.generate();
    }
}
