use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use eqtree::io::parse_edge_list;
use eqtree_cli::experiment::{run, to_csv, ExperimentConfig, KPolicy, SolverKind, CSV_VERSION_LINE, TIMING_COLUMNS};
use serde_json::Value;
use tempfile::TempDir;

fn eqtree(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqtree"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn solve_path_ten() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        code(&eqtree(
            &["gen", "--kind", "path", "--n", "10", "--out", "p.txt"],
            dir.path()
        )),
        0
    );
    let o = eqtree(&["solve", "p.txt", "--k", "3"], dir.path());
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["status"], "colored");
    let mut sizes: Vec<u64> = v["coloring"]["class_sizes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![3, 3, 4]);
    assert_eq!(v["verification"]["equitable_ok"], true);

    fs::write(dir.path().join("c.json"), &o.stdout).unwrap();
    let check = eqtree(&["verify", "p.txt", "c.json"], dir.path());
    assert_eq!(code(&check), 0);
}

#[test]
fn stuck_and_fallback_on_k99() {
    let dir = TempDir::new().unwrap();
    eqtree(
        &[
            "gen",
            "--kind",
            "complete-bipartite",
            "--a",
            "9",
            "--b",
            "9",
            "--out",
            "k.txt",
        ],
        dir.path(),
    );

    let o = eqtree(&["solve", "k.txt", "--k", "3", "--out", "r.json"], dir.path());
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(report["status"], "stuck");
    let snap = report["report"]["snapshot_path"].as_str().unwrap();
    let snapshot: Value = serde_json::from_str(&fs::read_to_string(dir.path().join(snap)).unwrap()).unwrap();
    assert!(snapshot["colors"].is_array());

    let o = eqtree(&["solve", "k.txt", "--k", "3", "--fallback-exact"], dir.path());
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["status"], "unsat");

    let o = eqtree(&["solve", "k.txt", "--k", "5", "--fallback-exact"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["solver"], "exact");

    let o = eqtree(&["exact", "k.txt", "--mode", "va-eq"], dir.path());
    assert_eq!(json(&o)["value"], 2);
    let o = eqtree(&["exact", "k.txt", "--mode", "va-eq-star"], dir.path());
    assert_eq!(json(&o)["value"], 4);
}

#[test]
fn exact_on_gadget_and_forest() {
    let dir = TempDir::new().unwrap();
    eqtree(
        &[
            "gen",
            "--spec",
            r#"{"kind":"treewidth-gadget","d":4,"s_count":5}"#,
            "--format",
            "dimacs",
            "--out",
            "g.col",
        ],
        dir.path(),
    );
    let o = eqtree(&["exact", "g.col", "--k", "3"], dir.path());
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "UNSAT");

    eqtree(&["gen", "--kind", "path", "--n", "9", "--out", "p.txt"], dir.path());
    let o = eqtree(&["exact", "p.txt", "--mode", "va-eq-star"], dir.path());
    assert_eq!(json(&o)["value"], 1);

    let o = eqtree(&["exact", "g.col", "--k", "3", "--budget-nodes", "5"], dir.path());
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["verdict"], "INDETERMINATE");
}

#[test]
fn errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&eqtree(&["solve", "missing.txt"], dir.path())), 2);
    fs::write(dir.path().join("bad.txt"), "3 1\n0 7\n").unwrap();
    assert_eq!(code(&eqtree(&["solve", "bad.txt"], dir.path())), 2);
    fs::write(dir.path().join("ok.txt"), "3 1\n0 1\n").unwrap();
    assert_eq!(code(&eqtree(&["solve", "ok.txt", "--k", "0"], dir.path())), 2);
    assert_eq!(code(&eqtree(&["exact", "ok.txt"], dir.path())), 2);
    assert_eq!(code(&eqtree(&["solve"], dir.path())), 2);
    assert_eq!(code(&eqtree(&["--help"], dir.path())), 0);
}

#[test]
fn verify_rejects_bad_coloring() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("c3.txt"), "3 3\n0 1\n1 2\n2 0\n").unwrap();
    fs::write(
        dir.path().join("one.json"),
        r#"{"k":1,"assignment":[1,1,1],"class_sizes":[3]}"#,
    )
    .unwrap();
    let o = eqtree(&["verify", "c3.txt", "one.json"], dir.path());
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["forest"][0]["cycle"], serde_json::json!([0, 1, 2]));
    fs::write(
        dir.path().join("lie.json"),
        r#"{"k":1,"assignment":[1,1,1],"class_sizes":[2]}"#,
    )
    .unwrap();
    assert_eq!(code(&eqtree(&["verify", "c3.txt", "lie.json"], dir.path())), 2);
}

#[test]
fn measure_reports_degeneracy() {
    let dir = TempDir::new().unwrap();
    eqtree(
        &[
            "gen",
            "--kind",
            "random-d-degenerate",
            "--n",
            "200",
            "--d",
            "3",
            "--attach",
            "skewed",
            "--seed",
            "2",
            "--out",
            "g.txt",
        ],
        dir.path(),
    );
    let text = fs::read_to_string(dir.path().join("g.txt")).unwrap();
    assert_eq!(parse_edge_list(&text).unwrap().graph.vertex_count(), 200);
    let v = json(&eqtree(&["measure", "g.txt"], dir.path()));
    assert_eq!(v["degeneracy"], 3);
    assert_eq!(v["bound_violations"], 0);
}

fn strip_timing(csv_text: &str) -> String {
    let mut lines = csv_text.lines();
    let version = lines.next().unwrap();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let keep: Vec<usize> = (0..header.len())
        .filter(|&i| !TIMING_COLUMNS.contains(&header[i]))
        .collect();
    let mut out = vec![version.to_string()];
    for line in csv_text.lines().skip(1) {
        if line.starts_with('#') {
            out.push(line.to_string());
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        out.push(keep.iter().map(|&i| cells[i]).collect::<Vec<_>>().join(","));
    }
    out.join("\n")
}

fn small_config() -> ExperimentConfig {
    ExperimentConfig::from_json(
        r#"{
            "generators": [
                {"kind": "random-d-degenerate", "n": 120, "d": 2, "attach": "skewed", "min_max_degree": 20},
                {"kind": "cycle", "n": 2},
                {"kind": "complete-bipartite", "a": 9, "b": 9}
            ],
            "seeds": {"start": 5, "count": 12},
            "k_policy": {"policy": "sweep", "from": -1, "to": 1, "relative": true}
        }"#,
    )
    .unwrap()
}

#[test]
fn experiment_rows_are_ordered_and_reproducible() {
    let mut config = small_config();
    config.threads = 1;
    let serial = run(&config).unwrap();
    config.threads = 4;
    let parallel = run(&config).unwrap();
    assert_eq!(serial.len(), 12 * 3 + 1 + 3);
    for (i, row) in parallel.iter().enumerate() {
        assert_eq!(row.index, i);
    }
    let a = to_csv(&serial).unwrap();
    let b = to_csv(&parallel).unwrap();
    assert!(a.starts_with(CSV_VERSION_LINE));
    assert_eq!(strip_timing(&a), strip_timing(&b));
    // The invalid cycle is recorded, not fatal.
    assert!(serial.iter().any(|r| r.outcome == "error" && r.kind == "cycle"));
    let in_regime: Vec<_> = serial
        .iter()
        .filter(|r| r.kind == "random-d-degenerate" && r.k >= (r.max_degree + 2) / 2)
        .collect();
    assert_eq!(in_regime.len(), 24);
    assert!(in_regime.iter().all(|r| r.success && r.verified));
    assert!(a.trim_end().lines().last().unwrap().starts_with("# summary: rows=40"));
}

#[test]
fn experiment_command_writes_csv() {
    let dir = TempDir::new().unwrap();
    let config = r#"{
        "generators": [
            {"kind": "treewidth-gadget", "d": 3, "s_count": 3},
            {"kind": "treewidth-gadget", "d": 4, "s_count": 5}
        ],
        "k_policy": {"policy": "degeneracy", "offset": -1},
        "solver": "exact",
        "output": "gadgets.csv"
    }"#;
    fs::write(dir.path().join("cfg.json"), config).unwrap();
    let o = eqtree(&["experiment", "cfg.json"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("gadgets.csv")).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.contains(",unsat,")));
}

#[test]
fn config_round_trips() {
    let mut config = small_config();
    config.solver = SolverKind::Exact;
    config.k_policy = KPolicy::Fixed { k: 3 };
    let text = serde_json::to_string(&config).unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), config);
    assert!(ExperimentConfig::from_json(r#"{"generators": [], "seeds": {"count": 1}}"#).is_err());
    assert!(ExperimentConfig::from_json(r#"{"generators": [{"kind":"path","n":3}], "bogus": 1}"#).is_err());
}

#[test]
fn experiment_config_seeds() {
    let dir = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/experiment_config");
    let mut accepted = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let text = fs::read_to_string(entry.unwrap().path()).unwrap();
        if let Ok(config) = ExperimentConfig::from_json(&text) {
            let back = ExperimentConfig::from_json(&serde_json::to_string(&config).unwrap()).unwrap();
            assert_eq!(back, config);
            accepted += 1;
        }
    }
    assert_eq!(accepted, 3);
}
