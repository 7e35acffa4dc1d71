#![no_main]

use eqtree::io::{parse_edge_list, write_edge_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(built) = parse_edge_list(text) {
        // Writing and re-reading gives the same graph.
        let again = parse_edge_list(&write_edge_list(&built.graph)).expect("writer output parses");
        assert_eq!(again.graph, built.graph);
        assert_eq!(again.duplicate_edges, 0);
    }
});
