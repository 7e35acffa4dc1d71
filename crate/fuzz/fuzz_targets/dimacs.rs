#![no_main]

use eqtree::io::{parse_dimacs, write_dimacs};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(built) = parse_dimacs(text) {
        let again = parse_dimacs(&write_dimacs(&built.graph)).expect("writer output parses");
        assert_eq!(again.graph, built.graph);
    }
});
