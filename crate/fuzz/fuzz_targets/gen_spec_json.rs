#![no_main]

use eqtree::generators::GenSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<GenSpec>(data) else {
        return;
    };
    let back: GenSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
    assert_eq!(back, spec);
    // Only generate small instances; sizes come straight from the input.
    let small = match spec {
        GenSpec::RandomDDegenerate {
            n, d, min_max_degree, ..
        } => n <= 300 && d <= 8 && min_max_degree.is_none(),
        GenSpec::CompleteBipartite { a, b } => a + b <= 60,
        GenSpec::Complete { n } => n <= 40,
        GenSpec::Cycle { n } | GenSpec::Path { n } => n <= 1000,
        GenSpec::TreewidthGadget { d, s_count } => d + s_count <= 60,
    };
    if small {
        let _ = spec.generate();
    }
});
