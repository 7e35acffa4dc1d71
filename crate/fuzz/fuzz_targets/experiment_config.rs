#![no_main]

use eqtree_cli::experiment::ExperimentConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = ExperimentConfig::from_json(text) {
        let json = serde_json::to_string(&config).unwrap();
        let back = ExperimentConfig::from_json(&json).expect("serialized config parses");
        assert_eq!(back.generators, config.generators);
        assert_eq!(back.k_policy, config.k_policy);
    }
});
