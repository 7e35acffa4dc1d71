#![no_main]

use eqtree::Coloring;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(c) = serde_json::from_slice::<Coloring>(data) {
        // Anything accepted is total, in range and size-consistent.
        assert!(c.is_total());
        assert_eq!(c.class_sizes().iter().sum::<usize>(), c.len());
        let back: Coloring = serde_json::from_str(&c.to_json()).expect("round trip");
        assert_eq!(back, c);
    }
});
