#![no_main]

use anyon_orbits::config::{parse_grid, MAX_GRID_POINTS};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(grid) = parse_grid(text) {
            assert!(!grid.is_empty() && grid.len() <= MAX_GRID_POINTS);
            assert!(grid.iter().all(|x| x.is_finite()));
        }
    }
});
