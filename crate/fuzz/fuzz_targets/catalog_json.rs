#![no_main]

use anyon_orbits::families::FamilyCatalog;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = FamilyCatalog::from_json(text);
    }
});
