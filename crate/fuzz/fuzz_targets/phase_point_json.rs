#![no_main]

use anyon_orbits::observables::energy;
use anyon_orbits::symplectic::PhasePoint;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(w) = serde_json::from_slice::<PhasePoint>(data) {
        let _ = energy(&w);
        let text = serde_json::to_string(&w).unwrap();
        let back: PhasePoint = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
    }
});
