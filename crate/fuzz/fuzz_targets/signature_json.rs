#![no_main]

use anyon_orbits::observables::OrientationSignature;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(sig) = serde_json::from_slice::<OrientationSignature>(data) {
        let text = serde_json::to_string(&sig).unwrap();
        let back: OrientationSignature = serde_json::from_str(&text).unwrap();
        assert_eq!(back, sig);
    }
});
