#![no_main]

use igs_core::io::{from_json_str, SmoothSpaceDocument};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = from_json_str::<SmoothSpaceDocument>(text) else { return };
    if let Ok(sm) = doc.to_smooth_space() {
        assert_eq!(SmoothSpaceDocument::from_smooth_space(&sm).to_smooth_space().unwrap().basis, sm.basis);
    }
});
