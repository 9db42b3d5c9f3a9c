#![no_main]

use igs_core::io::{from_json_str, GeometryDocument};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = from_json_str::<GeometryDocument>(text) else { return };
    if let Ok(g) = doc.to_geometry::<f64>() {
        let _ = g.classify_singularity();
        let _ = g.eval(&0.5, &0.5);
    }
});
