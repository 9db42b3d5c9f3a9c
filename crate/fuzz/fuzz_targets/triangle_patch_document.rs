#![no_main]

use igs_core::io::{from_json_str, TrianglePatchDocument};
use igs_core::scalar::Rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = from_json_str::<TrianglePatchDocument>(text) else { return };
    if let Ok(p) = doc.to_patch_a::<Rational>() {
        assert_eq!(TrianglePatchDocument::from_patch_a(&p).unwrap().to_patch_a::<Rational>().unwrap(), p);
    }
    let _ = doc.to_patch_b::<f64>();
});
