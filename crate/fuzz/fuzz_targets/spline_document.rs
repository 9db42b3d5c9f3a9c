#![no_main]

use igs_core::io::{from_json_str, SplineDocument};
use igs_core::scalar::Rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = from_json_str::<SplineDocument>(text) else { return };
    if let Ok(f) = doc.to_spline::<Rational>() {
        let back = SplineDocument::from_spline(&f).unwrap();
        assert_eq!(back.to_spline::<Rational>().unwrap(), f);
    }
    let _ = doc.to_spline::<f64>();
});
