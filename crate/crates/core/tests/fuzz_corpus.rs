//! Replays the checked-in fuzz corpus through the same entry points as the
//! fuzz targets.

use std::path::PathBuf;

use igs_core::io::{from_json_str, GeometryDocument, SmoothSpaceDocument, SplineDocument, TrianglePatchDocument};
use igs_core::scalar::{format_rational, parse_rational, parse_rational_list, Rational};

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<String> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read(e.unwrap().path()).unwrap())
        .filter_map(|b| String::from_utf8(b).ok())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn parse_rational_seeds() {
    for text in seeds("parse_rational") {
        if let Ok(r) = parse_rational(&text) {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
        let _ = parse_rational_list(&text);
    }
}

#[test]
fn spline_document_seeds() {
    let mut parsed = 0;
    for text in seeds("spline_document") {
        let Ok(doc) = from_json_str::<SplineDocument>(&text) else { continue };
        if let Ok(f) = doc.to_spline::<Rational>() {
            let back = SplineDocument::from_spline(&f).unwrap();
            assert_eq!(back.to_spline::<Rational>().unwrap(), f);
            parsed += 1;
        }
        let _ = doc.to_spline::<f64>();
    }
    assert!(parsed > 0);
}

#[test]
fn geometry_document_seeds() {
    let mut parsed = 0;
    for text in seeds("geometry_document") {
        let Ok(doc) = from_json_str::<GeometryDocument>(&text) else { continue };
        if let Ok(g) = doc.to_geometry::<f64>() {
            let _ = g.classify_singularity();
            let _ = g.eval(&0.5, &0.5);
            parsed += 1;
        }
    }
    assert!(parsed > 0);
}

#[test]
fn triangle_patch_document_seeds() {
    let mut parsed = 0;
    for text in seeds("triangle_patch_document") {
        let Ok(doc) = from_json_str::<TrianglePatchDocument>(&text) else { continue };
        if let Ok(p) = doc.to_patch_a::<Rational>() {
            assert_eq!(TrianglePatchDocument::from_patch_a(&p).unwrap().to_patch_a::<Rational>().unwrap(), p);
        }
        if doc.to_patch_a::<f64>().is_ok() || doc.to_patch_b::<f64>().is_ok() {
            parsed += 1;
        }
    }
    assert!(parsed > 0);
}

#[test]
fn smooth_space_document_seeds() {
    for text in seeds("smooth_space_document") {
        let Ok(doc) = from_json_str::<SmoothSpaceDocument>(&text) else { continue };
        let sm = doc.to_smooth_space().unwrap();
        assert_eq!(SmoothSpaceDocument::from_smooth_space(&sm).to_smooth_space().unwrap().basis, sm.basis);
    }
}
