//! Regression snapshots. Run with `DFR_BLESS=1` to rewrite them after an
//! intended change.

use dfr::data::{generate_dataset, generate_subjects};
use dfr::geometry::{extract_features, FeatureSchema};
use dfr::keypoints::canonical_template;
use std::path::PathBuf;

fn check(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("DFR_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "{name} drifted; rerun with DFR_BLESS=1 if intended");
}

#[test]
fn subject_feature_vectors() {
    let schema = FeatureSchema::default_v1();
    let mut csv = String::from("subject");
    for d in &schema.features {
        csv.push(',');
        csv.push_str(&d.label());
    }
    csv.push('\n');
    let template = extract_features(&canonical_template(), &schema);
    let rows = std::iter::once(("template".to_string(), template)).chain(
        generate_subjects(4, 7)
            .unwrap()
            .into_iter()
            .map(|s| (s.subject_id.to_string(), extract_features(&s.keypoints, &schema))),
    );
    for (label, f) in rows {
        csv.push_str(&label);
        for v in &f.values {
            csv.push_str(&format!(",{v:.9}"));
        }
        csv.push('\n');
    }
    check("subject_features.csv", &csv);
}

#[test]
fn synthetic_annotations() {
    let samples = generate_dataset(2, 3, 7, 64).unwrap();
    let mut out = Vec::new();
    let annotations: Vec<_> = samples.iter().map(|s| s.annotation.clone()).collect();
    dfr::data::write_annotations(&annotations, &mut out).unwrap();
    check("annotations_2x3_seed7.csv", &String::from_utf8(out).unwrap());
}
