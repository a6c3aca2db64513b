//! Ratio and angle features from keypoints, and how disguises mask them.
//!
//! ```text
//! cargo run -p dfr --example geometry_features
//! ```

use dfr::data::Disguise;
use dfr::geometry::{extract_features, FeatureSchema};
use dfr::keypoints::{canonical_template, Point};

fn main() {
    let schema = FeatureSchema::default_v1();
    let face = canonical_template();
    let plain = extract_features(&face, &schema);

    // rotate by 30 degrees, scale by 80 and shift; the features stay put
    let (s, c) = 30f64.to_radians().sin_cos();
    let moved = face.map_points(|p| Point::new(80.0 * (c * p.x - s * p.y) + 40.0, 80.0 * (s * p.x + c * p.y) + 55.0));
    let moved = extract_features(&moved, &schema);

    println!("{:<48} {:>10} {:>10}", "feature", "template", "moved");
    for ((d, a), b) in schema.features.iter().zip(&plain.values).zip(&moved.values) {
        println!("{:<48} {a:>10.5} {b:>10.5}", d.label());
    }

    for id in 1..=10u8 {
        let disguise = Disguise::from_id(id).unwrap().unwrap();
        let mut k = face.clone();
        k.visible = Disguise::visibility(Some(disguise));
        let f = extract_features(&k, &schema);
        let masked = f.mask.iter().filter(|m| !**m).count();
        println!("{:<20} masks {masked:>2} of {} features", disguise.name(), f.len());
    }
}
