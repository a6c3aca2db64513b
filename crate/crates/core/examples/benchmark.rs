//! Time keypoint inference and the full image-to-identity path.
//!
//! ```text
//! cargo run -p dfr --example benchmark --release
//! ```

use dfr::data::generate_dataset;
use dfr::eval::{fps_benchmark, MonotonicClock};
use dfr::geometry::FeatureSchema;
use dfr::keypoint::{build_model, ModelConfig};
use dfr::pipeline::annotation_features;
use dfr::svm::{train_svm, SvmParams};

fn main() -> dfr::Result<()> {
    let schema = FeatureSchema::default_v1();
    let data = generate_dataset(5, 12, 1, 96)?;
    // timing does not depend on trained weights
    let model = build_model(&ModelConfig::desk(1))?;
    let features: Vec<Vec<f64>> = data.iter().map(|s| annotation_features(s, &schema).values).collect();
    let labels: Vec<u32> = data.iter().map(|s| s.subject_id()).collect();
    let svm = train_svm(&features, &labels, &SvmParams::default())?;
    let frames: Vec<_> = data.iter().map(|s| s.image.clone()).collect();
    let report = fps_benchmark(&model, &schema, &svm, &frames, 10, &mut MonotonicClock::default())?;
    print!("{report}");
    Ok(())
}
