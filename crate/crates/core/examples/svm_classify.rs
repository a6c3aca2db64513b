//! Identify subjects from annotated keypoint geometry with the one-vs-one SVM.
//!
//! ```text
//! cargo run -p dfr --example svm_classify --release
//! ```

use dfr::data::{generate_dataset, split};
use dfr::geometry::FeatureSchema;
use dfr::pipeline::annotation_features;
use dfr::svm::{predict, train_svm, KernelKind, SvmParams};

fn main() -> dfr::Result<()> {
    let schema = FeatureSchema::default_v1();
    let data = generate_dataset(10, 40, 7, 64)?;
    let (train_set, test_set) = split(&data, |s| s.subject_id(), 0.875, 7)?;
    let features = |set: &[dfr::data::Sample]| -> Vec<Vec<f64>> {
        set.iter().map(|s| annotation_features(s, &schema).values).collect()
    };
    let (x_train, x_test) = (features(&train_set), features(&test_set));
    let y_train: Vec<u32> = train_set.iter().map(|s| s.subject_id()).collect();

    for kernel in [KernelKind::Linear, KernelKind::Rbf] {
        let model = train_svm(&x_train, &y_train, &SvmParams { kernel, seed: 7, ..Default::default() })?;
        let mut correct = 0;
        for (x, s) in x_test.iter().zip(&test_set) {
            if predict(&model, x)?.label == s.subject_id() {
                correct += 1;
            }
        }
        println!(
            "{kernel:?}: {} machines, {} support vectors, {correct}/{} test faces identified",
            model.machines.len(),
            model.support_vector_count(),
            test_set.len()
        );
    }
    Ok(())
}
