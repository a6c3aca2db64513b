//! Train the desk keypoint network on a small synthetic set and report
//! per-keypoint pixel errors on held-out images.
//!
//! ```text
//! cargo run -p dfr --example train_keypoints --release -- 30
//! ```

use dfr::data::{generate_dataset, split};
use dfr::eval::{default_tau, keypoint_errors};
use dfr::keypoint::{build_model, predict_keypoints, train_with_progress, ModelConfig, TrainOptions};
use dfr::keypoints::KEYPOINT_NAMES;

fn main() -> dfr::Result<()> {
    let epochs = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(30);
    let size = 64;
    let data = generate_dataset(4, 20, 3, size)?;
    let (train_set, test_set) = split(&data, |s| s.subject_id(), 0.875, 3)?;

    let mut config = ModelConfig::desk(3);
    config.input_size = size;
    let model = build_model(&config)?;
    println!("{} parameters, {} training images", model.network.param_count(), train_set.len());
    let options = TrainOptions { epochs, batch_size: 10, ..Default::default() };
    let model = train_with_progress(model, &train_set, &options, |e| {
        if e.epoch % 5 == 0 || e.epoch == 1 {
            println!("epoch {:>3}  loss {:.5}", e.epoch, e.loss);
        }
    })?;

    let preds = test_set.iter().map(|s| predict_keypoints(&model, &s.image)).collect::<dfr::Result<Vec<_>>>()?;
    let gts: Vec<_> = test_set.iter().map(|s| s.annotation.keypoints.clone()).collect();
    let report = keypoint_errors(&preds, &gts, default_tau(size))?;
    for (name, e) in KEYPOINT_NAMES.iter().zip(&report.mean_error) {
        println!("{name:<18} {e:6.2} px");
    }
    println!("MAE {:.3} px, {:.1}% within {:.2} px", report.mae, 100.0 * report.accuracy, report.tau);
    Ok(())
}
