//! The full desk run: synthesize 10 subjects x 40 faces, train the keypoint
//! network, train the SVM on predicted-keypoint features and report subject
//! accuracy per disguise on the held-out split.
//!
//! ```text
//! cargo run -p dfr --example end_to_end --release            # 150 epochs, ~10 min
//! cargo run -p dfr --example end_to_end --release -- 20 out  # quick look, reports in ./out
//! ```

use std::path::PathBuf;
use std::time::Instant;

use dfr::data::{generate_dataset, split};
use dfr::eval::{classification_report, default_tau, emit_report, keypoint_errors, ReportFormat};
use dfr::geometry::FeatureSchema;
use dfr::keypoint::{build_model, predict_keypoints, train_with_progress, ModelConfig, TrainOptions};
use dfr::pipeline::{predicted_feature_rows, predicted_features};
use dfr::svm::{predict, train_svm, SvmParams};

fn main() -> dfr::Result<()> {
    let mut args = std::env::args().skip(1);
    let epochs = args.next().and_then(|a| a.parse().ok()).unwrap_or(150);
    let out: Option<PathBuf> = args.next().map(PathBuf::from);
    let seed = 7;
    let started = Instant::now();

    let data = generate_dataset(10, 40, seed, 96)?;
    let (train_set, test_set) = split(&data, |s| s.subject_id(), 0.875, seed)?;
    println!("{} training and {} test images", train_set.len(), test_set.len());

    let options = TrainOptions { epochs, batch_size: 5, ..Default::default() };
    let model = train_with_progress(build_model(&ModelConfig::desk(seed))?, &train_set, &options, |e| {
        if e.epoch % 25 == 0 || e.epoch == 1 {
            println!("epoch {:>3}  loss {:.5}  {:.0}s", e.epoch, e.loss, started.elapsed().as_secs_f64());
        }
    })?;

    let schema = FeatureSchema::default_v1();
    let labels: Vec<u32> = train_set.iter().map(|s| s.subject_id()).collect();
    let svm = train_svm(&predicted_feature_rows(&model, &schema, &train_set)?, &labels, &SvmParams { seed, ..Default::default() })?;

    let mut preds = Vec::new();
    let mut guesses = Vec::new();
    for s in &test_set {
        preds.push(predict_keypoints(&model, &s.image)?);
        guesses.push(predict(&svm, &predicted_features(&model, &schema, s)?.values)?.label);
    }
    let gts: Vec<_> = test_set.iter().map(|s| s.annotation.keypoints.clone()).collect();
    let keypoints = keypoint_errors(&preds, &gts, default_tau(96))?;
    let truth: Vec<u32> = test_set.iter().map(|s| s.subject_id()).collect();
    let disguises: Vec<u8> = test_set.iter().map(|s| s.annotation.disguise_id).collect();
    let report = classification_report(&guesses, &truth, &disguises)?;

    println!("keypoint MAE {:.3} px, {:.1}% within {:.2} px", keypoints.mae, 100.0 * keypoints.accuracy, keypoints.tau);
    println!("subject accuracy {:.1}% ({}/{})", 100.0 * report.accuracy, report.correct, report.total);
    for d in &report.per_disguise {
        if let Some(a) = d.accuracy {
            println!("  {:<18} {:5.1}% of {}", d.name, 100.0 * a, d.count);
        }
    }
    println!("scarf no better than best other: {}", report.scarf_no_better_than_best_other());
    println!("total {:.0}s", started.elapsed().as_secs_f64());

    if let Some(dir) = out {
        std::fs::create_dir_all(&dir).map_err(|e| dfr::Error::Io { path: dir.clone(), source: e })?;
        for (stem, r) in [("keypoint_errors", &keypoints as &dyn dfr::eval::Report), ("classification", &report)] {
            emit_report(r, &dir.join(format!("{stem}.csv")), ReportFormat::Csv)?;
            emit_report(r, &dir.join(format!("{stem}.svg")), ReportFormat::Svg)?;
        }
        println!("reports in {}", dir.display());
    }
    Ok(())
}
