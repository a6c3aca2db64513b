mod common;

use dfr::data::generate_dataset;
use dfr::eval::{default_tau, fps_benchmark, keypoint_errors, ScriptedClock, HISTOGRAM_EDGES};
use dfr::geometry::FeatureSchema;
use dfr::keypoint::{build_model, ModelConfig};
use dfr::keypoints::{canonical_template, KeypointSet, Point, KEYPOINT_COUNT};
use dfr::pipeline::annotation_features;
use dfr::svm::{train_svm, SvmParams};
use proptest::prelude::*;

fn faces(n: usize) -> impl Strategy<Value = (Vec<KeypointSet>, Vec<KeypointSet>)> {
    prop::collection::vec(
        (
            prop::collection::vec((-12.0f64..12.0, -12.0f64..12.0), KEYPOINT_COUNT),
            10.0f64..80.0,
        ),
        1..n,
    )
    .prop_map(|items| {
        let mut preds = Vec::new();
        let mut gts = Vec::new();
        for (offsets, scale) in items {
            let gt = canonical_template().map_points(|p| Point::new(100.0 + scale * p.x, 100.0 + scale * p.y));
            let mut pred = gt.clone();
            for (p, (dx, dy)) in pred.points.iter_mut().zip(offsets) {
                p.x += dx;
                p.y += dy;
            }
            preds.push(pred);
            gts.push(gt);
        }
        (preds, gts)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn report_matches_longhand_oracle((preds, gts) in faces(12), tau in 0.0f64..15.0) {
        let r = keypoint_errors(&preds, &gts, tau).unwrap();
        let o = common::metric_oracle(&preds, &gts, tau);
        prop_assert_eq!(r.samples, preds.len());
        for k in 0..KEYPOINT_COUNT {
            prop_assert!((r.mean_error[k] - o.per_keypoint[k]).abs() <= 1e-9);
            prop_assert_eq!(r.histogram[k].iter().sum::<u64>(), preds.len() as u64);
        }
        prop_assert!((r.mae - o.mae).abs() <= 1e-9);
        prop_assert!((r.accuracy - o.accuracy).abs() <= 1e-12);
        for w in r.curve.windows(2) {
            prop_assert!(w[0].1 <= w[1].1);
        }
    }
}

#[test]
fn histogram_edges_are_inclusive_below() {
    let gt = canonical_template();
    let mut pred = gt.clone();
    pred.points[0].x += 1.0;
    pred.points[1].x += 4.999;
    pred.points[2].y += 7.5;
    pred.points[3].y -= 25.0;
    let r = keypoint_errors(&[pred], &[gt], 5.0).unwrap();
    let bin = |k: usize| r.histogram[k].iter().position(|&c| c == 1).unwrap();
    assert_eq!(HISTOGRAM_EDGES[bin(0)], 1.0);
    assert_eq!(HISTOGRAM_EDGES[bin(1)], 4.0);
    assert_eq!(HISTOGRAM_EDGES[bin(2)], 7.5);
    assert_eq!(HISTOGRAM_EDGES[bin(3)], 20.0);
    assert_eq!(HISTOGRAM_EDGES[bin(4)], 0.0);
    assert_eq!(r.accuracy, 18.0 / 20.0);
}

#[test]
fn threshold_scales_with_input_size() {
    assert_eq!(default_tau(227), 5.0);
    assert!((default_tau(96) - 5.0 * 96.0 / 227.0).abs() < 1e-15);
}

#[test]
fn first_batch_is_discarded_and_clock_is_read_twice_per_batch() {
    let data = generate_dataset(2, 3, 1, 24).unwrap();
    let mut config = ModelConfig::desk(1);
    config.input_size = 32;
    let model = build_model(&config).unwrap();
    let schema = FeatureSchema::default_v1();
    let feats: Vec<Vec<f64>> = data.iter().map(|s| annotation_features(s, &schema).values).collect();
    let labels: Vec<u32> = data.iter().map(|s| s.subject_id()).collect();
    let svm = train_svm(&feats, &labels, &SvmParams::default()).unwrap();
    let frames: Vec<_> = data.iter().map(|s| s.image.clone()).collect();
    // three batches of two; warm-up batch takes 100 s and must not count
    let readings = vec![0.0, 100.0, 100.0, 101.0, 101.0, 102.5, 200.0, 299.0, 300.0, 300.5, 300.5, 301.0];
    let mut clock = ScriptedClock::new(readings);
    let r = fps_benchmark(&model, &schema, &svm, &frames, 2, &mut clock).unwrap();
    assert_eq!(r.frames, 4);
    assert_eq!(r.inference.wall_time, 2.5);
    assert_eq!(r.inference.fps, 4.0 / 2.5);
    assert_eq!(r.with_preprocessing.wall_time, 1.0);
    assert_eq!(r.with_preprocessing.fps, 4.0);
}
