//! Acceptance criteria. Runs as a plain binary so every criterion prints one
//! PASS or FAIL line; exits nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dfr::data::{generate_dataset, split, Disguise, Sample};
use dfr::eval::{classification_report, fps_benchmark, keypoint_errors, to_csv, ScriptedClock, Timing};
use dfr::geometry::{angle_between_lines, extract_features, slope, FeatureSchema};
use dfr::keypoint::{build_model, predict_keypoints, read_model, train, write_model, ModelConfig, TrainOptions};
use dfr::keypoints::{canonical_template, KeypointSet, Point};
use dfr::nn::{backward, conv2d, dense, finite_diff_grad, maxpool2d, Tensor};
use dfr::pipeline::{annotation_features, predicted_feature_rows, predicted_features};
use dfr::svm::{brute_force_dual, gram_matrix, kernel_eval, solve_binary, train_svm, SvmParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gradient_check() -> Outcome {
    let net = common::gradcheck_network(11);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let input = Tensor::from_fn(&[1, 32, 32], |_| rng.gen_range(-1.0..1.0));
    let target: Vec<f64> = (0..40).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let eps = 1e-4;
    let analytic = backward(&net, &input, &target).map_err(|e| e.to_string())?;
    let numeric = finite_diff_grad(&net, &input, &target, eps).map_err(|e| e.to_string())?;
    let base = net.activation_pattern(&input, &target).map_err(|e| e.to_string())?;
    let mut probe = net.clone();
    let (mut checked, mut kinks, mut worst) = (0usize, 0usize, 0.0f64);
    for (pi, (a, n)) in analytic.iter().zip(&numeric).enumerate() {
        for j in 0..a.len() {
            let original = probe.params().nth(pi).unwrap().data()[j];
            let mut crosses = false;
            for delta in [eps, -eps] {
                probe.params_mut().nth(pi).unwrap().data_mut()[j] = original + delta;
                crosses |= probe.activation_pattern(&input, &target).map_err(|e| e.to_string())? != base;
            }
            probe.params_mut().nth(pi).unwrap().data_mut()[j] = original;
            if crosses {
                kinks += 1;
                continue;
            }
            let (x, y) = (a.data()[j], n.data()[j]);
            let rel = (x - y).abs() / x.abs().max(y.abs()).max(1e-7);
            worst = worst.max(rel);
            checked += 1;
        }
    }
    ensure(worst <= 1e-3, || format!("max relative error {worst:.3e} over {checked} parameters"))?;
    ensure(checked > 0, || "every parameter sat at a kink".into())?;
    Ok(format!("{checked} parameters, max relative error {worst:.2e}, {kinks} at kinks skipped"))
}

fn layer_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let c = rng.gen_range(1..4);
        let h = rng.gen_range(3..13);
        let w = rng.gen_range(3..13);
        let k = rng.gen_range(1..=h.min(w).min(5));
        let stride = rng.gen_range(1..3);
        let pad = rng.gen_range(0..=k / 2);
        let co = rng.gen_range(1..4);
        let x: Vec<f64> = (0..c * h * w).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let kv: Vec<f64> = (0..co * c * k * k).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..co).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let input = Tensor::new(vec![c, h, w], x.clone()).unwrap();
        let got = conv2d(&input, &Tensor::new(vec![co, c, k, k], kv.clone()).unwrap(), &b, stride, pad)
            .map_err(|e| e.to_string())?;
        let (want, ho, wo) = common::conv2d_ref(&x, (c, h, w), &kv, (co, k), &b, stride, pad);
        ensure(got.shape() == [co, ho, wo], || format!("conv shape {:?}", got.shape()))?;
        for (g, r) in got.data().iter().zip(&want) {
            worst = worst.max((g - r).abs());
        }

        let size = rng.gen_range(1..=h.min(w).min(3));
        let ps = rng.gen_range(1..=size);
        let (pooled, _) = maxpool2d(&input, size, ps).map_err(|e| e.to_string())?;
        let want = common::maxpool_ref(&x, (c, h, w), size, ps);
        ensure(pooled.len() == want.len(), || "pool length".into())?;
        for (g, r) in pooled.data().iter().zip(&want) {
            worst = worst.max((g - r).abs());
        }

        let (m, n) = (rng.gen_range(1..20), rng.gen_range(1..40));
        let xv: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let wv: Vec<f64> = (0..m * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let bv: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let got = dense(&xv, &Tensor::new(vec![m, n], wv.clone()).unwrap(), &bv).map_err(|e| e.to_string())?;
        for (g, r) in got.data().iter().zip(common::dense_ref(&xv, &wv, (m, n), &bv)) {
            worst = worst.max((g - r).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("max deviation {worst:.3e}"))?;
    Ok(format!("100 random shapes per layer, max deviation {worst:.1e}"))
}

fn metric_arithmetic() -> Outcome {
    let gt = canonical_template().map_points(|p| Point::new(100.0 + 40.0 * p.x, 100.0 + 40.0 * p.y));
    let mut pred = gt.clone();
    pred.points[7] = Point::new(pred.points[7].x + 3.0, pred.points[7].y + 4.0);
    let r = keypoint_errors(&[pred.clone()], std::slice::from_ref(&gt), 5.0).map_err(|e| e.to_string())?;
    ensure(r.mean_error[7] == 5.0, || format!("keypoint error {}", r.mean_error[7]))?;
    ensure(r.keypoint_mae[7] == 3.5, || format!("keypoint MAE {}", r.keypoint_mae[7]))?;
    ensure(r.mean_error.iter().enumerate().all(|(k, &e)| k == 7 || e == 0.0), || "other errors nonzero".into())?;
    let o = common::metric_oracle(&[pred], &[gt], 5.0);
    ensure(o.mae == r.mae && o.per_keypoint[7] == 5.0, || "oracle disagrees".into())?;
    Ok("offset (3,4): error 5, MAE 3.5".into())
}

fn geometry_cases() -> Outcome {
    let p = Point::new;
    let a45 = angle_between_lines((p(0.0, 0.0), p(1.0, 1.0)), (p(0.0, 0.0), p(1.0, 0.0))).map_err(|e| e.to_string())?;
    let a0 = angle_between_lines((p(0.0, 0.0), p(2.0, 1.0)), (p(5.0, 5.0), p(9.0, 7.0))).map_err(|e| e.to_string())?;
    let a90 = angle_between_lines((p(0.0, 0.0), p(0.0, 1.0)), (p(0.0, 0.0), p(1.0, 0.0))).map_err(|e| e.to_string())?;
    ensure((a45 - 45.0).abs() <= 1e-9 && a0.abs() <= 1e-9 && (a90 - 90.0).abs() <= 1e-9, || {
        format!("angles {a45} {a0} {a90}")
    })?;
    ensure(slope(p(0.0, 0.0), p(2.0, 2.0)) == Some(1.0), || "slope 45".into())?;
    ensure(slope(p(0.0, 5.0), p(3.0, 5.0)) == Some(0.0), || "slope 0".into())?;
    ensure(slope(p(1.0, 0.0), p(1.0, 9.0)).is_none(), || "vertical slope".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut done, mut worst) = (0, 0.0f64);
    while done < 1000 {
        let a = (common::random_point(&mut rng, 10.0), common::random_point(&mut rng, 10.0));
        let b = (common::random_point(&mut rng, 10.0), common::random_point(&mut rng, 10.0));
        let Some(reference) = common::slope_formula_angle(a, b) else { continue };
        let got = angle_between_lines(a, b).map_err(|e| e.to_string())?;
        worst = worst.max((got - reference).abs());
        done += 1;
    }
    ensure(worst <= 1e-9, || format!("slope formula deviation {worst:.3e}"))?;
    Ok(format!("45/0/90 exact, 1000 line pairs within {worst:.1e} deg"))
}

fn similarity_invariance() -> Outcome {
    let schema = FeatureSchema::default_v1();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let mut face = canonical_template();
        for q in face.points.iter_mut() {
            q.x += rng.gen_range(-0.1..0.1);
            q.y += rng.gen_range(-0.1..0.1);
        }
        for v in face.visible.iter_mut() {
            *v = rng.gen_bool(0.9);
        }
        let scale = rng.gen_range(0.1..50.0);
        let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let t = (rng.gen_range(-500.0..500.0), rng.gen_range(-500.0..500.0));
        let moved = face.map_points(|q| common::similarity(q, scale, theta, t));
        let a = extract_features(&face, &schema);
        let b = extract_features(&moved, &schema);
        ensure(a.mask == b.mask, || "mask changed".into())?;
        for (x, y) in a.values.iter().zip(&b.values) {
            worst = worst.max((x - y).abs());
        }
    }
    ensure(worst <= 1e-9, || format!("max feature change {worst:.3e}"))?;
    Ok(format!("1000 transforms, max feature change {worst:.1e}"))
}

fn svm_oracle() -> Outcome {
    let mut lines = Vec::new();
    for (name, rows, y, kernel, c) in common::svm_instances() {
        if rows.len() > 5 {
            return Err(format!("{name}: more than five samples"));
        }
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let gram = gram_matrix(&refs, &kernel);
        let smo = solve_binary(&gram, &y, c, 1e-9, 100_000);
        let grid = brute_force_dual(&rows, &y, &kernel, c, common::oracle_steps(rows.len())).map_err(|e| e.to_string())?;
        let smo_obj = smo.objective(&gram, &y);
        let tol = common::oracle_tolerance(rows.len(), c, &gram, grid.step);
        ensure(smo_obj >= grid.objective - 1e-12, || format!("{name}: SMO {smo_obj} below grid {}", grid.objective))?;
        ensure(smo_obj - grid.objective <= tol, || format!("{name}: objectives {smo_obj} vs {}", grid.objective))?;
        for (i, r) in rows.iter().enumerate() {
            let f_smo: f64 = rows
                .iter()
                .zip(&y)
                .zip(&smo.alpha)
                .map(|((x, yi), a)| a * yi * kernel_eval(x, r, &kernel))
                .sum::<f64>()
                + smo.bias;
            let f_grid = grid.decision(&rows, &y, &kernel, r);
            ensure((f_smo >= 0.0) == (f_grid >= 0.0), || format!("{name}: point {i} decisions {f_smo} vs {f_grid}"))?;
        }
        lines.push(format!("{name} gap {:.1e}", smo_obj - grid.objective));
    }
    Ok(lines.join(", "))
}

fn desk_run() -> Result<(Vec<Sample>, Vec<Sample>, dfr::keypoint::KeypointModel), String> {
    let data = generate_dataset(10, 40, 7, 96).map_err(|e| e.to_string())?;
    let (train_set, test_set) = split(&data, |s| s.subject_id(), 0.875, 7).map_err(|e| e.to_string())?;
    let model = build_model(&ModelConfig::desk(7)).map_err(|e| e.to_string())?;
    let options = TrainOptions { epochs: 150, batch_size: 5, ..Default::default() };
    let model = train(model, &train_set, &options).map_err(|e| e.to_string())?;
    Ok((train_set, test_set, model))
}

fn end_to_end() -> Outcome {
    let (train_set, test_set, model) = desk_run()?;
    let schema = FeatureSchema::default_v1();
    let features = predicted_feature_rows(&model, &schema, &train_set).map_err(|e| e.to_string())?;
    let labels: Vec<u32> = train_set.iter().map(|s| s.subject_id()).collect();
    let svm = train_svm(&features, &labels, &SvmParams { seed: 7, ..Default::default() }).map_err(|e| e.to_string())?;
    let mut predicted = Vec::new();
    for s in &test_set {
        let fv = predicted_features(&model, &schema, s).map_err(|e| e.to_string())?;
        predicted.push(dfr::svm::predict(&svm, &fv.values).map_err(|e| e.to_string())?.label);
    }
    let truth: Vec<u32> = test_set.iter().map(|s| s.subject_id()).collect();
    let disguises: Vec<u8> = test_set.iter().map(|s| s.annotation.disguise_id).collect();
    let report = classification_report(&predicted, &truth, &disguises).map_err(|e| e.to_string())?;
    let per: Vec<String> = report
        .per_disguise
        .iter()
        .filter_map(|d| d.accuracy.map(|a| format!("{}={:.0}%", d.id, a * 100.0)))
        .collect();
    let scarf_ids: Vec<u8> = Disguise::ALL.iter().filter(|d| d.has_scarf()).map(|d| d.id()).collect();
    let detail = format!(
        "subject accuracy {:.1}% on {} test images; per disguise {} (scarf ids {:?})",
        report.accuracy * 100.0,
        report.total,
        per.join(" "),
        scarf_ids
    );
    ensure(report.accuracy >= 0.8, || format!("accuracy below 80%: {detail}"))?;
    ensure(report.scarf_no_better_than_best_other(), || format!("a scarf disguise beat every other: {detail}"))?;
    Ok(detail)
}

fn throughput() -> Outcome {
    let t = Timing::new(50, 2.598).map_err(|e| e.to_string())?;
    ensure((t.fps - 19.3).abs() <= 0.1, || format!("fps {}", t.fps))?;
    ensure((t.seconds_per_frame - 0.0518).abs() <= 0.0002, || format!("s/frame {}", t.seconds_per_frame))?;

    // the same arithmetic through the benchmark with an injected clock
    let data = generate_dataset(2, 25, 3, 32).map_err(|e| e.to_string())?;
    let mut config = ModelConfig::desk(1);
    config.input_size = 32;
    let model = build_model(&config).map_err(|e| e.to_string())?;
    let schema = FeatureSchema::default_v1();
    let feats: Vec<Vec<f64>> = data.iter().map(|s| annotation_features(s, &schema).values).collect();
    let labels: Vec<u32> = data.iter().map(|s| s.subject_id()).collect();
    let svm = train_svm(&feats, &labels, &SvmParams::default()).map_err(|e| e.to_string())?;
    let frames: Vec<_> = data.iter().map(|s| s.image.clone()).collect();
    let mut clock = ScriptedClock::new(vec![0.0, 2.598, 10.0, 12.598]);
    let r = fps_benchmark(&model, &schema, &svm, &frames, 50, &mut clock).map_err(|e| e.to_string())?;
    ensure(r.frames == 50, || format!("{} frames timed", r.frames))?;
    ensure((r.inference.fps - 50.0 / 2.598).abs() <= 1e-9, || format!("fps {}", r.inference.fps))?;
    ensure((r.with_preprocessing.fps - 19.3).abs() <= 0.1, || format!("fps {}", r.with_preprocessing.fps))?;
    Ok(format!("50 frames / 2.598 s = {:.4} fps ({:.1}), {:.4} s/frame", t.fps, t.fps, t.seconds_per_frame))
}

fn determinism() -> Outcome {
    let dir_a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir_b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut artefacts = Vec::new();
    for dir in [dir_a.path(), dir_b.path()] {
        let data = generate_dataset(3, 6, 5, 48).map_err(|e| e.to_string())?;
        dfr::data::save_dataset(dir, &data, None).map_err(|e| e.to_string())?;
        let mut config = ModelConfig::desk(5);
        config.input_size = 48;
        let model = build_model(&config).map_err(|e| e.to_string())?;
        let model = train(model, &data, &TrainOptions { epochs: 2, batch_size: 6, ..Default::default() })
            .map_err(|e| e.to_string())?;
        let mut model_bytes = Vec::new();
        write_model(&model, &mut model_bytes).map_err(|e| e.to_string())?;
        let preds: Vec<KeypointSet> = data.iter().map(|s| predict_keypoints(&model, &s.image).unwrap()).collect();
        let gts: Vec<KeypointSet> = data.iter().map(|s| s.annotation.keypoints.clone()).collect();
        let csv = to_csv(&keypoint_errors(&preds, &gts, 2.0).map_err(|e| e.to_string())?);

        let reloaded = read_model(model_bytes.as_slice()).map_err(|e| e.to_string())?;
        for s in &data {
            let a = model.predict_coords(&s.image).map_err(|e| e.to_string())?;
            let b = reloaded.predict_coords(&s.image).map_err(|e| e.to_string())?;
            ensure(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()), || "reloaded model predicts differently".into())?;
        }
        let mut files = Vec::new();
        let mut paths: Vec<_> = walk(dir);
        paths.sort();
        for p in paths {
            files.push((p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
        }
        artefacts.push((files, model_bytes, csv));
    }
    ensure(artefacts[0].0 == artefacts[1].0, || "dataset files differ".into())?;
    ensure(artefacts[0].1 == artefacts[1].1, || "model bytes differ".into())?;
    ensure(artefacts[0].2 == artefacts[1].2, || "report CSV differs".into())?;
    Ok(format!(
        "{} dataset files, {} model bytes and report CSV identical across runs; reload bit-identical",
        artefacts[0].0.len(),
        artefacts[0].1.len()
    ))
}

fn walk(dir: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("gradient check (desk net, 32x32)", Duration::from_secs(120), gradient_check),
        ("layer oracles (conv2d, maxpool2d, dense)", Duration::from_secs(60), layer_oracles),
        ("keypoint error and MAE arithmetic", Duration::from_secs(60), metric_arithmetic),
        ("slope and inter-line angle", Duration::from_secs(60), geometry_cases),
        ("similarity invariance of features", Duration::from_secs(60), similarity_invariance),
        ("SVM against brute-force dual", Duration::from_secs(60), svm_oracle),
        ("end-to-end synthetic pipeline", Duration::from_secs(20 * 60), end_to_end),
        ("throughput arithmetic", Duration::from_secs(60), throughput),
        ("determinism and serialization", Duration::from_secs(120), determinism),
    ];
    let mut failed = 0;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > budget => Err(format!("{d}; took {:.1}s, budget {}s", elapsed.as_secs_f64(), budget.as_secs())),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{:.1}s]", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{:.1}s]", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
