use clap::Parser;
use dfr::cli::{run, Cli, CLASSIFICATION_REPORT, KEYPOINT_REPORT};
use std::path::Path;

fn exec(args: &[&str]) -> Result<String, dfr::Error> {
    let mut argv = vec!["dfr"];
    argv.extend_from_slice(args);
    let cli = Cli::try_parse_from(argv).expect("arguments parse");
    let mut out = Vec::new();
    run(&cli, &mut out)?;
    Ok(String::from_utf8(out).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn full_chain_on_a_tiny_dataset() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    let reports = tmp.path().join("reports");
    std::fs::create_dir(&data).unwrap();
    std::fs::create_dir(&reports).unwrap();
    let model = tmp.path().join("kp.dfrm");
    let svm = tmp.path().join("faces.dfrs");
    let config = tmp.path().join("run.conf");
    std::fs::write(&config, "# tiny run\nsubjects = 3\nper_subject = 8\nsize = 48\nepochs = 2\nbatch_size = 6\n").unwrap();
    let c = s(&config);

    let log = exec(&["synth", "--config", c, "--out", s(&data), "--seed", "4"]).unwrap();
    assert!(log.contains("wrote 24 samples"), "{log}");
    assert!(data.join("annotations.csv").is_file());

    let log = exec(&["train-kp", "--config", c, "--data", s(&data), "--model", s(&model)]).unwrap();
    assert!(log.contains("epoch    1"), "{log}");
    assert!(model.is_file());
    assert!(model.with_extension("history.csv").is_file());

    exec(&["train-svm", "--config", c, "--data", s(&data), "--model", s(&model), "--svm", s(&svm)]).unwrap();
    assert!(svm.is_file());

    let log = exec(&["eval", "--config", c, "--data", s(&data), "--model", s(&model), "--svm", s(&svm), "--out", s(&reports)])
        .unwrap();
    assert!(log.contains("subject accuracy"), "{log}");
    for stem in [KEYPOINT_REPORT, CLASSIFICATION_REPORT] {
        assert!(reports.join(format!("{stem}.csv")).is_file());
        assert!(reports.join(format!("{stem}.svg")).is_file());
    }

    let preds = tmp.path().join("preds.csv");
    exec(&["predict", "--config", c, "--model", s(&model), "--input", s(&data.join("images")), "--out", s(&preds)]).unwrap();
    let text = std::fs::read_to_string(&preds).unwrap();
    assert_eq!(text.lines().count(), 25);
    assert!(text.starts_with("image,resized,"));

    let log = exec(&[
        "bench", "--config", c, "--data", s(&data), "--model", s(&model), "--svm", s(&svm), "--frames", "6", "--bench-batch",
        "2", "--out", s(&reports),
    ])
    .unwrap();
    assert!(log.contains("frames/second"), "{log}");
    assert!(reports.join("fps.csv").is_file());
}

#[test]
fn unknown_config_keys_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("bad.conf");
    std::fs::write(&config, "epoch = 3\n").unwrap();
    let err = exec(&["synth", "--config", s(&config), "--out", s(tmp.path())]).unwrap_err();
    assert!(err.to_string().contains("epoch"), "{err}");
    assert!(Cli::try_parse_from(["dfr", "synth", "--epoch", "3"]).is_err());
}

#[test]
fn flags_beat_the_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let config = tmp.path().join("run.conf");
    std::fs::write(&config, "subjects = 5\nper_subject = 4\nsize = 32\n").unwrap();
    let log = exec(&["synth", "--config", s(&config), "--subjects", "2", "--out", s(tmp.path())]).unwrap();
    assert!(log.contains("wrote 8 samples (2 subjects x 4, 32x32 px, seed 7)"), "{log}");
}

#[test]
fn mismatched_model_size_is_explained() {
    let tmp = tempfile::tempdir().unwrap();
    let data = tmp.path().join("data");
    std::fs::create_dir(&data).unwrap();
    let model = tmp.path().join("kp.dfrm");
    let svm = tmp.path().join("faces.dfrs");
    let base = ["--subjects", "2", "--per-subject", "8", "--size", "32", "--epochs", "1"];
    let with = |cmd: &str, extra: &[&str]| {
        let mut v = vec![cmd];
        v.extend_from_slice(&base);
        v.extend_from_slice(extra);
        exec(&v)
    };
    with("synth", &["--out", s(&data)]).unwrap();
    with("train-kp", &["--data", s(&data), "--model", s(&model)]).unwrap();
    with("train-svm", &["--data", s(&data), "--model", s(&model), "--svm", s(&svm)]).unwrap();
    let err = exec(&["eval", "--data", s(&data), "--model", s(&model), "--svm", s(&svm), "--out", s(tmp.path()), "--size", "40"])
        .unwrap_err();
    assert!(err.to_string().contains("--size 32"), "{err}");
}
