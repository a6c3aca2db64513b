//! Command implementations behind the `dfr` binary.
//!
//! Settings resolve in three layers: preset defaults, then the `--config`
//! file, then command-line flags. Unknown keys are errors at every layer.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::data::{generate_dataset, load_dataset, save_dataset, split, GrayImage, Manifest, Sample};
use crate::error::{Error, Result};
use crate::eval::{
    classification_report, default_tau, emit_report, fps_benchmark, keypoint_errors, to_csv, ClassificationReport,
    FpsReport, KeypointErrorReport, MonotonicClock, ReportFormat,
};
use crate::geometry::FeatureSchema;
use crate::keypoint::{build_model, load_model, save_model, train_with_progress, KeypointModel, ModelConfig, Preset, TrainOptions};
use crate::keypoints::KEYPOINT_NAMES;
use crate::pipeline::{fit_samples, locate_keypoints, predicted_feature_rows, predicted_features};
use crate::svm::{load_svm, predict, save_svm, train_svm, KernelKind, SvmModel, SvmParams};

/// Every key accepted in a config file or as a `--flag` (with `-` for `_`).
pub const CONFIG_KEYS: [&str; 23] = [
    "preset",
    "seed",
    "data",
    "out",
    "model",
    "svm",
    "schema",
    "input",
    "subjects",
    "per_subject",
    "size",
    "epochs",
    "batch_size",
    "learning_rate",
    "train_fraction",
    "kernel",
    "c",
    "gamma",
    "tolerance",
    "max_passes",
    "tau",
    "frames",
    "bench_batch",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub preset: Preset,
    pub seed: u64,
    /// Dataset directory.
    pub data: Option<PathBuf>,
    /// Output directory (synth, eval, bench) or file (predict).
    pub out: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub svm: Option<PathBuf>,
    /// Feature schema file; the built-in schema when absent.
    pub schema: Option<PathBuf>,
    /// Image file or directory of PNGs for predict.
    pub input: Option<PathBuf>,
    pub subjects: usize,
    pub per_subject: usize,
    /// Network input side, pixels. Also the synthetic image size.
    pub size: usize,
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    pub train_fraction: f64,
    pub kernel: KernelKind,
    pub c: f64,
    /// `None` means the scale heuristic.
    pub gamma: Option<f64>,
    pub tolerance: f64,
    pub max_passes: usize,
    /// Keypoint accuracy threshold in pixels; scaled from 5 px at 227 when
    /// absent.
    pub tau: Option<f64>,
    pub frames: usize,
    pub bench_batch: usize,
}

impl RunConfig {
    pub fn preset_defaults(preset: Preset) -> RunConfig {
        let svm = SvmParams::default();
        let (subjects, per_subject, size, epochs, batch_size) = match preset {
            Preset::Desk => (10, 40, 96, 150, 5),
            Preset::Paper => (20, 200, 227, 1300, 50),
        };
        RunConfig {
            preset,
            seed: 7,
            data: None,
            out: None,
            model: None,
            svm: None,
            schema: None,
            input: None,
            subjects,
            per_subject,
            size,
            epochs,
            batch_size,
            learning_rate: 1e-3,
            train_fraction: 0.875,
            kernel: svm.kernel,
            c: svm.c,
            gamma: svm.gamma,
            tolerance: svm.tolerance,
            max_passes: svm.max_passes,
            tau: None,
            frames: 50,
            bench_batch: 50,
        }
    }

    /// Sets one key from its text value.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::config(format!("invalid value {value:?} for {key}")))
        }
        let path = || Some(PathBuf::from(value));
        match key {
            "preset" => self.preset = value.parse()?,
            "seed" => self.seed = parse(key, value)?,
            "data" => self.data = path(),
            "out" => self.out = path(),
            "model" => self.model = path(),
            "svm" => self.svm = path(),
            "schema" => self.schema = path(),
            "input" => self.input = path(),
            "subjects" => self.subjects = parse(key, value)?,
            "per_subject" => self.per_subject = parse(key, value)?,
            "size" => self.size = parse(key, value)?,
            "epochs" => self.epochs = parse(key, value)?,
            "batch_size" => self.batch_size = parse(key, value)?,
            "learning_rate" => self.learning_rate = parse(key, value)?,
            "train_fraction" => self.train_fraction = parse(key, value)?,
            "kernel" => self.kernel = value.parse()?,
            "c" => self.c = parse(key, value)?,
            "gamma" if value == "scale" => self.gamma = None,
            "gamma" => self.gamma = Some(parse(key, value)?),
            "tolerance" => self.tolerance = parse(key, value)?,
            "max_passes" => self.max_passes = parse(key, value)?,
            "tau" => self.tau = Some(parse(key, value)?),
            "frames" => self.frames = parse(key, value)?,
            "bench_batch" => self.bench_batch = parse(key, value)?,
            _ => return Err(Error::config(format!("unknown setting {key:?}"))),
        }
        Ok(())
    }

    /// Layers `file` entries over the preset defaults, then `flags` over
    /// both. The preset itself comes from the flags, else the file, else
    /// desk.
    pub fn resolve(file: &[(String, String)], flags: &[(String, String)]) -> Result<RunConfig> {
        for (k, _) in file.iter().chain(flags) {
            if !CONFIG_KEYS.contains(&k.as_str()) {
                return Err(Error::config(format!("unknown setting {k:?}")));
            }
        }
        let pick = |kv: &[(String, String)]| kv.iter().rev().find(|(k, _)| k == "preset").map(|(_, v)| v.clone());
        let preset = match pick(flags).or_else(|| pick(file)) {
            Some(p) => p.parse()?,
            None => Preset::Desk,
        };
        let mut config = RunConfig::preset_defaults(preset);
        for (k, v) in file.iter().chain(flags) {
            config.apply(k, v)?;
        }
        Ok(config)
    }

    pub fn load(config_file: Option<&Path>, flags: &[(String, String)]) -> Result<RunConfig> {
        let file = match config_file {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                crate::config::parse_key_values(&text)
                    .map_err(|e| Error::config(format!("{}: {e}", p.display())))?
                    .into_iter()
                    .collect()
            }
            None => Vec::new(),
        };
        RunConfig::resolve(&file, flags)
    }

    pub fn model_config(&self) -> ModelConfig {
        let mut c = ModelConfig::preset(self.preset, self.seed);
        c.input_size = self.size;
        c
    }

    pub fn svm_params(&self) -> SvmParams {
        SvmParams {
            kernel: self.kernel,
            c: self.c,
            gamma: self.gamma,
            tolerance: self.tolerance,
            max_passes: self.max_passes,
            seed: self.seed,
        }
    }

    pub fn train_options(&self) -> TrainOptions {
        let mut o = TrainOptions {
            epochs: self.epochs,
            batch_size: self.batch_size,
            ..Default::default()
        };
        o.adam.lr = self.learning_rate;
        o
    }

    pub fn tau(&self) -> f64 {
        self.tau.unwrap_or_else(|| default_tau(self.size))
    }

    pub fn schema(&self) -> Result<FeatureSchema> {
        match &self.schema {
            Some(p) => FeatureSchema::from_file(p),
            None => Ok(FeatureSchema::default_v1()),
        }
    }

    fn required(&self, key: &str, value: &Option<PathBuf>) -> Result<PathBuf> {
        value
            .clone()
            .ok_or_else(|| Error::config(format!("missing setting `{key}` (pass --{} or set it in the config file)", key.replace('_', "-"))))
    }

    fn existing_dir(&self, key: &str, value: &Option<PathBuf>) -> Result<PathBuf> {
        let p = self.required(key, value)?;
        if !p.is_dir() {
            return Err(Error::config(format!("{key} directory {} does not exist; create it first", p.display())));
        }
        Ok(p)
    }

    fn existing_file(&self, key: &str, value: &Option<PathBuf>) -> Result<PathBuf> {
        let p = self.required(key, value)?;
        if !p.is_file() {
            return Err(Error::config(format!("{key} file {} does not exist", p.display())));
        }
        Ok(p)
    }

    fn writable_file(&self, key: &str, value: &Option<PathBuf>) -> Result<PathBuf> {
        let p = self.required(key, value)?;
        let parent = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
        if !parent.is_dir() {
            return Err(Error::config(format!(
                "directory {} for {key} does not exist; create it first",
                parent.display()
            )));
        }
        Ok(p)
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn dataset_splits(cfg: &RunConfig, out: &mut dyn Write) -> Result<(Vec<Sample>, Vec<Sample>)> {
    let dir = cfg.existing_dir("data", &cfg.data)?;
    let mut samples = load_dataset(&dir)?;
    let resized = fit_samples(&mut samples, cfg.size)?;
    if resized > 0 {
        writeln!(out, "note: resized {resized} images to {0}x{0}", cfg.size).map_err(io_err)?;
    }
    split(&samples, |s| s.subject_id(), cfg.train_fraction, cfg.seed)
}

fn check_schema(svm: &SvmModel, schema: &FeatureSchema) -> Result<()> {
    if svm.schema_version != schema.version {
        return Err(Error::config(format!(
            "svm model was trained on feature schema version {}, but schema version {} is loaded",
            svm.schema_version, schema.version
        )));
    }
    if svm.dimension() != schema.len() {
        return Err(Error::config(format!(
            "svm model expects {} features, the schema has {}",
            svm.dimension(),
            schema.len()
        )));
    }
    Ok(())
}

fn check_model(model: &KeypointModel, cfg: &RunConfig) -> Result<()> {
    if model.config.input_size != cfg.size {
        return Err(Error::config(format!(
            "keypoint model takes {0}x{0} input but size is {1}; pass --size {0}",
            model.config.input_size, cfg.size
        )));
    }
    Ok(())
}

pub fn cmd_synth(cfg: &RunConfig, out: &mut dyn Write) -> Result<Manifest> {
    let dir = cfg.existing_dir("out", &cfg.out)?;
    let samples = generate_dataset(cfg.subjects, cfg.per_subject, cfg.seed, cfg.size)?;
    let manifest = Manifest {
        seed: cfg.seed,
        subjects: cfg.subjects,
        per_subject: cfg.per_subject,
        size: cfg.size,
        samples: samples.len(),
    };
    save_dataset(&dir, &samples, Some(&manifest))?;
    writeln!(
        out,
        "wrote {} samples ({} subjects x {}, {}x{} px, seed {}) to {}",
        manifest.samples,
        manifest.subjects,
        manifest.per_subject,
        manifest.size,
        manifest.size,
        manifest.seed,
        dir.display()
    )
    .map_err(io_err)?;
    Ok(manifest)
}

/// Path of the training-history CSV written next to a model file.
pub fn history_path(model: &Path) -> PathBuf {
    model.with_extension("history.csv")
}

pub fn history_csv(model: &KeypointModel) -> String {
    let mut s = String::from("epoch,loss\n");
    for h in &model.history {
        s.push_str(&format!("{},{}\n", h.epoch, h.loss));
    }
    s
}

pub fn cmd_train_kp(cfg: &RunConfig, out: &mut dyn Write) -> Result<KeypointModel> {
    let model_path = cfg.writable_file("model", &cfg.model)?;
    if cfg.preset == Preset::Paper {
        writeln!(
            out,
            "warning: the paper preset (227x227 input, 14 convolutions) needs hours to days of CPU time per run"
        )
        .map_err(io_err)?;
    }
    let (train_set, _) = dataset_splits(cfg, out)?;
    let model = build_model(&cfg.model_config())?;
    writeln!(
        out,
        "training {} parameters on {} images for {} epochs",
        model.network.param_count(),
        train_set.len(),
        cfg.epochs
    )
    .map_err(io_err)?;
    let mut log_err = None;
    let model = train_with_progress(model, &train_set, &cfg.train_options(), |e| {
        if e.epoch == 1 || e.epoch % 10 == 0 {
            if let Err(err) = writeln!(out, "epoch {:>4}  loss {:.6}", e.epoch, e.loss) {
                log_err.get_or_insert(err);
            }
        }
    })?;
    if let Some(e) = log_err {
        return Err(io_err(e));
    }
    save_model(&model, &model_path)?;
    let hist = history_path(&model_path);
    std::fs::write(&hist, history_csv(&model)).map_err(|e| Error::io(&hist, e))?;
    writeln!(out, "wrote {} and {}", model_path.display(), hist.display()).map_err(io_err)?;
    Ok(model)
}

pub fn cmd_train_svm(cfg: &RunConfig, out: &mut dyn Write) -> Result<SvmModel> {
    let svm_path = cfg.writable_file("svm", &cfg.svm)?;
    let model_path = cfg.existing_file("model", &cfg.model)?;
    let schema = cfg.schema()?;
    let model = load_model(&model_path)?;
    check_model(&model, cfg)?;
    let (train_set, _) = dataset_splits(cfg, out)?;
    let features = predicted_feature_rows(&model, &schema, &train_set)?;
    let labels: Vec<u32> = train_set.iter().map(|s| s.subject_id()).collect();
    let mut svm = train_svm(&features, &labels, &cfg.svm_params())?;
    svm.schema_version = schema.version;
    save_svm(&svm, &svm_path)?;
    writeln!(
        out,
        "trained {} pair machines over {} classes ({} support vectors); wrote {}",
        svm.machines.len(),
        svm.classes.len(),
        svm.support_vector_count(),
        svm_path.display()
    )
    .map_err(io_err)?;
    Ok(svm)
}

fn png_inputs(input: &Path) -> Result<Vec<PathBuf>> {
    if input.is_file() {
        return Ok(vec![input.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(input)
        .map_err(|e| Error::io(input, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("png")))
        .collect();
    files.sort();
    Ok(files)
}

/// Writes `image,resized,<keypoint>_x,<keypoint>_y,...` rows, one per image,
/// in the image's own pixel coordinates.
pub fn cmd_predict(cfg: &RunConfig, out: &mut dyn Write) -> Result<usize> {
    let model_path = cfg.existing_file("model", &cfg.model)?;
    let input = cfg.required("input", &cfg.input)?;
    if !input.exists() {
        return Err(Error::config(format!("input {} does not exist", input.display())));
    }
    let csv_path = cfg.writable_file("out", &cfg.out)?;
    let model = load_model(&model_path)?;
    let files = png_inputs(&input)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header = vec!["image".to_string(), "resized".to_string()];
    for n in KEYPOINT_NAMES {
        header.push(format!("{n}_x"));
        header.push(format!("{n}_y"));
    }
    let csv_err = |e: csv::Error| Error::format("predictions", e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    let mut resized = 0;
    for f in &files {
        let image = GrayImage::load_png(f)?;
        let (kps, r) = locate_keypoints(&model, &image)?;
        if r {
            resized += 1;
        }
        let mut rec = vec![f.display().to_string(), u8::from(r).to_string()];
        for p in kps.points {
            rec.push(p.x.to_string());
            rec.push(p.y.to_string());
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::format("predictions", e.to_string()))?;
    std::fs::write(&csv_path, bytes).map_err(|e| Error::io(&csv_path, e))?;
    if resized > 0 {
        let n = model.config.input_size;
        writeln!(
            out,
            "note: {resized} images were resized to {n}x{n} for the network; coordinates are in original pixels"
        )
        .map_err(io_err)?;
    }
    writeln!(out, "wrote keypoints for {} images to {}", files.len(), csv_path.display()).map_err(io_err)?;
    Ok(files.len())
}

pub struct EvalOutput {
    pub keypoints: KeypointErrorReport,
    pub classification: ClassificationReport,
}

pub const KEYPOINT_REPORT: &str = "keypoint_errors";
pub const CLASSIFICATION_REPORT: &str = "classification";
pub const FPS_REPORT: &str = "fps";

fn write_reports(dir: &Path, stem: &str, report: &dyn crate::eval::Report) -> Result<()> {
    emit_report(report, &dir.join(format!("{stem}.csv")), ReportFormat::Csv)?;
    emit_report(report, &dir.join(format!("{stem}.svg")), ReportFormat::Svg)
}

pub fn cmd_eval(cfg: &RunConfig, out: &mut dyn Write) -> Result<EvalOutput> {
    let model_path = cfg.existing_file("model", &cfg.model)?;
    let svm_path = cfg.existing_file("svm", &cfg.svm)?;
    let dir = cfg.existing_dir("out", &cfg.out)?;
    let schema = cfg.schema()?;
    let model = load_model(&model_path)?;
    check_model(&model, cfg)?;
    let svm = load_svm(&svm_path)?;
    check_schema(&svm, &schema)?;
    let (_, test) = dataset_splits(cfg, out)?;

    let mut preds = Vec::with_capacity(test.len());
    let mut labels = Vec::with_capacity(test.len());
    for s in &test {
        preds.push(locate_keypoints(&model, &s.image)?.0);
        labels.push(predict(&svm, &predicted_features(&model, &schema, s)?.values)?.label);
    }
    let gts: Vec<_> = test.iter().map(|s| s.annotation.keypoints.clone()).collect();
    let truth: Vec<u32> = test.iter().map(|s| s.subject_id()).collect();
    let disguises: Vec<u8> = test.iter().map(|s| s.annotation.disguise_id).collect();
    let keypoints = keypoint_errors(&preds, &gts, cfg.tau())?;
    let classification = classification_report(&labels, &truth, &disguises)?;
    write_reports(&dir, KEYPOINT_REPORT, &keypoints)?;
    write_reports(&dir, CLASSIFICATION_REPORT, &classification)?;

    writeln!(
        out,
        "{} test images: keypoint MAE {:.3} px, accuracy at {:.2} px {:.1}%",
        keypoints.samples,
        keypoints.mae,
        keypoints.tau,
        keypoints.accuracy * 100.0
    )
    .map_err(io_err)?;
    writeln!(out, "subject accuracy {:.1}% ({}/{})", classification.accuracy * 100.0, classification.correct, classification.total)
        .map_err(io_err)?;
    for d in &classification.per_disguise {
        if let Some(a) = d.accuracy {
            writeln!(out, "  {:>2} {:<18} {:5.1}% of {}", d.id, d.name, a * 100.0, d.count).map_err(io_err)?;
        }
    }
    writeln!(out, "reports written to {}", dir.display()).map_err(io_err)?;
    Ok(EvalOutput { keypoints, classification })
}

pub fn cmd_bench(cfg: &RunConfig, out: &mut dyn Write) -> Result<FpsReport> {
    let model_path = cfg.existing_file("model", &cfg.model)?;
    let svm_path = cfg.existing_file("svm", &cfg.svm)?;
    let schema = cfg.schema()?;
    let model = load_model(&model_path)?;
    let svm = load_svm(&svm_path)?;
    check_schema(&svm, &schema)?;
    let dir = cfg.existing_dir("data", &cfg.data)?;
    let samples = load_dataset(&dir)?;
    if samples.is_empty() || cfg.frames == 0 {
        return Err(Error::config("benchmark needs at least one frame"));
    }
    let frames: Vec<GrayImage> = samples.iter().cycle().take(cfg.frames).map(|s| s.image.clone()).collect();
    let report = fps_benchmark(&model, &schema, &svm, &frames, cfg.bench_batch, &mut MonotonicClock::default())?;
    write!(out, "{report}").map_err(io_err)?;
    if let Some(dir) = &cfg.out {
        if !dir.is_dir() {
            return Err(Error::config(format!("out directory {} does not exist; create it first", dir.display())));
        }
        let p = dir.join(format!("{FPS_REPORT}.csv"));
        std::fs::write(&p, to_csv(&report)).map_err(|e| Error::io(&p, e))?;
    }
    Ok(report)
}

#[derive(Debug, Parser)]
#[command(name = "dfr", version, about = "Disguised face recognition from facial keypoint geometry")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset into --out
    Synth,
    /// Train the keypoint network on --data, writing --model
    TrainKp,
    /// Train the SVM on features of --model keypoints over --data, writing --svm
    TrainSvm,
    /// Predict keypoints for --input images, writing CSV to --out
    Predict,
    /// Evaluate --model and --svm on the held-out split of --data
    Eval,
    /// Time the full pipeline on --frames images from --data
    Bench,
}

/// Every flag is optional and overrides the config file.
#[derive(Clone, Debug, Default, Args)]
pub struct Options {
    /// Text file of `key = value` settings
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// paper or desk
    #[arg(long, global = true)]
    pub preset: Option<String>,
    #[arg(long, global = true)]
    pub data: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true)]
    pub model: Option<String>,
    #[arg(long, global = true)]
    pub svm: Option<String>,
    #[arg(long, global = true)]
    pub schema: Option<String>,
    #[arg(long, global = true)]
    pub input: Option<String>,
    #[arg(long, global = true)]
    pub subjects: Option<String>,
    #[arg(long, global = true)]
    pub per_subject: Option<String>,
    #[arg(long, global = true)]
    pub size: Option<String>,
    #[arg(long, global = true)]
    pub epochs: Option<String>,
    #[arg(long, global = true)]
    pub batch_size: Option<String>,
    #[arg(long, global = true)]
    pub learning_rate: Option<String>,
    #[arg(long, global = true)]
    pub train_fraction: Option<String>,
    /// linear or rbf
    #[arg(long, global = true)]
    pub kernel: Option<String>,
    #[arg(long = "c", global = true)]
    pub c: Option<String>,
    /// A positive number, or `scale`
    #[arg(long, global = true)]
    pub gamma: Option<String>,
    #[arg(long, global = true)]
    pub tolerance: Option<String>,
    #[arg(long, global = true)]
    pub max_passes: Option<String>,
    #[arg(long, global = true)]
    pub tau: Option<String>,
    #[arg(long, global = true)]
    pub frames: Option<String>,
    #[arg(long, global = true)]
    pub bench_batch: Option<String>,
}

impl Options {
    /// Flags that were given, as `(key, value)` pairs.
    pub fn flags(&self) -> Vec<(String, String)> {
        let all = [
            ("seed", &self.seed),
            ("preset", &self.preset),
            ("data", &self.data),
            ("out", &self.out),
            ("model", &self.model),
            ("svm", &self.svm),
            ("schema", &self.schema),
            ("input", &self.input),
            ("subjects", &self.subjects),
            ("per_subject", &self.per_subject),
            ("size", &self.size),
            ("epochs", &self.epochs),
            ("batch_size", &self.batch_size),
            ("learning_rate", &self.learning_rate),
            ("train_fraction", &self.train_fraction),
            ("kernel", &self.kernel),
            ("c", &self.c),
            ("gamma", &self.gamma),
            ("tolerance", &self.tolerance),
            ("max_passes", &self.max_passes),
            ("tau", &self.tau),
            ("frames", &self.frames),
            ("bench_batch", &self.bench_batch),
        ];
        all.into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect()
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let cfg = RunConfig::load(cli.options.config.as_deref(), &cli.options.flags())?;
    match cli.command {
        Command::Synth => cmd_synth(&cfg, out).map(drop),
        Command::TrainKp => cmd_train_kp(&cfg, out).map(drop),
        Command::TrainSvm => cmd_train_svm(&cfg, out).map(drop),
        Command::Predict => cmd_predict(&cfg, out).map(drop),
        Command::Eval => cmd_eval(&cfg, out).map(drop),
        Command::Bench => cmd_bench(&cfg, out).map(drop),
    }
}
