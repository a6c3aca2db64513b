//! Report files. Every CSV report uses the long layout
//! `section,label,metric,value`; see `docs/report-formats.md`.

use std::path::Path;
use std::str::FromStr;

use super::bench::{FpsReport, Timing};
use super::classification::{ClassificationReport, DisguiseAccuracy, REFERENCE_ROWS};
use super::metrics::{KeypointErrorReport, HISTOGRAM_EDGES};
use super::svg::bar_chart;
use crate::data::Disguise;
use crate::error::{Error, Result};
use crate::keypoints::{keypoint_index, KEYPOINT_COUNT, KEYPOINT_NAMES};

pub const CSV_HEADER: [&str; 4] = ["section", "label", "metric", "value"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Svg,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "svg" => Ok(ReportFormat::Svg),
            other => Err(Error::config(format!("unknown report format {other:?} (expected csv or svg)"))),
        }
    }
}

pub type Row = [String; 4];

fn row(section: &str, label: impl ToString, metric: impl ToString, value: impl ToString) -> Row {
    [section.to_string(), label.to_string(), metric.to_string(), value.to_string()]
}

pub trait Report {
    /// Data rows, empty for an empty report.
    fn rows(&self) -> Vec<Row>;
    fn svg(&self) -> String;
}

pub fn to_csv(report: &dyn Report) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in report.rows() {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("rows are UTF-8")
}

pub fn emit_report(report: &dyn Report, path: &Path, format: ReportFormat) -> Result<()> {
    let text = match format {
        ReportFormat::Csv => to_csv(report),
        ReportFormat::Svg => report.svg(),
    };
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn parse_rows(text: &str) -> Result<Vec<Row>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| Error::format("report header", e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::format("report header", format!("expected {}", CSV_HEADER.join(","))));
    }
    r.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| Error::Parse { row: i + 2, column: "section".into(), message: e.to_string() })?;
            if rec.len() != 4 {
                return Err(Error::Parse { row: i + 2, column: "value".into(), message: "expected 4 fields".into() });
            }
            Ok([rec[0].to_string(), rec[1].to_string(), rec[2].to_string(), rec[3].to_string()])
        })
        .collect()
}

fn num<T: FromStr>(r: &Row, line: usize) -> Result<T> {
    r[3].parse().map_err(|_| Error::Parse {
        row: line,
        column: "value".into(),
        message: format!("{:?} is not a valid number for {}/{}", r[3], r[0], r[2]),
    })
}

fn unexpected(r: &Row, line: usize) -> Error {
    Error::Parse {
        row: line,
        column: "metric".into(),
        message: format!("unexpected entry {}/{}/{}", r[0], r[1], r[2]),
    }
}

impl Report for KeypointErrorReport {
    fn rows(&self) -> Vec<Row> {
        if self.samples == 0 {
            return Vec::new();
        }
        let mut out = vec![
            row("summary", "all", "samples", self.samples),
            row("summary", "all", "mae_px", self.mae),
            row("summary", "all", "tau_px", self.tau),
            row("summary", "all", "accuracy", self.accuracy),
        ];
        for (k, name) in KEYPOINT_NAMES.iter().enumerate() {
            out.push(row("keypoint", name, "mean_error_px", self.mean_error[k]));
            out.push(row("keypoint", name, "mae_px", self.keypoint_mae[k]));
        }
        for (k, name) in KEYPOINT_NAMES.iter().enumerate() {
            for (lo, count) in HISTOGRAM_EDGES.iter().zip(&self.histogram[k]) {
                out.push(row("histogram", name, format!("from_{lo}px"), count));
            }
        }
        for (tau, acc) in &self.curve {
            out.push(row("curve", tau, "accuracy", acc));
        }
        out
    }

    fn svg(&self) -> String {
        let bars: Vec<(String, f64)> = KEYPOINT_NAMES
            .iter()
            .zip(self.mean_error.iter().chain(std::iter::repeat(&0.0)))
            .map(|(n, e)| (n.to_string(), *e))
            .collect();
        bar_chart("Mean prediction error per keypoint", "error (px)", &bars)
    }
}

impl KeypointErrorReport {
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = parse_rows(text)?;
        let mut r = KeypointErrorReport::default();
        if rows.is_empty() {
            return Ok(r);
        }
        r.mean_error = vec![0.0; KEYPOINT_COUNT];
        r.keypoint_mae = vec![0.0; KEYPOINT_COUNT];
        r.histogram = vec![vec![0; HISTOGRAM_EDGES.len()]; KEYPOINT_COUNT];
        for (i, x) in rows.iter().enumerate() {
            let line = i + 2;
            let kp = || keypoint_index(&x[1]).map_err(|_| unexpected(x, line));
            match (x[0].as_str(), x[2].as_str()) {
                ("summary", "samples") => r.samples = num(x, line)?,
                ("summary", "mae_px") => r.mae = num(x, line)?,
                ("summary", "tau_px") => r.tau = num(x, line)?,
                ("summary", "accuracy") => r.accuracy = num(x, line)?,
                ("keypoint", "mean_error_px") => r.mean_error[kp()?] = num(x, line)?,
                ("keypoint", "mae_px") => r.keypoint_mae[kp()?] = num(x, line)?,
                ("histogram", m) => {
                    let b = HISTOGRAM_EDGES
                        .iter()
                        .position(|lo| m == format!("from_{lo}px"))
                        .ok_or_else(|| unexpected(x, line))?;
                    r.histogram[kp()?][b] = num(x, line)?;
                }
                ("curve", "accuracy") => {
                    let tau = x[1].parse().map_err(|_| unexpected(x, line))?;
                    r.curve.push((tau, num(x, line)?));
                }
                _ => return Err(unexpected(x, line)),
            }
        }
        Ok(r)
    }
}

fn disguise_id_of(name: &str) -> Option<u8> {
    if name == "none" {
        return Some(0);
    }
    Disguise::ALL.iter().find(|d| d.name() == name).map(|d| d.id())
}

impl Report for ClassificationReport {
    fn rows(&self) -> Vec<Row> {
        if self.total == 0 {
            return Vec::new();
        }
        let mut out = vec![
            row("summary", "all", "total", self.total),
            row("summary", "all", "correct", self.correct),
            row("summary", "all", "accuracy", self.accuracy),
        ];
        for d in &self.per_disguise {
            out.push(row("disguise", &d.name, "count", d.count));
            out.push(row("disguise", &d.name, "correct", d.correct));
            out.push(row("disguise", &d.name, "accuracy", d.accuracy.map_or(String::new(), |a| a.to_string())));
        }
        for (t, line) in self.labels.iter().zip(&self.confusion) {
            for (p, count) in self.labels.iter().zip(line) {
                out.push(row("confusion", t, format!("predicted_{p}"), count));
            }
        }
        for r in REFERENCE_ROWS {
            out.push(row("reference", r.method, "simple_percent", r.simple_percent));
            out.push(row("reference", r.method, "complex_percent", r.complex_percent));
        }
        out
    }

    fn svg(&self) -> String {
        let bars: Vec<(String, f64)> = self
            .per_disguise
            .iter()
            .map(|d| (d.name.clone(), d.accuracy.unwrap_or(0.0) * 100.0))
            .collect();
        bar_chart("Classification accuracy per disguise", "accuracy (%)", &bars)
    }
}

impl ClassificationReport {
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = parse_rows(text)?;
        let mut r = ClassificationReport::default();
        let mut cells: Vec<(u32, u32, usize)> = Vec::new();
        for (i, x) in rows.iter().enumerate() {
            let line = i + 2;
            match (x[0].as_str(), x[2].as_str()) {
                ("summary", "total") => r.total = num(x, line)?,
                ("summary", "correct") => r.correct = num(x, line)?,
                ("summary", "accuracy") => r.accuracy = num(x, line)?,
                ("disguise", metric) => {
                    let id = disguise_id_of(&x[1]).ok_or_else(|| unexpected(x, line))?;
                    if r.per_disguise.last().is_none_or(|d| d.id != id) {
                        r.per_disguise.push(DisguiseAccuracy {
                            id,
                            name: x[1].clone(),
                            count: 0,
                            correct: 0,
                            accuracy: None,
                        });
                    }
                    let d = r.per_disguise.last_mut().expect("pushed above");
                    match metric {
                        "count" => d.count = num(x, line)?,
                        "correct" => d.correct = num(x, line)?,
                        "accuracy" if x[3].is_empty() => d.accuracy = None,
                        "accuracy" => d.accuracy = Some(num(x, line)?),
                        _ => return Err(unexpected(x, line)),
                    }
                }
                ("confusion", metric) => {
                    let t = x[1].parse().map_err(|_| unexpected(x, line))?;
                    let p = metric
                        .strip_prefix("predicted_")
                        .and_then(|p| p.parse().ok())
                        .ok_or_else(|| unexpected(x, line))?;
                    cells.push((t, p, num(x, line)?));
                }
                ("reference", _) => {}
                _ => return Err(unexpected(x, line)),
            }
        }
        let mut labels: Vec<u32> = cells.iter().map(|c| c.0).collect();
        labels.dedup();
        let k = labels.len();
        if cells.len() != k * k {
            return Err(Error::format("confusion", format!("{} cells for {k} labels", cells.len())));
        }
        r.confusion = cells.chunks(k.max(1)).map(|c| c.iter().map(|x| x.2).collect()).collect();
        r.labels = labels;
        Ok(r)
    }
}

impl Report for FpsReport {
    fn rows(&self) -> Vec<Row> {
        let mut out = vec![row("summary", "all", "frames", self.frames)];
        for (section, t) in [("inference", &self.inference), ("with_preprocessing", &self.with_preprocessing)] {
            out.push(row(section, "all", "wall_time_s", t.wall_time));
            out.push(row(section, "all", "seconds_per_frame", t.seconds_per_frame));
            out.push(row(section, "all", "fps", t.fps));
        }
        out
    }

    fn svg(&self) -> String {
        bar_chart(
            "Throughput",
            "frames/second",
            &[
                ("inference".to_string(), self.inference.fps),
                ("with preprocessing".to_string(), self.with_preprocessing.fps),
            ],
        )
    }
}

impl FpsReport {
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = parse_rows(text)?;
        let blank = Timing { wall_time: 0.0, seconds_per_frame: 0.0, fps: 0.0 };
        let mut r = FpsReport { frames: 0, inference: blank, with_preprocessing: blank };
        for (i, x) in rows.iter().enumerate() {
            let line = i + 2;
            let t = match x[0].as_str() {
                "summary" if x[2] == "frames" => {
                    r.frames = num(x, line)?;
                    continue;
                }
                "inference" => &mut r.inference,
                "with_preprocessing" => &mut r.with_preprocessing,
                _ => return Err(unexpected(x, line)),
            };
            match x[2].as_str() {
                "wall_time_s" => t.wall_time = num(x, line)?,
                "seconds_per_frame" => t.seconds_per_frame = num(x, line)?,
                "fps" => t.fps = num(x, line)?,
                _ => return Err(unexpected(x, line)),
            }
        }
        Ok(r)
    }
}
