//! Metrics, reports and the throughput benchmark.

mod bench;
mod classification;
mod metrics;
mod report;
mod svg;

pub use bench::{fps_benchmark, Clock, FpsReport, MonotonicClock, ScriptedClock, Timing};
pub use classification::{classification_report, ClassificationReport, DisguiseAccuracy, ReferenceRow, REFERENCE_ROWS};
pub use metrics::{curve_thresholds, default_tau, keypoint_errors, KeypointErrorReport, DEFAULT_TAU_227, HISTOGRAM_EDGES};
pub use report::{emit_report, to_csv, Report, ReportFormat, Row, CSV_HEADER};
pub use svg::bar_chart;
