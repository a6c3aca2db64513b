use std::fmt;
use std::time::Instant;

use crate::data::GrayImage;
use crate::error::{Error, Result};
use crate::geometry::FeatureSchema;
use crate::keypoint::KeypointModel;
use crate::pipeline::identify;
use crate::svm::SvmModel;

/// Source of timestamps in seconds.
pub trait Clock {
    fn now(&mut self) -> f64;
}

pub struct MonotonicClock {
    origin: Instant,
}

impl Default for MonotonicClock {
    fn default() -> Self {
        MonotonicClock { origin: Instant::now() }
    }
}

impl Clock for MonotonicClock {
    fn now(&mut self) -> f64 {
        self.origin.elapsed().as_secs_f64()
    }
}

/// Replays fixed readings in order, repeating the last one when exhausted.
pub struct ScriptedClock {
    readings: Vec<f64>,
    next: usize,
}

impl ScriptedClock {
    pub fn new(readings: Vec<f64>) -> Self {
        ScriptedClock { readings, next: 0 }
    }
}

impl Clock for ScriptedClock {
    fn now(&mut self) -> f64 {
        let i = self.next.min(self.readings.len().saturating_sub(1));
        self.next += 1;
        self.readings.get(i).copied().unwrap_or(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Timing {
    pub wall_time: f64,
    pub seconds_per_frame: f64,
    pub fps: f64,
}

impl Timing {
    pub fn new(frames: usize, wall_time: f64) -> Result<Timing> {
        if frames == 0 || !(wall_time > 0.0) {
            return Err(Error::param(format!(
                "timing needs frames > 0 and positive wall time, got {frames} frames in {wall_time} s"
            )));
        }
        Ok(Timing {
            wall_time,
            seconds_per_frame: wall_time / frames as f64,
            fps: frames as f64 / wall_time,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FpsReport {
    /// Frames in the timed batches.
    pub frames: usize,
    /// Keypoints, features and classification on frames already at the
    /// network input size.
    pub inference: Timing,
    /// The same plus resizing each raw frame.
    pub with_preprocessing: Timing,
}

impl fmt::Display for FpsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, t) in [("inference", &self.inference), ("with preprocessing", &self.with_preprocessing)] {
            writeln!(
                f,
                "{name}: {} frames in {:.3} seconds, {:.4} seconds/frame, {:.1} frames/second",
                self.frames, t.wall_time, t.seconds_per_frame, t.fps
            )?;
        }
        Ok(())
    }
}

/// Times the full pipeline over `frames` in batches of `batch`. Each batch is
/// bracketed by two clock readings, inference pass first. When there is more
/// than one batch the first is treated as warm-up and left out.
pub fn fps_benchmark(
    model: &KeypointModel,
    schema: &FeatureSchema,
    svm: &SvmModel,
    frames: &[GrayImage],
    batch: usize,
    clock: &mut dyn Clock,
) -> Result<FpsReport> {
    if frames.is_empty() {
        return Err(Error::param("benchmark needs at least one frame"));
    }
    if batch == 0 {
        return Err(Error::param("batch size must be at least 1"));
    }
    let n = model.config.input_size;
    let visible = [true; crate::keypoints::KEYPOINT_COUNT];
    let prepared: Vec<GrayImage> = frames.iter().map(|f| f.resize_bilinear(n, n)).collect();
    let skip = usize::from(frames.len() > batch);

    let mut run = |preprocess: bool| -> Result<(usize, f64)> {
        let mut counted = 0;
        let mut wall = 0.0;
        for (b, (raw, ready)) in frames.chunks(batch).zip(prepared.chunks(batch)).enumerate() {
            let start = clock.now();
            for (r, p) in raw.iter().zip(ready) {
                let image = if preprocess { r.resize_bilinear(n, n) } else { p.clone() };
                std::hint::black_box(identify(model, schema, svm, &image, &visible)?);
            }
            let end = clock.now();
            if b >= skip {
                counted += raw.len();
                wall += end - start;
            }
        }
        Ok((counted, wall))
    };
    let (frames_timed, bare) = run(false)?;
    let (_, full) = run(true)?;
    Ok(FpsReport {
        frames: frames_timed,
        inference: Timing::new(frames_timed, bare)?,
        with_preprocessing: Timing::new(frames_timed, full)?,
    })
}
