use crate::error::{Error, Result};
use crate::keypoints::{KeypointSet, KEYPOINT_COUNT};

/// Default accuracy threshold in pixels at a 227-pixel input.
pub const DEFAULT_TAU_227: f64 = 5.0;

/// Lower edges of the error histogram bins, in pixels. The last bin is open.
pub const HISTOGRAM_EDGES: [f64; 10] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 7.5, 10.0, 15.0, 20.0];

/// Thresholds for the accuracy curve: 0 to 20 px in half-pixel steps.
pub fn curve_thresholds() -> Vec<f64> {
    (0..=40).map(|i| i as f64 * 0.5).collect()
}

/// `DEFAULT_TAU_227` rescaled to an input of `size` pixels.
pub fn default_tau(size: usize) -> f64 {
    DEFAULT_TAU_227 * size as f64 / 227.0
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KeypointErrorReport {
    pub samples: usize,
    /// Mean Euclidean error per keypoint, pixels.
    pub mean_error: Vec<f64>,
    /// Mean absolute coordinate error per keypoint, pixels.
    pub keypoint_mae: Vec<f64>,
    /// `histogram[k][b]` counts samples whose keypoint `k` error falls in bin `b`.
    pub histogram: Vec<Vec<u64>>,
    /// Mean absolute error over every coordinate.
    pub mae: f64,
    pub tau: f64,
    /// Fraction of all keypoints with error at most `tau`.
    pub accuracy: f64,
    /// `(tau, accuracy)` pairs.
    pub curve: Vec<(f64, f64)>,
}

fn bin_of(e: f64) -> usize {
    HISTOGRAM_EDGES.iter().rposition(|&lo| e >= lo).unwrap_or(0)
}

pub fn keypoint_errors(preds: &[KeypointSet], gts: &[KeypointSet], tau: f64) -> Result<KeypointErrorReport> {
    if preds.len() != gts.len() {
        return Err(Error::param(format!(
            "{} predictions for {} ground-truth sets",
            preds.len(),
            gts.len()
        )));
    }
    if !(tau >= 0.0) {
        return Err(Error::param(format!("threshold must be non-negative, got {tau}")));
    }
    let n = preds.len();
    if n == 0 {
        return Ok(KeypointErrorReport { tau, ..Default::default() });
    }
    let mut mean_error = vec![0.0; KEYPOINT_COUNT];
    let mut keypoint_mae = vec![0.0; KEYPOINT_COUNT];
    let mut histogram = vec![vec![0u64; HISTOGRAM_EDGES.len()]; KEYPOINT_COUNT];
    let mut errors = Vec::with_capacity(n * KEYPOINT_COUNT);
    for (p, g) in preds.iter().zip(gts) {
        for k in 0..KEYPOINT_COUNT {
            let (dx, dy) = (p.points[k].x - g.points[k].x, p.points[k].y - g.points[k].y);
            let e = (dx * dx + dy * dy).sqrt();
            mean_error[k] += e;
            keypoint_mae[k] += (dx.abs() + dy.abs()) / 2.0;
            histogram[k][bin_of(e)] += 1;
            errors.push(e);
        }
    }
    let nf = n as f64;
    mean_error.iter_mut().for_each(|v| *v /= nf);
    keypoint_mae.iter_mut().for_each(|v| *v /= nf);
    let mae = keypoint_mae.iter().sum::<f64>() / KEYPOINT_COUNT as f64;
    let within = |t: f64| errors.iter().filter(|&&e| e <= t).count() as f64 / errors.len() as f64;
    Ok(KeypointErrorReport {
        samples: n,
        mean_error,
        keypoint_mae,
        histogram,
        mae,
        tau,
        accuracy: within(tau),
        curve: curve_thresholds().into_iter().map(|t| (t, within(t))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keypoints::{canonical_template, Point};

    fn face() -> KeypointSet {
        canonical_template().map_points(|p| Point::new(48.0 + 20.0 * p.x, 48.0 + 20.0 * p.y))
    }

    #[test]
    fn perfect_predictions() {
        let r = keypoint_errors(&[face(), face()], &[face(), face()], 1.0).unwrap();
        assert!(r.mean_error.iter().all(|&e| e == 0.0));
        assert_eq!(r.mae, 0.0);
        assert_eq!(r.accuracy, 1.0);
        assert!(r.histogram.iter().all(|h| h[0] == 2 && h.iter().sum::<u64>() == 2));
    }

    #[test]
    fn three_four_offset() {
        let gt = face();
        let mut p = gt.clone();
        p.points[3] = Point::new(p.points[3].x + 3.0, p.points[3].y + 4.0);
        let r = keypoint_errors(&[p], &[gt], 4.0).unwrap();
        assert_eq!(r.mean_error[3], 5.0);
        assert_eq!(r.keypoint_mae[3], 3.5);
        assert_eq!(r.mae, 3.5 / 20.0);
        assert_eq!(r.accuracy, 19.0 / 20.0);
        assert_eq!(r.histogram[3][bin_of(5.0)], 1);
    }

    #[test]
    fn mismatched_lengths() {
        assert!(matches!(keypoint_errors(&[face()], &[], 5.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn bins() {
        assert_eq!(bin_of(0.0), 0);
        assert_eq!(bin_of(0.99), 0);
        assert_eq!(bin_of(5.0), 5);
        assert_eq!(bin_of(100.0), HISTOGRAM_EDGES.len() - 1);
    }
}
