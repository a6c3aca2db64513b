//! Planar keypoint geometry and the feature vectors built from it.

mod features;
mod schema;

pub use features::{extract_features, FeatureVector};
pub use schema::{FeatureDef, FeatureSchema, DEFAULT_SCHEMA_TEXT};

use crate::error::{Error, Result};
use crate::keypoints::Point;

pub fn euclidean_distance(p1: Point, p2: Point) -> f64 {
    (p1.x - p2.x).hypot(p1.y - p2.y)
}

/// Slope `(y2 - y1) / (x2 - x1)` of the line through two points, or `None`
/// for a vertical line.
pub fn slope(p1: Point, p2: Point) -> Option<f64> {
    let dx = p2.x - p1.x;
    if dx == 0.0 {
        None
    } else {
        Some((p2.y - p1.y) / dx)
    }
}

/// Unsigned angle between two lines in degrees, in `[0, 90]`.
///
/// Computed from direction vectors as `atan2(|cross|, dot)` folded into the
/// first quadrant. Where both slopes exist and `1 + m1 m2 != 0` this equals
/// `|atan((m1 - m2) / (1 + m1 m2))|`; vertical and perpendicular lines need
/// no special casing.
pub fn angle_between_lines(line_a: (Point, Point), line_b: (Point, Point)) -> Result<f64> {
    let (ax, ay) = (line_a.1.x - line_a.0.x, line_a.1.y - line_a.0.y);
    let (bx, by) = (line_b.1.x - line_b.0.x, line_b.1.y - line_b.0.y);
    if (ax == 0.0 && ay == 0.0) || (bx == 0.0 && by == 0.0) {
        return Err(Error::param("a line needs two distinct endpoints"));
    }
    let cross = ax * by - ay * bx;
    let dot = ax * bx + ay * by;
    let theta = cross.abs().atan2(dot.abs()).to_degrees();
    Ok(theta.clamp(0.0, 90.0))
}

/// `|pair_a| / |pair_b|`, or `None` when the denominator pair coincides.
pub fn distance_ratio(pair_a: (Point, Point), pair_b: (Point, Point)) -> Option<f64> {
    let den = euclidean_distance(pair_b.0, pair_b.1);
    if den == 0.0 {
        None
    } else {
        Some(euclidean_distance(pair_a.0, pair_a.1) / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn distances() {
        assert_eq!(euclidean_distance(p(0., 0.), p(3., 4.)), 5.0);
        assert_eq!(euclidean_distance(p(2., 7.), p(2., 7.)), 0.0);
        assert_eq!(euclidean_distance(p(1., 1.), p(4., 5.)), 5.0);
    }

    #[test]
    fn slopes() {
        assert_eq!(slope(p(0., 0.), p(2., 2.)), Some(1.0));
        assert_eq!(slope(p(0., 5.), p(3., 5.)), Some(0.0));
        assert_eq!(slope(p(1., 0.), p(1., 9.)), None);
    }

    #[test]
    fn angles() {
        let a = angle_between_lines((p(0., 0.), p(1., 1.)), (p(0., 0.), p(1., 0.))).unwrap();
        assert!((a - 45.0).abs() < 1e-9);
        let a = angle_between_lines((p(0., 0.), p(2., 1.)), (p(5., 5.), p(9., 7.))).unwrap();
        assert!(a.abs() < 1e-9);
        let a = angle_between_lines((p(0., 0.), p(0., 1.)), (p(0., 0.), p(1., 0.))).unwrap();
        assert!((a - 90.0).abs() < 1e-9);
        assert!(angle_between_lines((p(1., 1.), p(1., 1.)), (p(0., 0.), p(1., 0.))).is_err());
    }

    #[test]
    fn ratios() {
        let a = (p(0., 0.), p(3., 4.));
        assert_eq!(distance_ratio(a, a), Some(1.0));
        assert_eq!(distance_ratio((p(0., 0.), p(6., 8.)), a), Some(2.0));
        assert_eq!(distance_ratio(a, (p(2., 2.), p(2., 2.))), None);
    }
}
