//! The fixed, ordered set of 20 facial keypoints (`keypoints-v1`).

use crate::error::{Error, Result};

pub const KEYPOINT_COUNT: usize = 20;

/// Keypoint identifiers in storage order. "left" is the subject's left as
/// seen in the image (smaller x).
pub const KEYPOINT_NAMES: [&str; KEYPOINT_COUNT] = [
    "brow_left_outer",
    "brow_left_inner",
    "brow_right_inner",
    "brow_right_outer",
    "eye_left_outer",
    "eye_left_inner",
    "eye_right_inner",
    "eye_right_outer",
    "eye_left_center",
    "eye_right_center",
    "nose_bridge",
    "nose_tip",
    "nostril_left",
    "nostril_right",
    "mouth_left",
    "mouth_right",
    "lip_upper",
    "lip_lower",
    "jaw_left",
    "jaw_right",
];

/// Index of a keypoint by name.
pub fn keypoint_index(name: &str) -> Result<usize> {
    KEYPOINT_NAMES
        .iter()
        .position(|&n| n == name)
        .ok_or_else(|| Error::config(format!("unknown keypoint name {name:?}")))
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

/// 20 keypoint positions with per-point visibility.
#[derive(Clone, Debug, PartialEq)]
pub struct KeypointSet {
    pub points: [Point; KEYPOINT_COUNT],
    pub visible: [bool; KEYPOINT_COUNT],
}

impl KeypointSet {
    pub fn new(points: [Point; KEYPOINT_COUNT]) -> Self {
        Self {
            points,
            visible: [true; KEYPOINT_COUNT],
        }
    }

    /// From 40 interleaved coordinates `x0, y0, x1, y1, ...`.
    pub fn from_coords(coords: &[f64]) -> Result<Self> {
        if coords.len() != 2 * KEYPOINT_COUNT {
            return Err(Error::dim(format!(
                "expected {} coordinates, got {}",
                2 * KEYPOINT_COUNT,
                coords.len()
            )));
        }
        let mut points = [Point::default(); KEYPOINT_COUNT];
        for (p, c) in points.iter_mut().zip(coords.chunks_exact(2)) {
            *p = Point::new(c[0], c[1]);
        }
        Ok(Self::new(points))
    }

    pub fn coords(&self) -> Vec<f64> {
        self.points.iter().flat_map(|p| [p.x, p.y]).collect()
    }

    pub fn point(&self, name: &str) -> Result<Point> {
        Ok(self.points[keypoint_index(name)?])
    }

    pub fn map_points(&self, f: impl Fn(Point) -> Point) -> Self {
        Self {
            points: self.points.map(f),
            visible: self.visible,
        }
    }

    pub fn all_visible(&self) -> bool {
        self.visible.iter().all(|&v| v)
    }
}

/// The canonical face in a unit face frame: origin at the face centre, x to
/// the right, y downward, half face width 1.
pub fn canonical_template() -> KeypointSet {
    const P: [(f64, f64); KEYPOINT_COUNT] = [
        (-0.62, -0.58),
        (-0.16, -0.64),
        (0.16, -0.64),
        (0.62, -0.58),
        (-0.64, -0.30),
        (-0.24, -0.28),
        (0.24, -0.28),
        (0.64, -0.30),
        (-0.44, -0.31),
        (0.44, -0.31),
        (0.0, -0.135),
        (0.0, 0.20),
        (-0.15, 0.26),
        (0.15, 0.26),
        (-0.34, 0.56),
        (0.34, 0.56),
        (0.0, 0.49),
        (0.0, 0.66),
        (-0.86, 0.46),
        (0.86, 0.46),
    ];
    KeypointSet::new(P.map(Point::from))
}
