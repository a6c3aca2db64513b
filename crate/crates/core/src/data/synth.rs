//! Procedural disguised-face generator.
//!
//! Faces are flat-shaded geometry in a unit face frame (see
//! [`canonical_template`]) placed at the image centre, rotated by the
//! viewpoint angle and drawn over one of eight textured backgrounds.
//! Occluders are drawn last; the keypoints they cover are flagged invisible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::image::GrayImage;
use super::Annotation;
use crate::error::{Error, Result};
use crate::keypoints::{canonical_template, keypoint_index, KeypointSet, Point, KEYPOINT_COUNT};

/// In-plane head rotations, degrees.
pub const VIEWPOINTS: [f64; 5] = [-20.0, -10.0, 0.0, 10.0, 20.0];
pub const BACKGROUND_COUNT: u8 = 8;
/// Face half-width as a fraction of the image side.
pub const FACE_SCALE: f64 = 0.34;

const OFFSET_RANGE: f64 = 0.45;
const CANDIDATES: usize = 32;
/// Bridge-to-tip length of an average nose, face units.
const NOSE_LENGTH: f64 = 0.335;
/// Sideways eye movement per unit of eye-spacing offset, face units.
const EYE_SHIFT: f64 = 0.355;

/// Minimum offset separation for `n` subjects; shrinks with `n` so random
/// placement inside the offset box still succeeds.
fn min_separation(n: usize) -> f64 {
    0.65 / (n as f64).sqrt()
}

/// The ten disguise combinations, with ids 1 to 10 in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Disguise {
    Beard,
    Cap,
    Glasses,
    Scarf,
    CapGlasses,
    BeardGlasses,
    BeardCap,
    ScarfGlasses,
    CapScarf,
    CapGlassesScarf,
}

impl Disguise {
    pub const ALL: [Disguise; 10] = [
        Disguise::Beard,
        Disguise::Cap,
        Disguise::Glasses,
        Disguise::Scarf,
        Disguise::CapGlasses,
        Disguise::BeardGlasses,
        Disguise::BeardCap,
        Disguise::ScarfGlasses,
        Disguise::CapScarf,
        Disguise::CapGlassesScarf,
    ];

    pub fn id(self) -> u8 {
        Self::ALL.iter().position(|&d| d == self).expect("listed") as u8 + 1
    }

    /// `0` means no disguise.
    pub fn from_id(id: u8) -> Result<Option<Self>> {
        match id {
            0 => Ok(None),
            1..=10 => Ok(Some(Self::ALL[id as usize - 1])),
            _ => Err(Error::param(format!("unknown disguise id {id}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Disguise::Beard => "beard",
            Disguise::Cap => "cap",
            Disguise::Glasses => "glasses",
            Disguise::Scarf => "scarf",
            Disguise::CapGlasses => "cap+glasses",
            Disguise::BeardGlasses => "beard+glasses",
            Disguise::BeardCap => "beard+cap",
            Disguise::ScarfGlasses => "scarf+glasses",
            Disguise::CapScarf => "cap+scarf",
            Disguise::CapGlassesScarf => "cap+glasses+scarf",
        }
    }

    pub fn has_beard(self) -> bool {
        matches!(self, Disguise::Beard | Disguise::BeardGlasses | Disguise::BeardCap)
    }

    pub fn has_cap(self) -> bool {
        matches!(
            self,
            Disguise::Cap | Disguise::CapGlasses | Disguise::BeardCap | Disguise::CapScarf | Disguise::CapGlassesScarf
        )
    }

    pub fn has_glasses(self) -> bool {
        matches!(
            self,
            Disguise::Glasses
                | Disguise::CapGlasses
                | Disguise::BeardGlasses
                | Disguise::ScarfGlasses
                | Disguise::CapGlassesScarf
        )
    }

    pub fn has_scarf(self) -> bool {
        matches!(
            self,
            Disguise::Scarf | Disguise::ScarfGlasses | Disguise::CapScarf | Disguise::CapGlassesScarf
        )
    }

    /// Keypoints hidden by this disguise. Glasses are clear and hide nothing.
    pub fn occluded(self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.has_cap() {
            out.extend(["brow_left_outer", "brow_left_inner", "brow_right_inner", "brow_right_outer"]);
        }
        if self.has_scarf() {
            out.extend([
                "nose_tip",
                "nostril_left",
                "nostril_right",
                "mouth_left",
                "mouth_right",
                "lip_upper",
                "lip_lower",
                "jaw_left",
                "jaw_right",
            ]);
        } else if self.has_beard() {
            out.extend(["jaw_left", "jaw_right"]);
        }
        out
    }

    /// Visibility flags implied by this disguise.
    pub fn visibility(disguise: Option<Self>) -> [bool; KEYPOINT_COUNT] {
        let mut v = [true; KEYPOINT_COUNT];
        if let Some(d) = disguise {
            for name in d.occluded() {
                v[keypoint_index(name).expect("known keypoint")] = false;
            }
        }
        v
    }
}

/// Per-subject face proportions, as multiplicative factors around 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceOffsets {
    pub eye_spacing: f64,
    pub nose_length: f64,
    pub mouth_width: f64,
    pub jaw_width: f64,
}

impl FaceOffsets {
    fn values(&self) -> [f64; 4] {
        [self.eye_spacing, self.nose_length, self.mouth_width, self.jaw_width]
    }

    /// Largest difference in any single offset.
    pub fn separation(&self, other: &Self) -> f64 {
        self.values().iter().zip(other.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Euclidean distance in the offsets that stay visible under every
    /// disguise: eye spacing, and nose length through the bridge height.
    pub fn visible_distance(&self, other: &Self) -> f64 {
        (self.eye_spacing - other.eye_spacing).hypot(self.nose_length - other.nose_length)
    }

    /// Euclidean distance in offset space.
    pub fn distance(&self, other: &Self) -> f64 {
        self.values().iter().zip(other.values()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubjectTemplate {
    pub subject_id: u32,
    pub offsets: FaceOffsets,
    /// Keypoints in the unit face frame.
    pub keypoints: KeypointSet,
}

impl SubjectTemplate {
    /// Eye spacing moves each eye sideways as a unit; nose length sets the
    /// bridge-to-tip distance; mouth and jaw width scale their points
    /// horizontally.
    pub fn new(subject_id: u32, offsets: FaceOffsets) -> Self {
        let idx = |n| keypoint_index(n).expect("known keypoint");
        let mut k = canonical_template();
                for n in [
            "eye_left_outer",
            "eye_left_inner",
            "eye_right_inner",
            "eye_right_outer",
            "eye_left_center",
            "eye_right_center",
        ] {
            let p = &mut k.points[idx(n)];
            p.x += EYE_SHIFT * (offsets.eye_spacing - 1.0) * p.x.signum();
        }
        let tip_y = k.points[idx("nose_tip")].y;
        let bridge = &mut k.points[idx("nose_bridge")];
        bridge.y = tip_y - NOSE_LENGTH * offsets.nose_length;
        for n in ["mouth_left", "mouth_right"] {
            k.points[idx(n)].x *= offsets.mouth_width;
        }
        for n in ["jaw_left", "jaw_right"] {
            k.points[idx(n)].x *= offsets.jaw_width;
        }
        Self {
            subject_id,
            offsets,
            keypoints: k,
        }
    }
}

fn nearest(subjects: &[SubjectTemplate], dist: impl Fn(&SubjectTemplate) -> f64) -> f64 {
    subjects.iter().map(dist).fold(f64::INFINITY, f64::min)
}

/// Draws `n` subjects by best-candidate sampling: each new subject is the
/// one of `CANDIDATES` random draws lying farthest from those already placed,
/// in all offsets and in the ones every disguise leaves visible. Subjects pairwise differ by at least [`min_separation`]
/// in some offset.
pub fn generate_subjects(n: usize, seed: u64) -> Result<Vec<SubjectTemplate>> {
    if n < 2 {
        return Err(Error::param("at least two subjects are needed"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut subjects: Vec<SubjectTemplate> = Vec::with_capacity(n);
    let mut rounds = 0usize;
    while subjects.len() < n {
        rounds += 1;
        if rounds > 1000 {
            return Err(Error::param(format!("cannot place {n} well-separated subjects")));
        }
        let mut best: Option<(f64, FaceOffsets)> = None;
        for _ in 0..CANDIDATES {
            let mut draw = || 1.0 + rng.gen_range(-OFFSET_RANGE..OFFSET_RANGE);
            let offsets = FaceOffsets {
                eye_spacing: draw(),
                nose_length: draw(),
                mouth_width: draw(),
                jaw_width: draw(),
            };
            let spread = nearest(&subjects, |s| s.offsets.visible_distance(&offsets))
                + nearest(&subjects, |s| s.offsets.distance(&offsets));
            if best.as_ref().is_none_or(|(b, _)| spread > *b) {
                best = Some((spread, offsets));
            }
        }
        let (_, offsets) = best.expect("at least one candidate");
        if subjects
            .iter()
            .all(|s| s.offsets.separation(&offsets) >= min_separation(n))
        {
            subjects.push(SubjectTemplate::new(subjects.len() as u32, offsets));
        }
    }
    Ok(subjects)
}

/// Image produced for one face, plus its annotation.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub image: GrayImage,
    pub annotation: Annotation,
    /// Procedural background id, when known.
    pub background: Option<u8>,
}

impl Sample {
    pub fn subject_id(&self) -> u32 {
        self.annotation.subject_id
    }

    pub fn disguise(&self) -> Option<Disguise> {
        Disguise::from_id(self.annotation.disguise_id).ok().flatten()
    }
}

/// Maps face-frame coordinates into the image.
#[derive(Clone, Copy, Debug)]
pub struct FacePlacement {
    pub center: Point,
    pub scale: f64,
    /// Viewpoint, degrees.
    pub rotation: f64,
}

impl FacePlacement {
    pub fn for_image(size: usize, viewpoint: f64) -> Self {
        let c = size as f64 / 2.0;
        Self {
            center: Point::new(c, c),
            scale: FACE_SCALE * size as f64,
            rotation: viewpoint,
        }
    }

    pub fn to_image(&self, p: Point) -> Point {
        let (s, c) = self.rotation.to_radians().sin_cos();
        Point::new(
            self.center.x + self.scale * (c * p.x - s * p.y),
            self.center.y + self.scale * (s * p.x + c * p.y),
        )
    }

    pub fn to_face(&self, p: Point) -> Point {
        let (s, c) = self.rotation.to_radians().sin_cos();
        let (dx, dy) = ((p.x - self.center.x) / self.scale, (p.y - self.center.y) / self.scale);
        Point::new(c * dx + s * dy, -s * dx + c * dy)
    }
}

#[derive(Clone, Copy, Debug)]
enum Shape {
    Ellipse { c: Point, rx: f64, ry: f64 },
    Ring { c: Point, rx: f64, ry: f64, width: f64 },
    Segment { a: Point, b: Point, half_width: f64 },
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
}

impl Shape {
    fn contains(&self, p: Point) -> bool {
        match *self {
            Shape::Ellipse { c, rx, ry } => ((p.x - c.x) / rx).powi(2) + ((p.y - c.y) / ry).powi(2) <= 1.0,
            Shape::Ring { c, rx, ry, width } => {
                let outer = ((p.x - c.x) / (rx + width)).powi(2) + ((p.y - c.y) / (ry + width)).powi(2) <= 1.0;
                let inner = ((p.x - c.x) / rx).powi(2) + ((p.y - c.y) / ry).powi(2) <= 1.0;
                outer && !inner
            }
            Shape::Segment { a, b, half_width } => {
                let (vx, vy) = (b.x - a.x, b.y - a.y);
                let t = (((p.x - a.x) * vx + (p.y - a.y) * vy) / (vx * vx + vy * vy)).clamp(0.0, 1.0);
                let (qx, qy) = (a.x + t * vx - p.x, a.y + t * vy - p.y);
                qx * qx + qy * qy <= half_width * half_width
            }
            Shape::Rect { x0, y0, x1, y1 } => p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1,
        }
    }
}

/// Fill rule for a layer: a flat tone, horizontal stripes, or a blend over
/// what is already drawn.
#[derive(Clone, Copy, Debug)]
enum Paint {
    Flat(f64),
    Stripes { a: f64, b: f64, period: f64 },
    Tint { tone: f64, alpha: f64 },
}

#[derive(Clone, Copy, Debug)]
struct Layer {
    shape: Shape,
    /// Optional second shape the layer is clipped to.
    clip: Option<Shape>,
    /// Optional shape carved out of the layer.
    hole: Option<Shape>,
    paint: Paint,
}

fn layer(shape: Shape, paint: Paint) -> Layer {
    Layer {
        shape,
        clip: None,
        hole: None,
        paint,
    }
}

fn face_layers(kps: &KeypointSet, disguise: Option<Disguise>, skin: f64, accent: f64) -> Vec<Layer> {
    let p = |n: &str| kps.points[keypoint_index(n).expect("known keypoint")];
    let half_width = (p("jaw_right").x / 0.935).max(p("eye_right_outer").x + 0.25);
    let head = Shape::Ellipse {
        c: Point::new(0.0, 0.05),
        rx: half_width,
        ry: 1.3,
    };
    let chin = Point::new(0.0, 1.3);
    let mut layers = vec![
        layer(head, Paint::Flat(skin)),
        layer(
            Shape::Segment { a: p("jaw_left"), b: chin, half_width: 0.035 },
            Paint::Flat(skin - 45.0),
        ),
        layer(
            Shape::Segment { a: p("jaw_right"), b: chin, half_width: 0.035 },
            Paint::Flat(skin - 45.0),
        ),
        layer(Shape::Ellipse { c: p("jaw_left"), rx: 0.06, ry: 0.06 }, Paint::Flat(skin - 90.0)),
        layer(Shape::Ellipse { c: p("jaw_right"), rx: 0.06, ry: 0.06 }, Paint::Flat(skin - 90.0)),
        layer(
            Shape::Segment { a: p("brow_left_outer"), b: p("brow_left_inner"), half_width: 0.045 },
            Paint::Flat(55.0),
        ),
        layer(
            Shape::Segment { a: p("brow_right_inner"), b: p("brow_right_outer"), half_width: 0.045 },
            Paint::Flat(55.0),
        ),
    ];
    for (outer, inner, centre) in [
        ("eye_left_outer", "eye_left_inner", "eye_left_center"),
        ("eye_right_inner", "eye_right_outer", "eye_right_center"),
    ] {
        let c = p(centre);
        let rx = (p(inner).x - p(outer).x).abs() / 2.0;
        layers.push(layer(Shape::Ellipse { c, rx, ry: 0.085 }, Paint::Flat(235.0)));
        layers.push(layer(Shape::Ellipse { c, rx: 0.065, ry: 0.065 }, Paint::Flat(25.0)));
    }
    layers.push(layer(
        Shape::Segment { a: p("nose_bridge"), b: p("nose_tip"), half_width: 0.03 },
        Paint::Flat(skin - 50.0),
    ));
    layers.push(layer(Shape::Ellipse { c: p("nose_bridge"), rx: 0.08, ry: 0.05 }, Paint::Flat(skin - 110.0)));
    layers.push(layer(Shape::Ellipse { c: p("nose_tip"), rx: 0.05, ry: 0.05 }, Paint::Flat(skin + 30.0)));
    for n in ["nostril_left", "nostril_right"] {
        layers.push(layer(Shape::Ellipse { c: p(n), rx: 0.045, ry: 0.035 }, Paint::Flat(60.0)));
    }
    let (up, low) = (p("lip_upper"), p("lip_lower"));
    let mouth = Shape::Ellipse {
        c: Point::new((up.x + low.x) / 2.0, (up.y + low.y) / 2.0),
        rx: (p("mouth_right").x - p("mouth_left").x) / 2.0,
        ry: (low.y - up.y) / 2.0,
    };
    layers.push(layer(mouth, Paint::Flat(95.0)));
    layers.push(layer(
        Shape::Segment { a: p("mouth_left"), b: p("mouth_right"), half_width: 0.02 },
        Paint::Flat(35.0),
    ));

    let Some(d) = disguise else { return layers };
    if d.has_beard() {
        layers.push(Layer {
            shape: Shape::Rect { x0: -2.0, y0: 0.36, x1: 2.0, y1: 2.0 },
            clip: Some(head),
            hole: Some(match mouth {
                Shape::Ellipse { c, rx, ry } => Shape::Ellipse { c, rx: rx + 0.05, ry: ry + 0.04 },
                s => s,
            }),
            paint: Paint::Stripes { a: 40.0, b: 60.0, period: 0.06 },
        });
    }
    if d.has_scarf() {
        layers.push(layer(
            Shape::Rect { x0: -1.25, y0: 0.08, x1: 1.25, y1: 2.0 },
            Paint::Stripes { a: accent, b: accent * 0.6, period: 0.18 },
        ));
    }
    if d.has_glasses() {
        for (outer, inner, centre) in [
            ("eye_left_outer", "eye_left_inner", "eye_left_center"),
            ("eye_right_inner", "eye_right_outer", "eye_right_center"),
        ] {
            let c = p(centre);
            let rx = (p(inner).x - p(outer).x).abs() / 2.0 + 0.09;
            layers.push(layer(Shape::Ellipse { c, rx, ry: 0.17 }, Paint::Tint { tone: 90.0, alpha: 0.25 }));
            layers.push(layer(Shape::Ring { c, rx, ry: 0.17, width: 0.04 }, Paint::Flat(20.0)));
        }
        let (l, r) = (p("eye_left_inner"), p("eye_right_inner"));
        layers.push(layer(
            Shape::Segment {
                a: Point::new(l.x + 0.09, l.y - 0.03),
                b: Point::new(r.x - 0.09, r.y - 0.03),
                half_width: 0.02,
            },
            Paint::Flat(20.0),
        ));
    }
    if d.has_cap() {
        layers.push(layer(
            Shape::Ellipse { c: Point::new(0.0, -0.95), rx: 1.0, ry: 0.55 },
            Paint::Flat(accent * 0.5),
        ));
        layers.push(layer(
            Shape::Rect { x0: -1.15, y0: -0.74, x1: 1.15, y1: -0.5 },
            Paint::Flat(accent * 0.35),
        ));
    }
    layers
}

fn background_value(id: u8, x: f64, y: f64, size: f64, phase: f64) -> f64 {
    let (u, v) = (x / size, y / size);
    match id % BACKGROUND_COUNT {
        0 => 120.0 + 100.0 * u,
        1 => 200.0 - 120.0 * v,
        2 => {
            if ((u * 8.0 + phase).floor() as i64 + (v * 8.0).floor() as i64) % 2 == 0 {
                70.0
            } else {
                180.0
            }
        }
        3 => 128.0 + 90.0 * (std::f64::consts::TAU * (u * 5.0 + phase)).sin(),
        4 => 128.0 + 80.0 * (std::f64::consts::TAU * ((u + v) * 6.0 + phase)).sin(),
        5 => 220.0 - 180.0 * ((u - 0.5).powi(2) + (v - 0.5).powi(2)).sqrt(),
        6 => 60.0 + 40.0 * ((u * 23.0 + phase).sin() * (v * 17.0).cos() + 1.0),
        _ => {
            if (v * 5.0 + phase).floor() as i64 % 2 == 0 {
                45.0
            } else {
                215.0
            }
        }
    }
}

/// Renders one face. The annotation is the subject template mapped through
/// [`FacePlacement::for_image`]; visibility follows [`Disguise::occluded`].
pub fn render_sample(
    subject: &SubjectTemplate,
    disguise: Option<Disguise>,
    viewpoint: f64,
    background: u8,
    size: usize,
    rng: &mut impl Rng,
) -> Sample {
    let placement = FacePlacement::for_image(size, viewpoint);
    let illumination: f64 = rng.gen_range(0.8..1.2);
    let skin = rng.gen_range(150.0..200.0);
    let accent = rng.gen_range(120.0..220.0);
    let phase: f64 = rng.gen_range(0.0..1.0);
    let layers = face_layers(&subject.keypoints, disguise, skin, accent);

    const SUB: [f64; 2] = [0.25, 0.75];
    let mut pixels = Vec::with_capacity(size * size);
    for y in 0..size {
        for x in 0..size {
            let mut acc = 0.0;
            for sy in SUB {
                for sx in SUB {
                    let (ix, iy) = (x as f64 + sx, y as f64 + sy);
                    let fp = placement.to_face(Point::new(ix, iy));
                    let mut v = background_value(background, ix, iy, size as f64, phase);
                    for l in &layers {
                        let inside = l.shape.contains(fp)
                            && l.clip.is_none_or(|c| c.contains(fp))
                            && l.hole.is_none_or(|h| !h.contains(fp));
                        if inside {
                            v = match l.paint {
                                Paint::Flat(t) => t,
                                Paint::Stripes { a, b, period } => {
                                    if (fp.y / period).floor() as i64 % 2 == 0 {
                                        a
                                    } else {
                                        b
                                    }
                                }
                                Paint::Tint { tone, alpha } => v * (1.0 - alpha) + tone * alpha,
                            };
                        }
                    }
                    acc += v;
                }
            }
            let noise: f64 = rng.gen_range(-6.0..6.0);
            pixels.push((acc / 4.0 * illumination + noise).round().clamp(0.0, 255.0) as u8);
        }
    }
    let mut keypoints = subject.keypoints.map_points(|p| placement.to_image(p));
    keypoints.visible = Disguise::visibility(disguise);
    Sample {
        image: GrayImage::new(size, size, pixels).expect("size x size pixels"),
        annotation: Annotation {
            image: String::new(),
            subject_id: subject.subject_id,
            disguise_id: disguise.map_or(0, Disguise::id),
            viewpoint,
            keypoints,
        },
        background: Some(background),
    }
}

/// Relative path under a dataset directory for sample `index`.
pub fn image_path(index: usize) -> String {
    format!("images/{index:05}.png")
}

/// Synthesises `n_subjects * per_subject` samples. Each subject cycles
/// through the ten disguises; viewpoint and background are drawn from a
/// stream seeded by `(seed, sample index)`, so the output does not depend on
/// generation order.
pub fn generate_dataset(n_subjects: usize, per_subject: usize, seed: u64, size: usize) -> Result<Vec<Sample>> {
    if size < 16 {
        return Err(Error::param(format!("image size {size} is too small to draw a face")));
    }
    let subjects = generate_subjects(n_subjects, seed)?;
    let mut out = Vec::with_capacity(n_subjects * per_subject);
    for subject in &subjects {
        for k in 0..per_subject {
            let index = out.len();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64 + 1);
            let disguise = Disguise::ALL[k % Disguise::ALL.len()];
            let viewpoint = VIEWPOINTS[rng.gen_range(0..VIEWPOINTS.len())];
            let background = rng.gen_range(0..BACKGROUND_COUNT);
            let mut sample = render_sample(subject, Some(disguise), viewpoint, background, size, &mut rng);
            sample.annotation.image = image_path(index);
            out.push(sample);
        }
    }
    Ok(out)
}
