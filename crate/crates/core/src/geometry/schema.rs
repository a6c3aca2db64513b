use std::path::Path;

use super::{angle_between_lines, distance_ratio};
use crate::error::{Error, Result};
use crate::keypoints::{canonical_template, keypoint_index, KeypointSet, KEYPOINT_NAMES};

/// The schema shipped with the crate.
pub const DEFAULT_SCHEMA_TEXT: &str = include_str!("../../schema/default-v1");

const HEADER: &str = "dfr-feature-schema";

/// One feature: a distance ratio between two keypoint pairs, or the angle
/// between two lines, each given by two keypoint indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureDef {
    Ratio { num: [usize; 2], den: [usize; 2] },
    Angle { a: [usize; 2], b: [usize; 2] },
}

impl FeatureDef {
    pub fn keypoints(&self) -> [usize; 4] {
        match *self {
            FeatureDef::Ratio { num, den } => [num[0], num[1], den[0], den[1]],
            FeatureDef::Angle { a, b } => [a[0], a[1], b[0], b[1]],
        }
    }

    /// Value on `kps`, or `None` when the geometry is degenerate.
    pub fn evaluate(&self, kps: &KeypointSet) -> Option<f64> {
        let pt = |i: usize| kps.points[i];
        match *self {
            FeatureDef::Ratio { num, den } => distance_ratio((pt(num[0]), pt(num[1])), (pt(den[0]), pt(den[1]))),
            FeatureDef::Angle { a, b } => angle_between_lines((pt(a[0]), pt(a[1])), (pt(b[0]), pt(b[1]))).ok(),
        }
    }

    pub fn label(&self) -> String {
        let n = |i: usize| KEYPOINT_NAMES[i];
        match *self {
            FeatureDef::Ratio { num, den } => {
                format!("ratio {} {} : {} {}", n(num[0]), n(num[1]), n(den[0]), n(den[1]))
            }
            FeatureDef::Angle { a, b } => format!("angle {} {} : {} {}", n(a[0]), n(a[1]), n(b[0]), n(b[1])),
        }
    }
}

/// Ordered, versioned list of features extracted from a keypoint set,
/// together with each feature's value on the canonical template face.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureSchema {
    pub version: u32,
    pub features: Vec<FeatureDef>,
    template_values: Vec<f64>,
}

impl FeatureSchema {
    pub fn default_v1() -> Self {
        Self::parse(DEFAULT_SCHEMA_TEXT).expect("bundled schema is valid")
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Parses the text format: a `dfr-feature-schema <version>` header, then
    /// `ratio a b : c d` and `angle a b : c d` lines. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut version = None;
        let mut features = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| Error::config(format!("schema line {}: {msg}", lineno + 1));
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if version.is_none() {
                match tokens[..] {
                    [HEADER, v] => {
                        version = Some(v.parse::<u32>().map_err(|_| at(format!("bad version {v:?}")))?);
                        continue;
                    }
                    _ => return Err(at(format!("expected `{HEADER} <version>` header"))),
                }
            }
            let [kind, a, b, ":", c, d] = tokens[..] else {
                return Err(at(format!("expected `<ratio|angle> a b : c d`, got {line:?}")));
            };
            let idx = |name: &str| keypoint_index(name).map_err(|e| at(e.to_string()));
            let (p, q) = ([idx(a)?, idx(b)?], [idx(c)?, idx(d)?]);
            if p[0] == p[1] || q[0] == q[1] {
                return Err(at("a pair repeats the same keypoint".into()));
            }
            features.push(match kind {
                "ratio" => FeatureDef::Ratio { num: p, den: q },
                "angle" => FeatureDef::Angle { a: p, b: q },
                other => return Err(at(format!("unknown feature kind {other:?}"))),
            });
        }
        let version = version.ok_or_else(|| Error::config("empty feature schema"))?;
        Self::new(version, features)
    }

    pub fn new(version: u32, features: Vec<FeatureDef>) -> Result<Self> {
        let template = canonical_template();
        let template_values = features
            .iter()
            .map(|f| {
                f.evaluate(&template)
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::config(format!("`{}` is degenerate on the template face", f.label())))
            })
            .collect::<Result<Vec<_>>>()?;
        if features.is_empty() {
            return Err(Error::config("feature schema lists no features"));
        }
        Ok(Self {
            version,
            features,
            template_values,
        })
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn ratio_count(&self) -> usize {
        self.features.iter().filter(|f| matches!(f, FeatureDef::Ratio { .. })).count()
    }

    pub fn angle_count(&self) -> usize {
        self.len() - self.ratio_count()
    }

    /// Values of every feature on the canonical template face.
    pub fn template_values(&self) -> &[f64] {
        &self.template_values
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{HEADER} {}\n", self.version);
        for f in &self.features {
            s.push_str(&f.label());
            s.push('\n');
        }
        s
    }
}
