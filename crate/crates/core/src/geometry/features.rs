use super::schema::FeatureSchema;
use crate::keypoints::KeypointSet;

/// Feature values in schema order. `mask[i]` is true when every keypoint
/// behind feature `i` was visible; masked-out entries carry the template
/// face's value instead.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn extract_features(kps: &KeypointSet, schema: &FeatureSchema) -> FeatureVector {
    let template = schema.template_values();
    let (values, mask) = schema
        .features
        .iter()
        .zip(template)
        .map(|(f, &fallback)| {
            let visible = f.keypoints().iter().all(|&i| kps.visible[i]);
            match f.evaluate(kps).filter(|_| visible) {
                Some(v) => (v, true),
                None => (fallback, false),
            }
        })
        .unzip();
    FeatureVector { values, mask }
}
