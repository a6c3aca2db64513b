//! Image to identity: keypoints, then geometric features, then the SVM.

use crate::data::{resize_with_keypoints, Disguise, GrayImage, Sample};
use crate::error::Result;
use crate::geometry::{extract_features, FeatureSchema, FeatureVector};
use crate::keypoint::{predict_keypoints, KeypointModel};
use crate::keypoints::{KeypointSet, Point, KEYPOINT_COUNT};
use crate::svm::{predict, Prediction, SvmModel};

/// Predicts keypoints for an image of any size, in that image's pixel
/// coordinates. Returns whether the image had to be resized.
pub fn locate_keypoints(model: &KeypointModel, image: &GrayImage) -> Result<(KeypointSet, bool)> {
    let n = model.config.input_size;
    if image.width == n && image.height == n {
        return Ok((predict_keypoints(model, image)?, false));
    }
    let resized = image.resize_bilinear(n, n);
    let sx = image.width as f64 / n as f64;
    let sy = image.height as f64 / n as f64;
    let kps = predict_keypoints(model, &resized)?;
    Ok((kps.map_points(|p| Point::new(p.x * sx, p.y * sy)), true))
}

/// Features of predicted keypoints with the given visibility applied.
pub fn image_features(
    model: &KeypointModel,
    schema: &FeatureSchema,
    image: &GrayImage,
    visible: &[bool; KEYPOINT_COUNT],
) -> Result<FeatureVector> {
    let (mut kps, _) = locate_keypoints(model, image)?;
    kps.visible = *visible;
    Ok(extract_features(&kps, schema))
}

pub fn identify(
    model: &KeypointModel,
    schema: &FeatureSchema,
    svm: &SvmModel,
    image: &GrayImage,
    visible: &[bool; KEYPOINT_COUNT],
) -> Result<Prediction> {
    let fv = image_features(model, schema, image, visible)?;
    predict(svm, &fv.values)
}

/// Resizes samples whose image side differs from `size`, rescaling their
/// annotations. Returns how many were resized.
pub fn fit_samples(samples: &mut [Sample], size: usize) -> Result<usize> {
    let mut resized = 0;
    for s in samples.iter_mut() {
        if s.image.width != size || s.image.height != size {
            let (image, kps) = resize_with_keypoints(&s.image, &s.annotation.keypoints, size)?;
            s.image = image;
            s.annotation.keypoints = kps;
            resized += 1;
        }
    }
    Ok(resized)
}

/// Features of a sample's annotated keypoints, with the visibility implied
/// by its disguise.
pub fn annotation_features(sample: &Sample, schema: &FeatureSchema) -> FeatureVector {
    let mut kps = sample.annotation.keypoints.clone();
    kps.visible = Disguise::visibility(sample.disguise());
    extract_features(&kps, schema)
}

/// Features of the network's keypoints for a sample, with the visibility
/// implied by its disguise.
pub fn predicted_features(model: &KeypointModel, schema: &FeatureSchema, sample: &Sample) -> Result<FeatureVector> {
    image_features(model, schema, &sample.image, &Disguise::visibility(sample.disguise()))
}

/// Features of the network's keypoints for every sample, in order. This is
/// what the SVM is trained on, so training and test vectors carry the same
/// kind of localisation error.
pub fn predicted_feature_rows(model: &KeypointModel, schema: &FeatureSchema, samples: &[Sample]) -> Result<Vec<Vec<f64>>> {
    samples.iter().map(|s| predicted_features(model, schema, s).map(|f| f.values)).collect()
}
