//! Synthetic dataset generation, annotation files and preprocessing.

mod annotations;
mod image;
mod split;
mod synth;

use std::path::Path;

pub use annotations::{header as annotation_header, load_annotations, read_annotations, save_annotations, write_annotations};
pub use image::{resize_with_keypoints, GrayImage};
pub use split::{split, split_indices};
pub use synth::{
    generate_dataset, generate_subjects, image_path, render_sample, Disguise, FaceOffsets, FacePlacement, Sample,
    SubjectTemplate, BACKGROUND_COUNT, FACE_SCALE, VIEWPOINTS,
};

use crate::error::{Error, Result};
use crate::keypoints::KeypointSet;

/// One annotated image as stored in the annotation CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct Annotation {
    /// Image path relative to the dataset directory.
    pub image: String,
    pub subject_id: u32,
    /// 1 to 10 for the disguise combinations, 0 for none.
    pub disguise_id: u8,
    /// Degrees.
    pub viewpoint: f64,
    pub keypoints: KeypointSet,
}

pub const ANNOTATIONS_FILE: &str = "annotations.csv";
pub const MANIFEST_FILE: &str = "manifest.txt";

/// Generation parameters recorded next to a synthetic dataset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub seed: u64,
    pub subjects: usize,
    pub per_subject: usize,
    pub size: usize,
    pub samples: usize,
}

impl Manifest {
    pub fn to_text(&self) -> String {
        format!(
            "generator = dfr-synth-v1\nseed = {}\nsubjects = {}\nper_subject = {}\nsize = {}\nsamples = {}\n",
            self.seed, self.subjects, self.per_subject, self.size, self.samples
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let kv = crate::config::parse_key_values(text)?;
        let get = |k: &str| -> Result<u64> {
            kv.get(k)
                .ok_or_else(|| Error::format("manifest", format!("missing key {k:?}")))?
                .parse()
                .map_err(|_| Error::format("manifest", format!("key {k:?} is not an integer")))
        };
        Ok(Self {
            seed: get("seed")?,
            subjects: get("subjects")? as usize,
            per_subject: get("per_subject")? as usize,
            size: get("size")? as usize,
            samples: get("samples")? as usize,
        })
    }
}

/// Writes PNG images, the annotation CSV and, when given, the manifest.
pub fn save_dataset(dir: &Path, samples: &[Sample], manifest: Option<&Manifest>) -> Result<()> {
    if !dir.is_dir() {
        return Err(Error::io(
            dir,
            std::io::Error::new(std::io::ErrorKind::NotFound, "output directory does not exist"),
        ));
    }
    let images = dir.join("images");
    std::fs::create_dir_all(&images).map_err(|e| Error::io(&images, e))?;
    for s in samples {
        s.image.save_png(&dir.join(&s.annotation.image))?;
    }
    let annotations: Vec<Annotation> = samples.iter().map(|s| s.annotation.clone()).collect();
    save_annotations(&annotations, &dir.join(ANNOTATIONS_FILE))?;
    if let Some(m) = manifest {
        let path = dir.join(MANIFEST_FILE);
        std::fs::write(&path, m.to_text()).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// Reads a dataset directory written by [`save_dataset`] (or any directory
/// holding an annotation CSV and the PNGs it names).
pub fn load_dataset(dir: &Path) -> Result<Vec<Sample>> {
    load_annotations(&dir.join(ANNOTATIONS_FILE))?
        .into_iter()
        .map(|annotation| {
            let image = GrayImage::load_png(&dir.join(&annotation.image))?;
            Ok(Sample {
                image,
                annotation,
                background: None,
            })
        })
        .collect()
}
