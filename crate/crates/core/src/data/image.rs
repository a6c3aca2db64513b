use std::path::Path;

use crate::error::{Error, Result};
use crate::keypoints::KeypointSet;
use crate::nn::Tensor;

/// 8-bit single channel image, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || pixels.len() != width * height {
            return Err(Error::dim(format!(
                "{width}x{height} image needs {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Network input: a `[1, H, W]` tensor with values in `[-0.5, 0.5]`.
    pub fn to_tensor(&self) -> Tensor<f32> {
        Tensor::new(
            vec![1, self.height, self.width],
            self.pixels.iter().map(|&p| p as f32 / 255.0 - 0.5).collect(),
        )
        .expect("image dimensions are positive")
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        let img = image::GrayImage::from_raw(self.width as u32, self.height as u32, self.pixels.clone())
            .expect("pixel count checked at construction");
        img.save_with_format(path, image::ImageFormat::Png).map_err(|e| image_err(path, e))
    }

    pub fn load_png(path: &Path) -> Result<Self> {
        let img = image::open(path).map_err(|e| image_err(path, e))?.to_luma8();
        let (w, h) = img.dimensions();
        Self::new(w as usize, h as usize, img.into_raw())
    }

    /// Bilinear resample to `width x height` using pixel-centre alignment.
    pub fn resize_bilinear(&self, width: usize, height: usize) -> Self {
        if width == self.width && height == self.height {
            return self.clone();
        }
        let sx = self.width as f64 / width as f64;
        let sy = self.height as f64 / height as f64;
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            let fy = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, (self.height - 1) as f64);
            let y0 = fy.floor() as usize;
            let y1 = (y0 + 1).min(self.height - 1);
            let wy = fy - y0 as f64;
            for x in 0..width {
                let fx = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, (self.width - 1) as f64);
                let x0 = fx.floor() as usize;
                let x1 = (x0 + 1).min(self.width - 1);
                let wx = fx - x0 as f64;
                let p = |xx, yy| self.get(xx, yy) as f64;
                let top = p(x0, y0) * (1.0 - wx) + p(x1, y0) * wx;
                let bottom = p(x0, y1) * (1.0 - wx) + p(x1, y1) * wx;
                pixels.push((top * (1.0 - wy) + bottom * wy).round().clamp(0.0, 255.0) as u8);
            }
        }
        Self { width, height, pixels }
    }
}

fn image_err(path: &Path, e: image::ImageError) -> Error {
    match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::format(path.display().to_string(), other.to_string()),
    }
}

/// Resizes an image to `target x target` and scales every keypoint by the
/// same per-axis factor.
pub fn resize_with_keypoints(image: &GrayImage, kps: &KeypointSet, target: usize) -> Result<(GrayImage, KeypointSet)> {
    if target == 0 {
        return Err(Error::param("resize target must be at least 1 pixel"));
    }
    let sx = target as f64 / image.width as f64;
    let sy = target as f64 / image.height as f64;
    let resized = image.resize_bilinear(target, target);
    let kps = kps.map_points(|p| crate::keypoints::Point::new(p.x * sx, p.y * sy));
    Ok((resized, kps))
}
