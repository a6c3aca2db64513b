use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::ModelConfig;
use crate::data::{GrayImage, Sample};
use crate::error::{Error, Result};
use crate::keypoints::{KeypointSet, Point};
use crate::nn::{Adam, AdamConfig, Network, Tensor};

/// Mean training loss over one epoch, in normalised coordinate units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochLoss {
    /// 1-based, continuing across repeated `train` calls.
    pub epoch: usize,
    pub loss: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KeypointModel {
    pub config: ModelConfig,
    pub network: Network<f32>,
    pub history: Vec<EpochLoss>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainOptions {
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            epochs: 150,
            batch_size: 50,
            adam: AdamConfig::default(),
        }
    }
}

/// Initialises the network for `config`. Parameters depend only on the seed.
pub fn build_model(config: &ModelConfig) -> Result<KeypointModel> {
    let specs = config.layer_specs()?;
    let network = Network::new(&config.input_shape(), &specs, config.seed)?;
    Ok(KeypointModel {
        config: config.clone(),
        network,
        history: Vec::new(),
    })
}

impl KeypointModel {
    fn input_tensor(&self, image: &GrayImage) -> Result<Tensor<f32>> {
        let n = self.config.input_size;
        if image.width != n || image.height != n {
            return Err(Error::dim(format!(
                "model expects {n}x{n} images, got {}x{}; resize first",
                image.width, image.height
            )));
        }
        Ok(image.to_tensor())
    }

    fn normalised_target(&self, kps: &KeypointSet) -> Vec<f32> {
        let n = self.config.input_size as f64;
        kps.coords().iter().map(|&c| (c / n) as f32).collect()
    }

    /// Raw network output, in pixels, before clamping.
    pub fn predict_coords(&self, image: &GrayImage) -> Result<Vec<f64>> {
        let out = self.network.forward(&self.input_tensor(image)?)?;
        let n = self.config.input_size as f64;
        Ok(out.data().iter().map(|&v| v as f64 * n).collect())
    }
}

/// Predicted keypoints in pixel coordinates, clamped to the image. All
/// points are flagged visible: the regressor always emits all twenty.
pub fn predict_keypoints(model: &KeypointModel, image: &GrayImage) -> Result<KeypointSet> {
    let n = model.config.input_size as f64;
    let coords = model.predict_coords(image)?;
    let kps = KeypointSet::from_coords(&coords)?;
    Ok(kps.map_points(|p| Point::new(p.x.clamp(0.0, n), p.y.clamp(0.0, n))))
}

/// Trains with mini-batch Adam on the mean absolute error between predicted
/// and annotated coordinates, both divided by the input size. Sample order is
/// reshuffled every epoch from the model seed.
pub fn train(model: KeypointModel, dataset: &[Sample], options: &TrainOptions) -> Result<KeypointModel> {
    train_with_progress(model, dataset, options, |_| {})
}

pub fn train_with_progress(
    mut model: KeypointModel,
    dataset: &[Sample],
    options: &TrainOptions,
    mut on_epoch: impl FnMut(EpochLoss),
) -> Result<KeypointModel> {
    if dataset.is_empty() {
        return Err(Error::param("cannot train on an empty dataset"));
    }
    if options.batch_size == 0 {
        return Err(Error::param("batch size must be at least 1"));
    }
    let inputs = dataset
        .iter()
        .map(|s| model.input_tensor(&s.image))
        .collect::<Result<Vec<_>>>()?;
    let targets: Vec<Vec<f32>> = dataset
        .iter()
        .map(|s| model.normalised_target(&s.annotation.keypoints))
        .collect();

    let mut adam = Adam::new(&model.network, options.adam);
    let first_epoch = model.history.last().map_or(1, |h| h.epoch + 1);
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    for epoch in first_epoch..first_epoch + options.epochs {
        let mut rng = ChaCha8Rng::seed_from_u64(model.config.seed ^ (epoch as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        order.shuffle(&mut rng);
        let mut total = 0.0f64;
        for batch in order.chunks(options.batch_size) {
            let mut sum: Option<Vec<Tensor<f32>>> = None;
            for &i in batch {
                let (loss, grads) = model.network.loss_and_gradients(&inputs[i], &targets[i])?;
                total += loss as f64;
                match &mut sum {
                    None => sum = Some(grads),
                    Some(acc) => {
                        for (a, g) in acc.iter_mut().zip(&grads) {
                            a.add_scaled(g, 1.0);
                        }
                    }
                }
            }
            let mut grads = sum.expect("chunks are non-empty");
            let scale = 1.0 / batch.len() as f32;
            for g in &mut grads {
                g.data_mut().iter_mut().for_each(|v| *v *= scale);
            }
            adam.step(&mut model.network, &grads)?;
        }
        let record = EpochLoss {
            epoch,
            loss: total / dataset.len() as f64,
        };
        if !record.loss.is_finite() {
            return Err(Error::param(format!("training diverged at epoch {epoch}")));
        }
        model.history.push(record);
        on_epoch(record);
    }
    Ok(model)
}
