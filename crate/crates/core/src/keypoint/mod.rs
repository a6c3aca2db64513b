//! Keypoint regression network: architecture presets, training, inference
//! and the model file format.

mod config;
mod io;
mod model;

pub use config::{ModelConfig, Preset};
pub use io::{load_model, read_model, save_model, write_model, MODEL_FORMAT_VERSION, MODEL_MAGIC};
pub use model::{build_model, predict_keypoints, train, train_with_progress, EpochLoss, KeypointModel, TrainOptions};
