//! Tensor engine: layer primitives, reverse-mode gradients, MAE loss and Adam.

mod adam;
mod gradcheck;
mod network;
mod ops;
mod tensor;

pub use adam::{adam_step, Adam, AdamConfig, AdamState};
pub use gradcheck::{central_difference, finite_diff_grad};
pub use network::{backward, infer_output_shape, Gradients, Layer, LayerSpec, Network, Trace};
pub use ops::{
    conv2d, conv2d_backward, dense, dense_backward, mae_grad, mae_loss, maxpool2d, maxpool2d_backward, relu,
    relu_backward, window_output_dim, ConvGrads, DenseGrads,
};
pub use tensor::{Scalar, Tensor};
