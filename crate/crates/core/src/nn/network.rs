use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ops::{self, window_output_dim};
use super::tensor::{Scalar, Tensor};
use crate::error::{Error, Result};

/// One stage of a sequential network.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerSpec {
    Conv {
        in_channels: usize,
        out_channels: usize,
        kernel: usize,
        stride: usize,
        padding: usize,
    },
    MaxPool {
        size: usize,
        stride: usize,
    },
    Relu,
    Flatten,
    Dense {
        inputs: usize,
        outputs: usize,
    },
}

impl LayerSpec {
    pub fn conv(in_channels: usize, out_channels: usize, kernel: usize, stride: usize, padding: usize) -> Self {
        LayerSpec::Conv {
            in_channels,
            out_channels,
            kernel,
            stride,
            padding,
        }
    }

    pub fn dense(inputs: usize, outputs: usize) -> Self {
        LayerSpec::Dense { inputs, outputs }
    }

    /// Shape produced by this layer for an input of `shape`.
    pub fn output_shape(&self, shape: &[usize]) -> Result<Vec<usize>> {
        match *self {
            LayerSpec::Conv {
                in_channels,
                out_channels,
                kernel,
                stride,
                padding,
            } => {
                if kernel == 0 || stride == 0 || in_channels == 0 || out_channels == 0 {
                    return Err(Error::config(format!("invalid conv layer {self:?}")));
                }
                let [c, h, w] = shape[..] else {
                    return Err(Error::config(format!("conv layer needs [C, H, W] input, got {shape:?}")));
                };
                if c != in_channels {
                    return Err(Error::config(format!(
                        "conv layer expects {in_channels} channels, input has {c}"
                    )));
                }
                match (
                    window_output_dim(h, kernel, stride, padding),
                    window_output_dim(w, kernel, stride, padding),
                ) {
                    (Some(ho), Some(wo)) => Ok(vec![out_channels, ho, wo]),
                    _ => Err(Error::config(format!(
                        "conv kernel {kernel} (padding {padding}) leaves no output for {h}x{w} input"
                    ))),
                }
            }
            LayerSpec::MaxPool { size, stride } => {
                if size == 0 || stride == 0 {
                    return Err(Error::config(format!("invalid pooling layer {self:?}")));
                }
                let [c, h, w] = shape[..] else {
                    return Err(Error::config(format!("pooling needs [C, H, W] input, got {shape:?}")));
                };
                match (window_output_dim(h, size, stride, 0), window_output_dim(w, size, stride, 0)) {
                    (Some(ho), Some(wo)) => Ok(vec![c, ho, wo]),
                    _ => Err(Error::config(format!("pool window {size} leaves no output for {h}x{w} input"))),
                }
            }
            LayerSpec::Relu => Ok(shape.to_vec()),
            LayerSpec::Flatten => Ok(vec![shape.iter().product()]),
            LayerSpec::Dense { inputs, outputs } => {
                let n: usize = shape.iter().product();
                if inputs == 0 || outputs == 0 || n != inputs {
                    return Err(Error::config(format!(
                        "dense layer {inputs}->{outputs} cannot take input of shape {shape:?}"
                    )));
                }
                Ok(vec![outputs])
            }
        }
    }

    /// Shapes of the trainable arrays of this layer, in storage order.
    pub fn param_shapes(&self) -> Vec<Vec<usize>> {
        match *self {
            LayerSpec::Conv {
                in_channels,
                out_channels,
                kernel,
                ..
            } => vec![vec![out_channels, in_channels, kernel, kernel], vec![out_channels]],
            LayerSpec::Dense { inputs, outputs } => vec![vec![outputs, inputs], vec![outputs]],
            _ => Vec::new(),
        }
    }

    fn fan_in(&self) -> usize {
        match *self {
            LayerSpec::Conv {
                in_channels, kernel, ..
            } => in_channels * kernel * kernel,
            LayerSpec::Dense { inputs, .. } => inputs,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Layer<F> {
    pub spec: LayerSpec,
    /// Kernels/weights then bias; empty for parameter-free layers.
    pub params: Vec<Tensor<F>>,
}

/// Sequential network over `[C, H, W]` inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct Network<F> {
    input_shape: Vec<usize>,
    layers: Vec<Layer<F>>,
}

/// Everything the backward pass needs from a forward pass.
pub struct Trace<F> {
    /// `inputs[i]` is the input of layer `i`; the last entry is the network output.
    pub inputs: Vec<Tensor<F>>,
    argmax: Vec<Option<Vec<usize>>>,
}

impl<F> Trace<F> {
    pub fn output(&self) -> &Tensor<F> {
        self.inputs.last().expect("trace holds at least the input")
    }
}

/// Gradients aligned with [`Network::params`].
pub type Gradients<F> = Vec<Tensor<F>>;

/// Checks that `specs` chain from `input_shape` and returns the output shape.
pub fn infer_output_shape(input_shape: &[usize], specs: &[LayerSpec]) -> Result<Vec<usize>> {
    specs
        .iter()
        .try_fold(input_shape.to_vec(), |shape, spec| spec.output_shape(&shape))
}

impl<F: Scalar> Network<F> {
    /// Builds a network with He-uniform weights (bound `sqrt(6 / fan_in)`)
    /// and zero biases drawn from a seeded generator.
    pub fn new(input_shape: &[usize], specs: &[LayerSpec], seed: u64) -> Result<Self> {
        infer_output_shape(input_shape, specs)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layers = specs
            .iter()
            .map(|spec| {
                let shapes = spec.param_shapes();
                let params = shapes
                    .iter()
                    .enumerate()
                    .map(|(i, shape)| {
                        if i == 0 {
                            let bound = (6.0 / spec.fan_in() as f64).sqrt();
                            Tensor::from_fn(shape, |_| F::of(rng.gen_range(-bound..bound)))
                        } else {
                            Tensor::zeros(shape)
                        }
                    })
                    .collect();
                Layer { spec: *spec, params }
            })
            .collect();
        Ok(Self {
            input_shape: input_shape.to_vec(),
            layers,
        })
    }

    /// Reassembles a network from stored parameter arrays.
    pub fn from_params(input_shape: &[usize], specs: &[LayerSpec], params: Vec<Tensor<F>>) -> Result<Self> {
        infer_output_shape(input_shape, specs)?;
        let mut params = params.into_iter();
        let mut layers = Vec::with_capacity(specs.len());
        for spec in specs {
            let mut ps = Vec::new();
            for shape in spec.param_shapes() {
                let p = params
                    .next()
                    .ok_or_else(|| Error::config("too few parameter arrays for layer schedule"))?;
                if p.shape() != shape.as_slice() {
                    return Err(Error::config(format!(
                        "parameter shape {:?} does not match layer {spec:?}",
                        p.shape()
                    )));
                }
                ps.push(p);
            }
            layers.push(Layer { spec: *spec, params: ps });
        }
        if params.next().is_some() {
            return Err(Error::config("more parameter arrays than the layer schedule uses"));
        }
        Ok(Self {
            input_shape: input_shape.to_vec(),
            layers,
        })
    }

    pub fn input_shape(&self) -> &[usize] {
        &self.input_shape
    }

    pub fn layers(&self) -> &[Layer<F>] {
        &self.layers
    }

    pub fn specs(&self) -> Vec<LayerSpec> {
        self.layers.iter().map(|l| l.spec).collect()
    }

    pub fn output_shape(&self) -> Vec<usize> {
        infer_output_shape(&self.input_shape, &self.specs()).expect("validated at construction")
    }

    pub fn params(&self) -> impl Iterator<Item = &Tensor<F>> {
        self.layers.iter().flat_map(|l| l.params.iter())
    }

    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut Tensor<F>> {
        self.layers.iter_mut().flat_map(|l| l.params.iter_mut())
    }

    pub fn param_count(&self) -> usize {
        self.params().map(Tensor::len).sum()
    }

    fn check_input(&self, input: &Tensor<F>) -> Result<()> {
        if input.shape() != self.input_shape.as_slice() {
            return Err(Error::dim(format!(
                "network expects input {:?}, got {:?}",
                self.input_shape,
                input.shape()
            )));
        }
        Ok(())
    }

    fn apply(layer: &Layer<F>, x: &Tensor<F>) -> Result<(Tensor<F>, Option<Vec<usize>>)> {
        Ok(match layer.spec {
            LayerSpec::Conv { stride, padding, .. } => (
                ops::conv2d(x, &layer.params[0], layer.params[1].data(), stride, padding)?,
                None,
            ),
            LayerSpec::MaxPool { size, stride } => {
                let (y, arg) = ops::maxpool2d(x, size, stride)?;
                (y, Some(arg))
            }
            LayerSpec::Relu => (ops::relu(x), None),
            LayerSpec::Flatten => (x.clone().reshape(&[x.len()])?, None),
            LayerSpec::Dense { .. } => (ops::dense(x.data(), &layer.params[0], layer.params[1].data())?, None),
        })
    }

    pub fn forward(&self, input: &Tensor<F>) -> Result<Tensor<F>> {
        self.check_input(input)?;
        let mut x = input.clone();
        for layer in &self.layers {
            x = Self::apply(layer, &x)?.0;
        }
        Ok(x)
    }

    pub fn forward_trace(&self, input: &Tensor<F>) -> Result<Trace<F>> {
        self.check_input(input)?;
        let mut inputs = Vec::with_capacity(self.layers.len() + 1);
        let mut argmax = Vec::with_capacity(self.layers.len());
        inputs.push(input.clone());
        for layer in &self.layers {
            let (y, arg) = Self::apply(layer, inputs.last().expect("non-empty"))?;
            inputs.push(y);
            argmax.push(arg);
        }
        Ok(Trace { inputs, argmax })
    }

    /// Reverse-mode pass: propagates `grad_output` (dLoss/dOutput) back
    /// through the recorded trace.
    pub fn backward_from(&self, trace: &Trace<F>, grad_output: Tensor<F>) -> Result<Gradients<F>> {
        if grad_output.shape() != trace.output().shape() {
            return Err(Error::dim("output gradient shape differs from network output"));
        }
        let mut per_layer: Vec<Vec<Tensor<F>>> = vec![Vec::new(); self.layers.len()];
        let mut g = grad_output;
        for (i, layer) in self.layers.iter().enumerate().rev() {
            let x = &trace.inputs[i];
            let need_input = i > 0;
            g = match layer.spec {
                LayerSpec::Conv { stride, padding, .. } => {
                    let grads = ops::conv2d_backward(x, &layer.params[0], stride, padding, &g, need_input)?;
                    per_layer[i] = vec![grads.kernels, grads.bias];
                    match grads.input {
                        Some(gx) => gx,
                        None => break,
                    }
                }
                LayerSpec::MaxPool { .. } => {
                    let arg = trace.argmax[i].as_ref().expect("pooling records argmax");
                    ops::maxpool2d_backward(x.shape(), arg, &g)
                }
                LayerSpec::Relu => ops::relu_backward(x, &g),
                LayerSpec::Flatten => g.reshape(x.shape())?,
                LayerSpec::Dense { .. } => {
                    let grads = ops::dense_backward(x.data(), &layer.params[0], g.data());
                    per_layer[i] = vec![grads.weights, grads.bias];
                    grads.input.reshape(x.shape())?
                }
            };
        }
        Ok(per_layer.into_iter().flatten().collect())
    }

    /// MAE loss of the network output against `target` and its gradient with
    /// respect to every parameter.
    pub fn loss_and_gradients(&self, input: &Tensor<F>, target: &[F]) -> Result<(F, Gradients<F>)> {
        let trace = self.forward_trace(input)?;
        let out = trace.output();
        let loss = ops::mae_loss(out.data(), target)?;
        let g = Tensor::new(out.shape().to_vec(), ops::mae_grad(out.data(), target)?)?;
        Ok((loss, self.backward_from(&trace, g)?))
    }

    pub fn loss(&self, input: &Tensor<F>, target: &[F]) -> Result<F> {
        ops::mae_loss(self.forward(input)?.data(), target)
    }

    /// Signature of every piecewise-linear branch taken during a forward pass:
    /// relu on/off states, pooling winners and the sign of each residual. Two
    /// parameter settings with equal signatures lie on the same smooth piece
    /// of the loss surface.
    pub fn activation_pattern(&self, input: &Tensor<F>, target: &[F]) -> Result<Vec<i64>> {
        let trace = self.forward_trace(input)?;
        let mut sig = Vec::new();
        for (i, layer) in self.layers.iter().enumerate() {
            match layer.spec {
                LayerSpec::Relu => sig.extend(trace.inputs[i].data().iter().map(|&v| (v > F::zero()) as i64)),
                LayerSpec::MaxPool { .. } => {
                    sig.extend(trace.argmax[i].as_ref().expect("argmax").iter().map(|&a| a as i64))
                }
                _ => {}
            }
        }
        sig.extend(trace.output().data().iter().zip(target).map(|(&p, &t)| {
            if p > t {
                1
            } else if p < t {
                -1
            } else {
                0
            }
        }));
        Ok(sig)
    }
}

/// Gradient of the MAE loss of `network(input)` against `target` for every
/// parameter, by reverse-mode differentiation.
pub fn backward<F: Scalar>(network: &Network<F>, input: &Tensor<F>, target: &[F]) -> Result<Gradients<F>> {
    network.loss_and_gradients(input, target).map(|(_, g)| g)
}
