//! Layer primitives and their hand-written backward passes.
//!
//! Images and activations are `[C, H, W]` tensors. Convolution is
//! cross-correlation, as in every mainstream deep learning framework.

use super::tensor::{Scalar, Tensor};
use crate::error::{Error, Result};

/// Output length of a sliding window over `input` cells, or `None` when the
/// window does not fit.
pub fn window_output_dim(input: usize, kernel: usize, stride: usize, padding: usize) -> Option<usize> {
    if kernel == 0 || stride == 0 || input + 2 * padding < kernel {
        return None;
    }
    Some((input + 2 * padding - kernel) / stride + 1)
}

/// Range of output positions `o` for which `o * stride + k - padding` lands
/// inside `[0, n_in)`.
fn valid_range(k: usize, n_in: usize, stride: usize, padding: usize, n_out: usize) -> (usize, usize) {
    let lo = if k >= padding {
        0
    } else {
        (padding - k).div_ceil(stride)
    };
    if n_in + padding < k + 1 {
        return (0, 0);
    }
    let hi = ((n_in - 1 + padding - k) / stride + 1).min(n_out);
    (lo.min(hi), hi)
}

fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    let mut acc = [F::zero(); 8];
    let chunks = a.len() / 8;
    for c in 0..chunks {
        let (x, y) = (&a[c * 8..c * 8 + 8], &b[c * 8..c * 8 + 8]);
        for l in 0..8 {
            acc[l] = acc[l] + x[l] * y[l];
        }
    }
    let mut tail = F::zero();
    for i in chunks * 8..a.len() {
        tail = tail + a[i] * b[i];
    }
    acc.iter().fold(F::zero(), |s, &v| s + v) + tail
}

fn check_conv(input: &Tensor<impl Scalar>, kernels: &Tensor<impl Scalar>, bias_len: usize) -> Result<[usize; 6]> {
    let (c, h, w) = input.chw()?;
    let [co, ci, kh, kw] = kernels.shape()[..] else {
        return Err(Error::dim(format!(
            "kernels must be [C_out, C_in, k, k], got {:?}",
            kernels.shape()
        )));
    };
    if ci != c {
        return Err(Error::dim(format!(
            "input has {c} channels but kernels expect {ci}"
        )));
    }
    if kh != kw {
        return Err(Error::dim(format!("kernels must be square, got {kh}x{kw}")));
    }
    if bias_len != co {
        return Err(Error::dim(format!(
            "bias has {bias_len} entries for {co} output channels"
        )));
    }
    Ok([c, h, w, co, kh, 0])
}

/// 2-D cross-correlation of a `[C_in, H, W]` input with `[C_out, C_in, k, k]`
/// kernels.
pub fn conv2d<F: Scalar>(
    input: &Tensor<F>,
    kernels: &Tensor<F>,
    bias: &[F],
    stride: usize,
    padding: usize,
) -> Result<Tensor<F>> {
    let [ci, h, w, co, k, _] = check_conv(input, kernels, bias.len())?;
    if stride == 0 {
        return Err(Error::param("stride must be at least 1"));
    }
    let (Some(ho), Some(wo)) = (
        window_output_dim(h, k, stride, padding),
        window_output_dim(w, k, stride, padding),
    ) else {
        return Err(Error::dim(format!(
            "kernel {k} with padding {padding} does not fit a {h}x{w} input"
        )));
    };
    let x = input.data();
    let kd = kernels.data();
    let mut out = vec![F::zero(); co * ho * wo];
    for oc in 0..co {
        let out_c = &mut out[oc * ho * wo..(oc + 1) * ho * wo];
        out_c.iter_mut().for_each(|v| *v = bias[oc]);
        for ic in 0..ci {
            let x_c = &x[ic * h * w..(ic + 1) * h * w];
            for ky in 0..k {
                let (oy0, oy1) = valid_range(ky, h, stride, padding, ho);
                for kx in 0..k {
                    let wt = kd[((oc * ci + ic) * k + ky) * k + kx];
                    let (ox0, ox1) = valid_range(kx, w, stride, padding, wo);
                    if ox0 >= ox1 {
                        continue;
                    }
                    for oy in oy0..oy1 {
                        let iy = oy * stride + ky - padding;
                        let in_row = &x_c[iy * w..(iy + 1) * w];
                        let out_row = &mut out_c[oy * wo..(oy + 1) * wo];
                        if stride == 1 {
                            let off = ox0 + kx - padding;
                            for (o, &i) in out_row[ox0..ox1].iter_mut().zip(&in_row[off..]) {
                                *o = *o + wt * i;
                            }
                        } else {
                            for ox in ox0..ox1 {
                                out_row[ox] = out_row[ox] + wt * in_row[ox * stride + kx - padding];
                            }
                        }
                    }
                }
            }
        }
    }
    Tensor::new(vec![co, ho, wo], out)
}

/// Gradients of a convolution with respect to its input, kernels and bias.
pub struct ConvGrads<F> {
    /// `None` when the caller did not ask for it.
    pub input: Option<Tensor<F>>,
    pub kernels: Tensor<F>,
    pub bias: Tensor<F>,
}

pub fn conv2d_backward<F: Scalar>(
    input: &Tensor<F>,
    kernels: &Tensor<F>,
    stride: usize,
    padding: usize,
    grad_out: &Tensor<F>,
    need_input_grad: bool,
) -> Result<ConvGrads<F>> {
    let co = kernels.shape()[0];
    let [ci, h, w, co2, k, _] = check_conv(input, kernels, co)?;
    debug_assert_eq!(co, co2);
    let (gc, ho, wo) = grad_out.chw()?;
    if gc != co {
        return Err(Error::dim("output gradient channel count mismatch"));
    }
    let x = input.data();
    let kd = kernels.data();
    let g = grad_out.data();
    let mut gk = vec![F::zero(); kd.len()];
    let mut gx = if need_input_grad {
        vec![F::zero(); x.len()]
    } else {
        Vec::new()
    };
    let mut gb = vec![F::zero(); co];
    for oc in 0..co {
        let g_c = &g[oc * ho * wo..(oc + 1) * ho * wo];
        gb[oc] = g_c.iter().copied().sum();
        for ic in 0..ci {
            let x_c = &x[ic * h * w..(ic + 1) * h * w];
            for ky in 0..k {
                let (oy0, oy1) = valid_range(ky, h, stride, padding, ho);
                for kx in 0..k {
                    let widx = ((oc * ci + ic) * k + ky) * k + kx;
                    let wt = kd[widx];
                    let (ox0, ox1) = valid_range(kx, w, stride, padding, wo);
                    if ox0 >= ox1 {
                        continue;
                    }
                    let mut acc = F::zero();
                    for oy in oy0..oy1 {
                        let iy = oy * stride + ky - padding;
                        let g_row = &g_c[oy * wo + ox0..oy * wo + ox1];
                        if stride == 1 {
                            let off = iy * w + ox0 + kx - padding;
                            acc = acc + dot(g_row, &x_c[off..off + g_row.len()]);
                            if need_input_grad {
                                let gx_row = &mut gx[ic * h * w + off..ic * h * w + off + g_row.len()];
                                for (d, &gv) in gx_row.iter_mut().zip(g_row) {
                                    *d = *d + wt * gv;
                                }
                            }
                        } else {
                            for (j, &gv) in g_row.iter().enumerate() {
                                let ix = (ox0 + j) * stride + kx - padding;
                                acc = acc + gv * x_c[iy * w + ix];
                                if need_input_grad {
                                    let d = &mut gx[ic * h * w + iy * w + ix];
                                    *d = *d + wt * gv;
                                }
                            }
                        }
                    }
                    gk[widx] = acc;
                }
            }
        }
    }
    Ok(ConvGrads {
        input: if need_input_grad {
            Some(Tensor::new(input.shape().to_vec(), gx)?)
        } else {
            None
        },
        kernels: Tensor::new(kernels.shape().to_vec(), gk)?,
        bias: Tensor::new(vec![co], gb)?,
    })
}

/// Max pooling over `size x size` windows. Also returns, for each output
/// cell, the flat input index that won, which routes the gradient backward.
pub fn maxpool2d<F: Scalar>(input: &Tensor<F>, size: usize, stride: usize) -> Result<(Tensor<F>, Vec<usize>)> {
    if size == 0 || stride == 0 {
        return Err(Error::param(format!(
            "pool size and stride must be at least 1 (got {size}, {stride})"
        )));
    }
    let (c, h, w) = input.chw()?;
    let (Some(ho), Some(wo)) = (
        window_output_dim(h, size, stride, 0),
        window_output_dim(w, size, stride, 0),
    ) else {
        return Err(Error::dim(format!("pool window {size} larger than {h}x{w} input")));
    };
    let x = input.data();
    let mut out = Vec::with_capacity(c * ho * wo);
    let mut arg = Vec::with_capacity(c * ho * wo);
    for ch in 0..c {
        for oy in 0..ho {
            for ox in 0..wo {
                let mut best = ch * h * w + oy * stride * w + ox * stride;
                for dy in 0..size {
                    let row = ch * h * w + (oy * stride + dy) * w + ox * stride;
                    for i in row..row + size {
                        if x[i] > x[best] {
                            best = i;
                        }
                    }
                }
                out.push(x[best]);
                arg.push(best);
            }
        }
    }
    Ok((Tensor::new(vec![c, ho, wo], out)?, arg))
}

pub fn maxpool2d_backward<F: Scalar>(input_shape: &[usize], argmax: &[usize], grad_out: &Tensor<F>) -> Tensor<F> {
    let mut gx = Tensor::zeros(input_shape);
    let d = gx.data_mut();
    for (&i, &g) in argmax.iter().zip(grad_out.data()) {
        d[i] = d[i] + g;
    }
    gx
}

pub fn relu<F: Scalar>(input: &Tensor<F>) -> Tensor<F> {
    input.map(|v| if v > F::zero() { v } else { F::zero() })
}

pub fn relu_backward<F: Scalar>(input: &Tensor<F>, grad_out: &Tensor<F>) -> Tensor<F> {
    let data = input
        .data()
        .iter()
        .zip(grad_out.data())
        .map(|(&x, &g)| if x > F::zero() { g } else { F::zero() })
        .collect();
    Tensor::new(input.shape().to_vec(), data).expect("shape preserved")
}

/// `weights . input + bias` with `weights` shaped `[m, n]`.
pub fn dense<F: Scalar>(input: &[F], weights: &Tensor<F>, bias: &[F]) -> Result<Tensor<F>> {
    let [m, n] = weights.shape()[..] else {
        return Err(Error::dim(format!(
            "dense weights must be a matrix, got shape {:?}",
            weights.shape()
        )));
    };
    if input.len() != n || bias.len() != m {
        return Err(Error::dim(format!(
            "dense layer {m}x{n} given input of {} and bias of {}",
            input.len(),
            bias.len()
        )));
    }
    let wd = weights.data();
    let out = (0..m).map(|r| dot(&wd[r * n..(r + 1) * n], input) + bias[r]).collect();
    Tensor::new(vec![m], out)
}

pub struct DenseGrads<F> {
    pub input: Tensor<F>,
    pub weights: Tensor<F>,
    pub bias: Tensor<F>,
}

pub fn dense_backward<F: Scalar>(input: &[F], weights: &Tensor<F>, grad_out: &[F]) -> DenseGrads<F> {
    let (m, n) = (weights.shape()[0], weights.shape()[1]);
    let wd = weights.data();
    let mut gw = vec![F::zero(); m * n];
    let mut gx = vec![F::zero(); n];
    for r in 0..m {
        let g = grad_out[r];
        if g == F::zero() {
            continue;
        }
        let row = &wd[r * n..(r + 1) * n];
        for ((gwv, gxv), (&xv, &wv)) in gw[r * n..(r + 1) * n]
            .iter_mut()
            .zip(gx.iter_mut())
            .zip(input.iter().zip(row))
        {
            *gwv = g * xv;
            *gxv = *gxv + g * wv;
        }
    }
    DenseGrads {
        input: Tensor::new(vec![n], gx).expect("n > 0"),
        weights: Tensor::new(vec![m, n], gw).expect("m, n > 0"),
        bias: Tensor::new(vec![m], grad_out.to_vec()).expect("m > 0"),
    }
}

fn check_pair<F: Scalar>(pred: &[F], target: &[F]) -> Result<()> {
    if pred.is_empty() || target.is_empty() {
        return Err(Error::param("mean absolute error of an empty vector"));
    }
    if pred.len() != target.len() {
        return Err(Error::dim(format!(
            "prediction has {} values, target has {}",
            pred.len(),
            target.len()
        )));
    }
    Ok(())
}

/// Mean absolute error, `(1/n) * sum |pred_i - target_i|`, with `n` the number
/// of compared coordinates.
pub fn mae_loss<F: Scalar>(pred: &[F], target: &[F]) -> Result<F> {
    check_pair(pred, target)?;
    let n = F::of(pred.len() as f64);
    Ok(pred.iter().zip(target).map(|(&p, &t)| (p - t).abs()).sum::<F>() / n)
}

/// Subgradient of [`mae_loss`] with respect to `pred`; zero where the two
/// agree exactly.
pub fn mae_grad<F: Scalar>(pred: &[F], target: &[F]) -> Result<Vec<F>> {
    check_pair(pred, target)?;
    let n = F::of(pred.len() as f64);
    Ok(pred
        .iter()
        .zip(target)
        .map(|(&p, &t)| {
            if p > t {
                F::one() / n
            } else if p < t {
                -F::one() / n
            } else {
                F::zero()
            }
        })
        .collect())
}
