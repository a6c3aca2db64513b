use super::network::{Gradients, Network};
use super::tensor::{Scalar, Tensor};
use crate::error::{Error, Result};

/// Central difference `(f(x + eps) - f(x - eps)) / (2 eps)`.
pub fn central_difference<F: Scalar>(x: F, eps: F, mut f: impl FnMut(F) -> F) -> F {
    (f(x + eps) - f(x - eps)) / (eps + eps)
}

/// Finite-difference estimate of the MAE gradient for every parameter.
pub fn finite_diff_grad<F: Scalar>(
    network: &Network<F>,
    input: &Tensor<F>,
    target: &[F],
    eps: F,
) -> Result<Gradients<F>> {
    if !(eps > F::zero()) {
        return Err(Error::param("finite difference step must be positive"));
    }
    let mut probe = network.clone();
    let shapes: Vec<Vec<usize>> = network.params().map(|p| p.shape().to_vec()).collect();
    let mut grads = Vec::with_capacity(shapes.len());
    for (pi, shape) in shapes.iter().enumerate() {
        let mut g = Tensor::zeros(shape);
        for j in 0..g.len() {
            let original = param_at(&mut probe, pi, j);
            *param_mut(&mut probe, pi, j) = original + eps;
            let up = probe.loss(input, target)?;
            *param_mut(&mut probe, pi, j) = original - eps;
            let down = probe.loss(input, target)?;
            *param_mut(&mut probe, pi, j) = original;
            g.data_mut()[j] = (up - down) / (eps + eps);
        }
        grads.push(g);
    }
    Ok(grads)
}

fn param_at<F: Scalar>(net: &mut Network<F>, pi: usize, j: usize) -> F {
    *param_mut(net, pi, j)
}

fn param_mut<F: Scalar>(net: &mut Network<F>, pi: usize, j: usize) -> &mut F {
    &mut net.params_mut().nth(pi).expect("parameter index").data_mut()[j]
}
