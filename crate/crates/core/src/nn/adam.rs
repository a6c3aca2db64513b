use super::network::{Gradients, Network};
use super::tensor::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Moment estimates for one parameter array.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState<F> {
    pub m: Vec<F>,
    pub v: Vec<F>,
    /// Number of updates applied so far.
    pub t: u64,
    pub config: AdamConfig,
}

impl<F: Scalar> AdamState<F> {
    pub fn new(len: usize, config: AdamConfig) -> Self {
        Self {
            m: vec![F::zero(); len],
            v: vec![F::zero(); len],
            t: 0,
            config,
        }
    }
}

/// One bias-corrected Adam update of `params` in place.
pub fn adam_step<F: Scalar>(params: &mut [F], grads: &[F], state: &mut AdamState<F>) -> Result<()> {
    if params.len() != grads.len() || params.len() != state.m.len() {
        return Err(Error::dim(format!(
            "adam step over {} parameters with {} gradients and {} moments",
            params.len(),
            grads.len(),
            state.m.len()
        )));
    }
    state.t += 1;
    let c = state.config;
    let (b1, b2) = (F::of(c.beta1), F::of(c.beta2));
    let one = F::one();
    let bc1 = F::of(1.0 - c.beta1.powi(state.t as i32));
    let bc2 = F::of(1.0 - c.beta2.powi(state.t as i32));
    let (lr, eps) = (F::of(c.lr), F::of(c.epsilon));
    for ((p, &g), (m, v)) in params
        .iter_mut()
        .zip(grads)
        .zip(state.m.iter_mut().zip(state.v.iter_mut()))
    {
        *m = b1 * *m + (one - b1) * g;
        *v = b2 * *v + (one - b2) * g * g;
        let m_hat = *m / bc1;
        let v_hat = *v / bc2;
        *p = *p - lr * m_hat / (v_hat.sqrt() + eps);
    }
    Ok(())
}

/// Adam over every parameter array of a network.
#[derive(Clone, Debug)]
pub struct Adam<F> {
    states: Vec<AdamState<F>>,
}

impl<F: Scalar> Adam<F> {
    pub fn new(network: &Network<F>, config: AdamConfig) -> Self {
        Self {
            states: network.params().map(|p| AdamState::new(p.len(), config)).collect(),
        }
    }

    pub fn step(&mut self, network: &mut Network<F>, grads: &Gradients<F>) -> Result<()> {
        if grads.len() != self.states.len() {
            return Err(Error::dim("gradient list does not match network parameters"));
        }
        for ((p, g), s) in network.params_mut().zip(grads).zip(&mut self.states) {
            adam_step(p.data_mut(), g.data(), s)?;
        }
        Ok(())
    }

    pub fn steps(&self) -> u64 {
        self.states.first().map_or(0, |s| s.t)
    }
}
