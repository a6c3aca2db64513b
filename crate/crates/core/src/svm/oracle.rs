//! Exhaustive grid search over the binary dual, for checking the solver on
//! tiny problems.

use super::kernel::{gram_matrix, Kernel};
use super::smo::dual_objective;
use crate::error::{Error, Result};

pub const MAX_ORACLE_SAMPLES: usize = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct DualSolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub objective: f64,
    /// Grid spacing used for the free coordinates.
    pub step: f64,
}

impl DualSolution {
    /// Decision value at `x` given the training rows the solution belongs to.
    pub fn decision(&self, rows: &[Vec<f64>], labels: &[f64], kernel: &Kernel, x: &[f64]) -> f64 {
        rows.iter()
            .zip(labels)
            .zip(&self.alpha)
            .map(|((r, y), a)| a * y * super::kernel::kernel_eval(r, x, kernel))
            .sum::<f64>()
            + self.bias
    }
}

/// Walks every grid point of `alpha_1..alpha_{n-1}` in `[0, C]` with
/// `steps` intervals per axis, fixes `alpha_n` from the equality constraint
/// and keeps the feasible point with the largest dual objective.
pub fn brute_force_dual(rows: &[Vec<f64>], labels: &[f64], kernel: &Kernel, c: f64, steps: usize) -> Result<DualSolution> {
    let n = rows.len();
    if !(2..=MAX_ORACLE_SAMPLES).contains(&n) {
        return Err(Error::param(format!("oracle takes 2..={MAX_ORACLE_SAMPLES} samples, got {n}")));
    }
    if labels.len() != n {
        return Err(Error::dim(format!("{} labels for {n} samples", labels.len())));
    }
    if labels.iter().any(|&y| y != 1.0 && y != -1.0) {
        return Err(Error::param("labels must be +1 or -1"));
    }
    if !(c > 0.0) || steps == 0 {
        return Err(Error::param("C and steps must be positive"));
    }
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    let gram = gram_matrix(&refs, kernel);
    let h = c / steps as f64;
    let slack = 1e-12 * c.max(1.0);
    let mut idx = vec![0usize; n - 1];
    let mut alpha = vec![0.0; n];
    let mut best: Option<(f64, Vec<f64>)> = None;
    loop {
        let mut s = 0.0;
        for k in 0..n - 1 {
            alpha[k] = idx[k] as f64 * h;
            s += alpha[k] * labels[k];
        }
        let last = -s * labels[n - 1];
        if last >= -slack && last <= c + slack {
            alpha[n - 1] = last.clamp(0.0, c);
            let obj = dual_objective(&alpha, &gram, labels);
            if best.as_ref().is_none_or(|(b, _)| obj > *b) {
                best = Some((obj, alpha.clone()));
            }
        }
        // odometer increment
        let mut k = 0;
        while k < n - 1 {
            idx[k] += 1;
            if idx[k] <= steps {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n - 1 {
            break;
        }
    }
    let (objective, alpha) = best.expect("alpha = 0 is always feasible");
    let bias = oracle_bias(&alpha, &gram, labels, c, h / 2.0);
    Ok(DualSolution { alpha, bias, objective, step: h })
}

fn oracle_bias(alpha: &[f64], gram: &[f64], y: &[f64], c: f64, margin: f64) -> f64 {
    let n = alpha.len();
    let f = |t: usize| (0..n).map(|j| alpha[j] * y[j] * gram[t * n + j]).sum::<f64>();
    let free: Vec<f64> = (0..n)
        .filter(|&t| alpha[t] > margin && alpha[t] < c - margin)
        .map(|t| y[t] - f(t))
        .collect();
    if !free.is_empty() {
        return free.iter().sum::<f64>() / free.len() as f64;
    }
    // bounded: b must satisfy y_t (f_t + b) >= 1 at zero alpha and <= 1 at C
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for t in 0..n {
        let r = y[t] - f(t);
        let at_zero = alpha[t] <= margin;
        if at_zero == (y[t] > 0.0) {
            lo = lo.max(r);
        } else {
            hi = hi.min(r);
        }
    }
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo + hi) / 2.0,
        (true, false) => lo,
        (false, true) => hi,
        _ => 0.0,
    }
}
