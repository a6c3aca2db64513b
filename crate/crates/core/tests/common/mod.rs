//! Independent reference implementations used by the integration and
//! acceptance tests. Nothing here calls the library routine it checks.
#![allow(dead_code)]

use dfr::keypoints::{KeypointSet, Point, KEYPOINT_COUNT};
use dfr::nn::{LayerSpec, Network};
use rand::Rng;

/// Zero-padded cross-correlation, one output cell at a time.
pub fn conv2d_ref(
    x: &[f64],
    (c, h, w): (usize, usize, usize),
    k: &[f64],
    (co, kk): (usize, usize),
    bias: &[f64],
    stride: usize,
    pad: usize,
) -> (Vec<f64>, usize, usize) {
    let ho = (h + 2 * pad - kk) / stride + 1;
    let wo = (w + 2 * pad - kk) / stride + 1;
    let mut out = vec![0.0; co * ho * wo];
    for o in 0..co {
        for oy in 0..ho {
            for ox in 0..wo {
                let mut acc = bias[o];
                for ci in 0..c {
                    for ky in 0..kk {
                        for kx in 0..kk {
                            let iy = (oy * stride + ky) as isize - pad as isize;
                            let ix = (ox * stride + kx) as isize - pad as isize;
                            if iy < 0 || ix < 0 || iy >= h as isize || ix >= w as isize {
                                continue;
                            }
                            let xv = x[(ci * h + iy as usize) * w + ix as usize];
                            acc += xv * k[((o * c + ci) * kk + ky) * kk + kx];
                        }
                    }
                }
                out[(o * ho + oy) * wo + ox] = acc;
            }
        }
    }
    (out, ho, wo)
}

pub fn maxpool_ref(x: &[f64], (c, h, w): (usize, usize, usize), size: usize, stride: usize) -> Vec<f64> {
    let ho = (h - size) / stride + 1;
    let wo = (w - size) / stride + 1;
    let mut out = Vec::new();
    for ch in 0..c {
        for oy in 0..ho {
            for ox in 0..wo {
                let mut m = f64::NEG_INFINITY;
                for dy in 0..size {
                    for dx in 0..size {
                        m = m.max(x[(ch * h + oy * stride + dy) * w + ox * stride + dx]);
                    }
                }
                out.push(m);
            }
        }
    }
    out
}

pub fn dense_ref(x: &[f64], wts: &[f64], (m, n): (usize, usize), bias: &[f64]) -> Vec<f64> {
    (0..m)
        .map(|r| {
            let mut acc = 0.0;
            for j in 0..n {
                acc += wts[r * n + j] * x[j];
            }
            acc + bias[r]
        })
        .collect()
}

/// Per-keypoint Euclidean error and MAE written out longhand.
pub struct MetricOracle {
    pub per_keypoint: Vec<f64>,
    pub mae: f64,
    pub accuracy: f64,
}

pub fn metric_oracle(preds: &[KeypointSet], gts: &[KeypointSet], tau: f64) -> MetricOracle {
    let n = preds.len() as f64;
    let mut per_keypoint = vec![0.0; KEYPOINT_COUNT];
    let mut abs_sum = 0.0;
    let mut hits = 0.0;
    for s in 0..preds.len() {
        for k in 0..KEYPOINT_COUNT {
            let (px, py) = (preds[s].points[k].x, preds[s].points[k].y);
            let (gx, gy) = (gts[s].points[k].x, gts[s].points[k].y);
            let e = ((px - gx).powi(2) + (py - gy).powi(2)).sqrt();
            per_keypoint[k] += e / n;
            abs_sum += (px - gx).abs() + (py - gy).abs();
            if e <= tau {
                hits += 1.0;
            }
        }
    }
    let total = n * KEYPOINT_COUNT as f64;
    MetricOracle {
        per_keypoint,
        mae: abs_sum / (2.0 * total),
        accuracy: hits / total,
    }
}

/// The slope-based intersection angle `|atan((m1 - m2) / (1 + m1 m2))|` in
/// degrees, for lines where both slopes exist and the denominator is nonzero.
pub fn slope_formula_angle(a: (Point, Point), b: (Point, Point)) -> Option<f64> {
    let dxa = a.1.x - a.0.x;
    let dxb = b.1.x - b.0.x;
    if dxa == 0.0 || dxb == 0.0 {
        return None;
    }
    let m1 = (a.1.y - a.0.y) / dxa;
    let m2 = (b.1.y - b.0.y) / dxb;
    let den = 1.0 + m1 * m2;
    if den.abs() < 1e-6 {
        return None;
    }
    Some(((m1 - m2) / den).atan().abs().to_degrees())
}

pub fn random_point(rng: &mut impl Rng, r: f64) -> Point {
    Point::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

/// Similarity transform: scale, rotate by `theta` radians, then translate.
pub fn similarity(p: Point, scale: f64, theta: f64, t: (f64, f64)) -> Point {
    let (s, c) = theta.sin_cos();
    Point::new(scale * (c * p.x - s * p.y) + t.0, scale * (s * p.x + c * p.y) + t.1)
}

/// Small network of the desk shape: three convolutions on a 32x32 input.
pub fn gradcheck_network(seed: u64) -> Network<f64> {
    let specs = [
        LayerSpec::conv(1, 4, 3, 1, 1),
        LayerSpec::Relu,
        LayerSpec::MaxPool { size: 2, stride: 2 },
        LayerSpec::conv(4, 6, 3, 1, 1),
        LayerSpec::Relu,
        LayerSpec::MaxPool { size: 2, stride: 2 },
        LayerSpec::conv(6, 8, 3, 1, 1),
        LayerSpec::Relu,
        LayerSpec::MaxPool { size: 2, stride: 2 },
        LayerSpec::Flatten,
        LayerSpec::dense(8 * 4 * 4, 16),
        LayerSpec::Relu,
        LayerSpec::dense(16, 40),
    ];
    Network::new(&[1, 32, 32], &specs, seed).expect("valid schedule")
}

/// Committed tiny binary SVM problems: `(name, rows, labels, kernel, C)`.
pub fn svm_instances() -> Vec<(&'static str, Vec<Vec<f64>>, Vec<f64>, dfr::svm::Kernel, f64)> {
    use dfr::svm::Kernel;
    vec![
        (
            "two points",
            vec![vec![-1.0], vec![1.0]],
            vec![1.0, -1.0],
            Kernel::Linear,
            1.0,
        ),
        (
            "line of four",
            vec![vec![-2.0], vec![-1.0], vec![1.0], vec![2.0]],
            vec![1.0, 1.0, -1.0, -1.0],
            Kernel::Linear,
            1.0,
        ),
        (
            "xor corners",
            vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]],
            vec![1.0, 1.0, -1.0, -1.0],
            Kernel::Rbf { gamma: 1.0 },
            1.0,
        ),
        (
            "contradictory duplicate",
            vec![vec![0.0], vec![0.0], vec![2.0], vec![-2.0]],
            vec![1.0, -1.0, 1.0, -1.0],
            Kernel::Linear,
            0.1,
        ),
        (
            "planar five",
            vec![vec![0.0, 0.0], vec![1.0, 0.5], vec![0.5, 1.5], vec![3.0, 3.0], vec![3.5, 2.0]],
            vec![1.0, 1.0, 1.0, -1.0, -1.0],
            Kernel::Linear,
            1.0,
        ),
        (
            "rbf five",
            vec![vec![0.0, 0.0], vec![0.2, 1.0], vec![2.0, 0.0], vec![2.2, 1.1], vec![1.0, 3.0]],
            vec![1.0, 1.0, -1.0, -1.0, 1.0],
            Kernel::Rbf { gamma: 0.5 },
            2.0,
        ),
    ]
}

/// Grid resolution for the dual oracle: as fine as 200 steps, capped at about
/// 2e7 grid points.
#[allow(dead_code)]
pub fn oracle_steps(n: usize) -> usize {
    (2e7f64.powf(1.0 / (n - 1) as f64) as usize).min(200)
}

/// Allowed SMO-versus-grid objective gap: a grid point lies within n * step
/// of the optimum in L1, and the dual objective is L-Lipschitz there.
#[allow(dead_code)]
pub fn oracle_tolerance(n: usize, c: f64, gram: &[f64], step: f64) -> f64 {
    let kmax = gram.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    (1.0 + n as f64 * c * kmax) * n as f64 * step
}
