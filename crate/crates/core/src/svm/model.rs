use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::kernel::{gram_matrix, kernel_eval, Kernel, KernelKind};
use super::smo::solve_binary;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SvmParams {
    pub kernel: KernelKind,
    pub c: f64,
    /// `None` resolves to `1 / (d * var(X))` over the standardised training
    /// matrix.
    pub gamma: Option<f64>,
    pub tolerance: f64,
    /// Iteration budget per pair, in units of `100 * n` pair updates.
    pub max_passes: usize,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            kernel: KernelKind::Rbf,
            c: 1.0,
            gamma: None,
            tolerance: 1e-3,
            max_passes: 10,
            seed: 0,
        }
    }
}

impl SvmParams {
    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(Error::param(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::param(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if let Some(g) = self.gamma {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::param(format!("gamma must be positive, got {g}")));
            }
        }
        if self.max_passes == 0 {
            return Err(Error::param("max_passes must be at least 1"));
        }
        Ok(())
    }
}

/// Per-dimension affine map `(x - mean) / scale`.
#[derive(Clone, Debug, PartialEq)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    /// Constant columns get scale 1.
    pub fn fit(rows: &[Vec<f64>]) -> Standardizer {
        let d = rows.first().map_or(0, |r| r.len());
        let n = rows.len() as f64;
        let mut mean = vec![0.0; d];
        for r in rows {
            for (m, x) in mean.iter_mut().zip(r) {
                *m += x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut scale = vec![0.0; d];
        for r in rows {
            for ((s, x), m) in scale.iter_mut().zip(r).zip(&mean) {
                *s += (x - m) * (x - m);
            }
        }
        for s in scale.iter_mut() {
            *s = (*s / n).sqrt();
            if !(*s > 1e-12) {
                *s = 1.0;
            }
        }
        Standardizer { mean, scale }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((x, m), s)| (x - m) / s)
            .collect()
    }
}

/// One binary machine of the one-vs-one ensemble. Positive decisions vote
/// for `positive`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairMachine {
    pub positive: u32,
    pub negative: u32,
    pub support_vectors: Vec<Vec<f64>>,
    /// `alpha_i * y_i` per support vector.
    pub coefficients: Vec<f64>,
    pub bias: f64,
}

impl PairMachine {
    pub fn decision(&self, x: &[f64], kernel: &Kernel) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(sv, c)| c * kernel_eval(sv, x, kernel))
            .sum::<f64>()
            + self.bias
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SvmModel {
    pub params: SvmParams,
    pub kernel: Kernel,
    pub standardizer: Standardizer,
    /// Sorted class labels.
    pub classes: Vec<u32>,
    pub machines: Vec<PairMachine>,
    /// Version of the feature schema the model was trained on; 0 if unknown.
    pub schema_version: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub label: u32,
    /// `(class, votes)` in class order.
    pub votes: Vec<(u32, u32)>,
    /// `(class, summed decision value in favour of class)` in class order.
    pub margins: Vec<(u32, f64)>,
}

impl SvmModel {
    pub fn dimension(&self) -> usize {
        self.standardizer.mean.len()
    }

    pub fn support_vector_count(&self) -> usize {
        self.machines.iter().map(|m| m.coefficients.len()).sum()
    }
}

pub fn train_svm(features: &[Vec<f64>], labels: &[u32], params: &SvmParams) -> Result<SvmModel> {
    params.validate()?;
    if features.len() != labels.len() {
        return Err(Error::dim(format!("{} feature rows for {} labels", features.len(), labels.len())));
    }
    let d = features.first().map_or(0, |r| r.len());
    if d == 0 {
        return Err(Error::dim("no feature dimensions"));
    }
    for (i, r) in features.iter().enumerate() {
        if r.len() != d {
            return Err(Error::dim(format!("row {i} has {} features, expected {d}", r.len())));
        }
        if r.iter().any(|v| !v.is_finite()) {
            return Err(Error::param(format!("row {i} has a non-finite feature")));
        }
    }
    let mut classes = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    if classes.len() < 2 {
        return Err(Error::param(format!("need at least two classes, got {}", classes.len())));
    }

    let standardizer = Standardizer::fit(features);
    let rows: Vec<Vec<f64>> = features.iter().map(|r| standardizer.apply(r)).collect();
    let kernel = match params.kernel {
        KernelKind::Linear => Kernel::Linear,
        KernelKind::Rbf => Kernel::Rbf {
            gamma: params.gamma.unwrap_or_else(|| scale_gamma(&rows)),
        },
    };

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut machines = Vec::new();
    for (a, &pos) in classes.iter().enumerate() {
        for &neg in &classes[a + 1..] {
            let mut members: Vec<usize> = (0..rows.len()).filter(|&i| labels[i] == pos || labels[i] == neg).collect();
            members.shuffle(&mut rng);
            let sub: Vec<&[f64]> = members.iter().map(|&i| rows[i].as_slice()).collect();
            let y: Vec<f64> = members.iter().map(|&i| if labels[i] == pos { 1.0 } else { -1.0 }).collect();
            let gram = gram_matrix(&sub, &kernel);
            let budget = params.max_passes * 100 * members.len();
            let sol = solve_binary(&gram, &y, params.c, params.tolerance, budget);
            let mut support_vectors = Vec::new();
            let mut coefficients = Vec::new();
            for (k, &a) in sol.alpha.iter().enumerate() {
                if a > 0.0 {
                    support_vectors.push(sub[k].to_vec());
                    coefficients.push(a * y[k]);
                }
            }
            machines.push(PairMachine {
                positive: pos,
                negative: neg,
                support_vectors,
                coefficients,
                bias: sol.bias,
            });
        }
    }
    // the model records the gamma it actually used
    let mut params = params.clone();
    params.gamma = match kernel {
        Kernel::Rbf { gamma } => Some(gamma),
        Kernel::Linear => None,
    };
    Ok(SvmModel {
        params,
        kernel,
        standardizer,
        classes,
        machines,
        schema_version: 0,
    })
}

fn scale_gamma(rows: &[Vec<f64>]) -> f64 {
    let d = rows[0].len() as f64;
    let count = rows.len() as f64 * d;
    let mean: f64 = rows.iter().flatten().sum::<f64>() / count;
    let var: f64 = rows.iter().flatten().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count;
    if var > 0.0 {
        1.0 / (d * var)
    } else {
        1.0 / d
    }
}

/// Majority vote over all pairs. Ties go to the larger summed margin, then
/// to the smaller label.
pub fn predict(model: &SvmModel, features: &[f64]) -> Result<Prediction> {
    if features.len() != model.dimension() {
        return Err(Error::dim(format!(
            "model expects {} features, got {}",
            model.dimension(),
            features.len()
        )));
    }
    let x = model.standardizer.apply(features);
    let k = model.classes.len();
    let slot = |c: u32| model.classes.binary_search(&c).expect("pair labels are model classes");
    let mut votes = vec![0u32; k];
    let mut margins = vec![0.0; k];
    for m in &model.machines {
        let f = m.decision(&x, &model.kernel);
        let (p, n) = (slot(m.positive), slot(m.negative));
        if f >= 0.0 {
            votes[p] += 1;
        } else {
            votes[n] += 1;
        }
        margins[p] += f;
        margins[n] -= f;
    }
    let mut best = 0;
    for i in 1..k {
        if votes[i] > votes[best] || (votes[i] == votes[best] && margins[i] > margins[best]) {
            best = i;
        }
    }
    Ok(Prediction {
        label: model.classes[best],
        votes: model.classes.iter().copied().zip(votes).collect(),
        margins: model.classes.iter().copied().zip(margins).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn blobs(centres: &[(f64, f64)], per: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<u32>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (c, &(cx, cy)) in centres.iter().enumerate() {
            for _ in 0..per {
                x.push(vec![cx + rng.gen_range(-0.5..0.5), cy + rng.gen_range(-0.5..0.5)]);
                y.push(c as u32 + 1);
            }
        }
        (x, y)
    }

    #[test]
    fn separable_blobs_are_learned_by_both_kernels() {
        let (x, y) = blobs(&[(0.0, 0.0), (5.0, 0.0), (0.0, 5.0)], 10, 3);
        for kernel in [KernelKind::Linear, KernelKind::Rbf] {
            let m = train_svm(&x, &y, &SvmParams { kernel, ..Default::default() }).unwrap();
            assert_eq!(m.machines.len(), 3);
            for (r, &l) in x.iter().zip(&y) {
                let p = predict(&m, r).unwrap();
                assert_eq!(p.label, l);
                assert_eq!(p.votes.iter().map(|v| v.1).sum::<u32>(), 3);
            }
        }
    }

    fn cyclic(biases: [f64; 3]) -> SvmModel {
        let pairs = [(1, 2), (1, 3), (2, 3)];
        SvmModel {
            params: SvmParams::default(),
            kernel: Kernel::Linear,
            standardizer: Standardizer { mean: vec![0.0], scale: vec![1.0] },
            classes: vec![1, 2, 3],
            machines: pairs
                .iter()
                .zip(biases)
                .map(|(&(positive, negative), bias)| PairMachine {
                    positive,
                    negative,
                    support_vectors: vec![],
                    coefficients: vec![],
                    bias,
                })
                .collect(),
            schema_version: 0,
        }
    }

    #[test]
    fn vote_ties_use_margins_then_label_order() {
        // 1 beats 2, 3 beats 1, 2 beats 3: one vote each
        let p = predict(&cyclic([1.0, -2.0, 1.0]), &[0.0]).unwrap();
        assert_eq!(p.votes, vec![(1, 1), (2, 1), (3, 1)]);
        assert_eq!(p.label, 3);
        let p = predict(&cyclic([1.0, -1.0, 1.0]), &[0.0]).unwrap();
        assert_eq!(p.label, 1);
    }

    #[test]
    fn rejects_bad_input() {
        let x = vec![vec![0.0], vec![1.0]];
        assert!(matches!(train_svm(&x, &[1, 1], &SvmParams::default()), Err(Error::Parameter(_))));
        assert!(matches!(train_svm(&x, &[1], &SvmParams::default()), Err(Error::Dimension(_))));
        let bad = SvmParams { c: 0.0, ..Default::default() };
        assert!(train_svm(&x, &[1, 2], &bad).is_err());
        let m = train_svm(&x, &[1, 2], &SvmParams::default()).unwrap();
        assert!(matches!(predict(&m, &[0.0, 1.0]), Err(Error::Dimension(_))));
    }
}
