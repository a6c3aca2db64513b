use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Stratified train/test partition of item indices.
///
/// Each subject keeps `round(n * (1 - train_fraction))` items for testing,
/// clamped so both partitions receive at least one. Membership comes from a
/// seeded shuffle; both index lists are returned in ascending order.
pub fn split_indices(subjects: &[u32], train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::param(format!("train fraction {train_fraction} must lie in (0, 1)")));
    }
    let mut by_subject: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &s) in subjects.iter().enumerate() {
        by_subject.entry(s).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut is_test = vec![false; subjects.len()];
    for (subject, mut idx) in by_subject {
        let n = idx.len();
        if n < 2 {
            return Err(Error::Stratification(format!(
                "subject {subject} has {n} sample(s); at least 2 are needed to appear in both partitions"
            )));
        }
        let n_test = ((n as f64 * (1.0 - train_fraction)).round() as usize).clamp(1, n - 1);
        idx.shuffle(&mut rng);
        for &i in &idx[..n_test] {
            is_test[i] = true;
        }
    }
    let (test, train): (Vec<usize>, Vec<usize>) = (0..subjects.len()).partition(|&i| is_test[i]);
    Ok((train, test))
}

/// [`split_indices`] applied to a list of items.
pub fn split<T: Clone>(
    items: &[T],
    subject_of: impl Fn(&T) -> u32,
    train_fraction: f64,
    seed: u64,
) -> Result<(Vec<T>, Vec<T>)> {
    let subjects: Vec<u32> = items.iter().map(subject_of).collect();
    let (train, test) = split_indices(&subjects, train_fraction, seed)?;
    Ok((
        train.iter().map(|&i| items[i].clone()).collect(),
        test.iter().map(|&i| items[i].clone()).collect(),
    ))
}
