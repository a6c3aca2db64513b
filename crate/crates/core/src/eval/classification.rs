use crate::data::Disguise;
use crate::error::{Error, Result};

/// Published accuracies used as fixed comparison rows in report footers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub method: &'static str,
    pub simple_percent: f64,
    pub complex_percent: f64,
}

/// The comparison table. The two prior methods are cited as [2]/[3] in the
/// table and as [15]/[16] in the surrounding text.
pub const REFERENCE_ROWS: [ReferenceRow; 3] = [
    ReferenceRow {
        method: "Dhamecha et al. (cited as [2] and [15])",
        simple_percent: 65.2,
        complex_percent: 53.4,
    },
    ReferenceRow {
        method: "Singh et al. (cited as [3] and [16])",
        simple_percent: 78.4,
        complex_percent: 62.6,
    },
    ReferenceRow {
        method: "keypoint geometry + SVM (reference)",
        simple_percent: 86.6,
        complex_percent: 72.4,
    },
];

#[derive(Clone, Debug, PartialEq)]
pub struct DisguiseAccuracy {
    pub id: u8,
    pub name: String,
    pub count: usize,
    pub correct: usize,
    /// `None` when no test sample carries this disguise.
    pub accuracy: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ClassificationReport {
    pub total: usize,
    pub correct: usize,
    pub accuracy: f64,
    /// Disguise ids 1..=10 in order, preceded by id 0 ("none") if present.
    pub per_disguise: Vec<DisguiseAccuracy>,
    /// Sorted union of true and predicted labels.
    pub labels: Vec<u32>,
    /// `confusion[t][p]`: samples of `labels[t]` predicted as `labels[p]`.
    pub confusion: Vec<Vec<usize>>,
}

fn disguise_name(id: u8) -> Result<String> {
    Ok(Disguise::from_id(id)?.map_or("none", |d| d.name()).to_string())
}

pub fn classification_report(predicted: &[u32], truth: &[u32], disguise_ids: &[u8]) -> Result<ClassificationReport> {
    if predicted.len() != truth.len() || truth.len() != disguise_ids.len() {
        return Err(Error::param(format!(
            "length mismatch: {} predictions, {} labels, {} disguise ids",
            predicted.len(),
            truth.len(),
            disguise_ids.len()
        )));
    }
    let first = if disguise_ids.contains(&0) { 0 } else { 1 };
    let mut per_disguise = (first..=10u8)
        .map(|id| {
            Ok(DisguiseAccuracy {
                id,
                name: disguise_name(id)?,
                count: 0,
                correct: 0,
                accuracy: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut labels: Vec<u32> = truth.iter().chain(predicted).copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let mut confusion = vec![vec![0usize; labels.len()]; labels.len()];
    let slot = |l: u32| labels.binary_search(&l).expect("collected above");
    let mut correct = 0;
    for ((&p, &t), &d) in predicted.iter().zip(truth).zip(disguise_ids) {
        disguise_name(d)?;
        let row = &mut per_disguise[(d - first) as usize];
        row.count += 1;
        if p == t {
            row.correct += 1;
            correct += 1;
        }
        confusion[slot(t)][slot(p)] += 1;
    }
    for row in &mut per_disguise {
        if row.count > 0 {
            row.accuracy = Some(row.correct as f64 / row.count as f64);
        }
    }
    let total = truth.len();
    Ok(ClassificationReport {
        total,
        correct,
        accuracy: if total > 0 { correct as f64 / total as f64 } else { 0.0 },
        per_disguise,
        labels,
        confusion,
    })
}

impl ClassificationReport {
    pub fn disguise(&self, id: u8) -> Option<&DisguiseAccuracy> {
        self.per_disguise.iter().find(|d| d.id == id)
    }

    /// True when every scarf disguise scores no higher than the best
    /// disguise without a scarf. Disguises absent from the test set are
    /// skipped.
    pub fn scarf_no_better_than_best_other(&self) -> bool {
        let scarf = |id: u8| Disguise::from_id(id).ok().flatten().is_some_and(|d| d.has_scarf());
        let best_other = self
            .per_disguise
            .iter()
            .filter(|d| !scarf(d.id))
            .filter_map(|d| d.accuracy)
            .fold(f64::NEG_INFINITY, f64::max);
        self.per_disguise
            .iter()
            .filter(|d| scarf(d.id))
            .filter_map(|d| d.accuracy)
            .all(|a| a <= best_other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_correct() {
        let r = classification_report(&[1, 2, 3], &[1, 2, 3], &[1, 4, 10]).unwrap();
        assert_eq!(r.accuracy, 1.0);
        assert!(r.per_disguise.iter().filter_map(|d| d.accuracy).all(|a| a == 1.0));
        assert_eq!(r.per_disguise.len(), 10);
    }

    #[test]
    fn half_correct_in_one_disguise() {
        let r = classification_report(&[1, 2, 3, 3], &[1, 1, 3, 3], &[2, 2, 5, 5]).unwrap();
        assert_eq!(r.disguise(2).unwrap().accuracy, Some(0.5));
        assert_eq!(r.disguise(5).unwrap().accuracy, Some(1.0));
        assert_eq!(r.disguise(3).unwrap().accuracy, None);
        assert_eq!(r.confusion, vec![vec![1, 1, 0], vec![0, 0, 0], vec![0, 0, 2]]);
        let trace: usize = (0..3).map(|i| r.confusion[i][i]).sum();
        assert_eq!(trace as f64 / r.total as f64, r.accuracy);
    }

    #[test]
    fn unknown_disguise_and_mismatch() {
        assert!(matches!(classification_report(&[1], &[1], &[11]), Err(Error::Parameter(_))));
        assert!(matches!(classification_report(&[1], &[1, 2], &[1, 1]), Err(Error::Parameter(_))));
    }

    #[test]
    fn scarf_check() {
        // disguise 4 is scarf, 1 is beard
        let r = classification_report(&[1, 2, 1, 1], &[1, 2, 1, 2], &[1, 1, 4, 4]).unwrap();
        assert!(r.scarf_no_better_than_best_other());
        let r = classification_report(&[1, 1, 1, 1], &[1, 2, 1, 1], &[1, 1, 4, 4]).unwrap();
        assert!(!r.scarf_no_better_than_best_other());
    }

    #[test]
    fn none_row_appears_only_when_used() {
        let r = classification_report(&[1], &[1], &[0]).unwrap();
        assert_eq!(r.per_disguise.len(), 11);
        assert_eq!(r.per_disguise[0].name, "none");
    }
}
