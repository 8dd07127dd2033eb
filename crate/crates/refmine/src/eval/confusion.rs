//! Confusion matrices over the six classes, with a dedicated abstain column
//! for the keyword baseline's strict mode.

use serde::{Deserialize, Serialize};

use crate::corpus::{RefactoringType, CLASS_COUNT};
use crate::models::Predicted;

use super::EvalError;

/// Rows are the true class, columns the predicted class, both in canonical
/// order; column index `CLASS_COUNT` counts abstentions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    counts: [[u64; CLASS_COUNT + 1]; CLASS_COUNT],
}

impl ConfusionMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, truth: RefactoringType, predicted: Predicted) {
        let col = match predicted {
            Predicted::Class(c) => c.index(),
            Predicted::Abstain => CLASS_COUNT,
        };
        self.counts[truth.index()][col] += 1;
    }

    pub fn get(&self, truth: RefactoringType, predicted: RefactoringType) -> u64 {
        self.counts[truth.index()][predicted.index()]
    }

    pub fn abstains_for(&self, truth: RefactoringType) -> u64 {
        self.counts[truth.index()][CLASS_COUNT]
    }

    pub fn abstains(&self) -> u64 {
        (0..CLASS_COUNT).map(|t| self.counts[t][CLASS_COUNT]).sum()
    }

    /// Correct predictions (diagonal sum). Abstains never count here.
    pub fn trace(&self) -> u64 {
        (0..CLASS_COUNT).map(|c| self.counts[c][c]).sum()
    }

    /// All evaluated samples, abstentions included.
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// True count of a class (its row sum).
    pub fn support(&self, class: RefactoringType) -> u64 {
        self.counts[class.index()].iter().sum()
    }

    /// How often a class was predicted (its column sum; abstains excluded).
    pub fn predicted_count(&self, class: RefactoringType) -> u64 {
        (0..CLASS_COUNT).map(|t| self.counts[t][class.index()]).sum()
    }

    /// Elementwise sum.
    pub fn add(&mut self, other: &ConfusionMatrix) {
        for t in 0..CLASS_COUNT {
            for p in 0..=CLASS_COUNT {
                self.counts[t][p] += other.counts[t][p];
            }
        }
    }
}

/// Build a confusion matrix from aligned truth/prediction sequences.
pub fn confusion(
    truth: &[RefactoringType],
    predicted: &[Predicted],
) -> Result<ConfusionMatrix, EvalError> {
    if truth.len() != predicted.len() {
        return Err(EvalError::LengthMismatch { truth: truth.len(), predicted: predicted.len() });
    }
    let mut cm = ConfusionMatrix::new();
    for (t, p) in truth.iter().zip(predicted) {
        cm.record(*t, *p);
    }
    Ok(cm)
}
