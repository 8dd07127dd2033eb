//! Precision / recall / F1 from confusion matrices, with macro and
//! support-weighted averages. Any 0/0 is defined as 0.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::RefactoringType;

use super::confusion::ConfusionMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-class precision = tp/(tp+fp), recall = tp/(tp+fn), f1 = 2pr/(p+r).
/// False negatives include abstentions on that class, so abstains count
/// against recall; abstains never contribute false positives.
pub fn per_class_metrics(cm: &ConfusionMatrix) -> BTreeMap<RefactoringType, ClassMetrics> {
    RefactoringType::ALL
        .iter()
        .map(|&class| {
            let tp = cm.get(class, class);
            let precision = ratio(tp, cm.predicted_count(class));
            let recall = ratio(tp, cm.support(class));
            let f1 = if precision + recall == 0.0 {
                0.0
            } else {
                2.0 * precision * recall / (precision + recall)
            };
            (class, ClassMetrics { precision, recall, f1, support: cm.support(class) })
        })
        .collect()
}

/// Macro (unweighted over classes with support) and support-weighted
/// averages, plus accuracy = trace / total.
pub fn macro_and_weighted(
    metrics: &BTreeMap<RefactoringType, ClassMetrics>,
) -> (AverageMetrics, AverageMetrics, f64) {
    let present: Vec<&ClassMetrics> = metrics.values().filter(|m| m.support > 0).collect();
    let n = present.len() as f64;
    let total_support: u64 = present.iter().map(|m| m.support).sum();

    let macro_avg = if present.is_empty() {
        AverageMetrics { precision: 0.0, recall: 0.0, f1: 0.0 }
    } else {
        AverageMetrics {
            precision: present.iter().map(|m| m.precision).sum::<f64>() / n,
            recall: present.iter().map(|m| m.recall).sum::<f64>() / n,
            f1: present.iter().map(|m| m.f1).sum::<f64>() / n,
        }
    };

    let weighted_avg = if total_support == 0 {
        AverageMetrics { precision: 0.0, recall: 0.0, f1: 0.0 }
    } else {
        let w = total_support as f64;
        AverageMetrics {
            precision: present.iter().map(|m| m.precision * m.support as f64).sum::<f64>() / w,
            recall: present.iter().map(|m| m.recall * m.support as f64).sum::<f64>() / w,
            f1: present.iter().map(|m| m.f1 * m.support as f64).sum::<f64>() / w,
        }
    };

    // Support-weighted recall is exactly trace/total: sum(tp) / sum(support).
    let accuracy = weighted_avg.recall;
    (macro_avg, weighted_avg, accuracy)
}
