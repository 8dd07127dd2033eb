//! Multinomial naive Bayes over term counts with Laplace smoothing.

use serde::{Deserialize, Serialize};

use crate::corpus::{RefactoringType, CLASS_COUNT};
use crate::features::{FeatureMatrix, FeatureRow};

use super::{argmax_class, ClassDistribution, Predicted, Prediction};

/// Parameters in probability space: `priors[c]` and `term_likelihood[c][j]`
/// = P(term j | class c), each class row summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NbParams {
    pub alpha: f64,
    pub priors: Vec<f64>,
    pub term_likelihood: Vec<Vec<f64>>,
}

pub(super) fn fit(
    matrix: &FeatureMatrix,
    labels: &[RefactoringType],
    alpha: f64,
    n_terms: usize,
) -> NbParams {
    let mut class_counts = [0usize; CLASS_COUNT];
    let mut term_counts = vec![vec![0.0f64; n_terms]; CLASS_COUNT];
    let mut class_mass = [0.0f64; CLASS_COUNT];

    for (row, label) in matrix.rows.iter().zip(labels) {
        let c = label.index();
        class_counts[c] += 1;
        for &(col, count) in &row.entries {
            term_counts[c][col] += count;
            class_mass[c] += count;
        }
    }

    let n = labels.len() as f64;
    let priors = class_counts.iter().map(|&c| c as f64 / n).collect();
    let term_likelihood = (0..CLASS_COUNT)
        .map(|c| {
            let denom = class_mass[c] + alpha * n_terms as f64;
            term_counts[c].iter().map(|&count| (count + alpha) / denom).collect()
        })
        .collect();

    NbParams { alpha, priors, term_likelihood }
}

/// Posterior over classes, computed in log space and normalized with
/// log-sum-exp. A zero row carries no evidence, so the posterior equals
/// the priors.
pub(super) fn predict(params: &NbParams, row: &FeatureRow) -> Prediction {
    let mut log_posterior = [0.0f64; CLASS_COUNT];
    for c in 0..CLASS_COUNT {
        // ln(0) = -inf is fine here: a zero-prior class keeps posterior 0.
        let mut lp = params.priors[c].ln();
        for &(col, count) in &row.entries {
            lp += count * params.term_likelihood[c][col].ln();
        }
        log_posterior[c] = lp;
    }

    let max = log_posterior.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut distribution: ClassDistribution = [0.0; CLASS_COUNT];
    let mut total = 0.0;
    for c in 0..CLASS_COUNT {
        let p = (log_posterior[c] - max).exp();
        distribution[c] = p;
        total += p;
    }
    for p in &mut distribution {
        *p /= total;
    }

    Prediction { label: Predicted::Class(argmax_class(&distribution)), distribution }
}
