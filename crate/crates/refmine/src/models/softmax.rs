//! Softmax (multinomial logistic) regression trained by full-batch gradient
//! descent on cross-entropy with an L2 penalty. Full-batch keeps training
//! deterministic; the seed only drives the tiny initial weight noise.

use serde::{Deserialize, Serialize};

use crate::corpus::{RefactoringType, CLASS_COUNT};
use crate::features::{FeatureMatrix, FeatureRow};
use crate::rng::Rng;

use super::{argmax_class, ClassDistribution, Predicted, Prediction};

/// Weight matrix, one row per class; the last column is the bias. The L2
/// penalty never touches the bias column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxParams {
    pub n_features: usize,
    /// CLASS_COUNT rows of n_features + 1 weights.
    pub weights: Vec<Vec<f64>>,
}

impl SoftmaxParams {
    fn logits(&self, row: &FeatureRow) -> [f64; CLASS_COUNT] {
        let bias_col = self.n_features;
        let mut z = [0.0; CLASS_COUNT];
        for (c, w) in self.weights.iter().enumerate() {
            let mut sum = w[bias_col];
            for &(col, value) in &row.entries {
                sum += w[col] * value;
            }
            z[c] = sum;
        }
        z
    }
}

fn softmax(z: &[f64; CLASS_COUNT]) -> ClassDistribution {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = [0.0; CLASS_COUNT];
    let mut total = 0.0;
    for c in 0..CLASS_COUNT {
        out[c] = (z[c] - max).exp();
        total += out[c];
    }
    for p in &mut out {
        *p /= total;
    }
    out
}

/// Mean cross-entropy over the batch plus (l2/2) * ||W||^2 (bias excluded),
/// and its gradient with respect to every weight. The training loop and the
/// gradient checks call this same function.
pub fn loss_and_gradient(
    params: &SoftmaxParams,
    rows: &[FeatureRow],
    labels: &[RefactoringType],
    l2_lambda: f64,
) -> (f64, Vec<Vec<f64>>) {
    let n = rows.len() as f64;
    let bias_col = params.n_features;
    let mut grad = vec![vec![0.0; params.n_features + 1]; CLASS_COUNT];
    let mut loss = 0.0;

    for (row, label) in rows.iter().zip(labels) {
        let probs = softmax(&params.logits(row));
        // Clamp to avoid ln(0) from severe underflow on extreme logits.
        loss -= probs[label.index()].max(f64::MIN_POSITIVE).ln();
        for c in 0..CLASS_COUNT {
            let delta = probs[c] - if c == label.index() { 1.0 } else { 0.0 };
            for &(col, value) in &row.entries {
                grad[c][col] += delta * value;
            }
            grad[c][bias_col] += delta;
        }
    }

    loss /= n;
    let mut penalty = 0.0;
    for c in 0..CLASS_COUNT {
        for j in 0..=params.n_features {
            grad[c][j] /= n;
            if j != bias_col {
                let w = params.weights[c][j];
                grad[c][j] += l2_lambda * w;
                penalty += w * w;
            }
        }
    }
    loss += 0.5 * l2_lambda * penalty;
    (loss, grad)
}

pub(super) fn fit(
    matrix: &FeatureMatrix,
    labels: &[RefactoringType],
    learning_rate: f64,
    l2_lambda: f64,
    epochs: u32,
    seed: u64,
) -> SoftmaxParams {
    let n_features = matrix.n_cols;
    let mut rng = Rng::new(seed);
    let mut noise = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * 0.02 - 0.01;
    let weights = (0..CLASS_COUNT)
        .map(|_| (0..=n_features).map(|_| noise()).collect())
        .collect();
    let mut params = SoftmaxParams { n_features, weights };

    for _ in 0..epochs {
        let (_, grad) = loss_and_gradient(&params, &matrix.rows, labels, l2_lambda);
        for c in 0..CLASS_COUNT {
            for j in 0..=n_features {
                params.weights[c][j] -= learning_rate * grad[c][j];
            }
        }
    }
    params
}

pub(super) fn predict(params: &SoftmaxParams, row: &FeatureRow) -> Prediction {
    let distribution = softmax(&params.logits(row));
    Prediction { label: Predicted::Class(argmax_class(&distribution)), distribution }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RefactoringType::*;
    use crate::features::{build_vocabulary, count_vectorize, tfidf_transform, FeatureConfig};
    use crate::models::{fit as model_fit, predict as model_predict, ClassifierSpec, ModelParams};
    use crate::textprep::{Document, PreprocessConfig};

    fn doc(id: &str, tokens: &[&str]) -> Document {
        Document {
            source_id: id.to_string(),
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
            config_fingerprint: PreprocessConfig::default().fingerprint(),
        }
    }

    fn separable_matrix() -> (crate::features::FeatureMatrix, Vec<RefactoringType>, crate::features::Vocabulary)
    {
        let docs = vec![
            doc("a1", &["alpha", "one"]),
            doc("a2", &["alpha", "two"]),
            doc("b1", &["beta", "one"]),
            doc("b2", &["beta", "two"]),
        ];
        let labels = vec![ExtractMethod, ExtractMethod, MoveMethod, MoveMethod];
        let vocab =
            build_vocabulary(&docs, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        let counts = count_vectorize(&docs, &vocab);
        (tfidf_transform(&counts, &vocab), labels, vocab)
    }

    #[test]
    fn training_decreases_cross_entropy_on_separable_data() {
        let (tfidf, labels, vocab) = separable_matrix();
        let spec =
            ClassifierSpec::Softmax { learning_rate: 0.5, l2_lambda: 0.0, epochs: 200, seed: 1 };
        let model =
            model_fit(&spec, &tfidf, &labels, &PreprocessConfig::default(), &vocab).unwrap();
        let trained = match &model.params {
            ModelParams::Softmax(p) => p,
            _ => unreachable!(),
        };

        // Re-derive the initial weights from the same seed.
        let initial = fit(&tfidf, &labels, 0.5, 0.0, 0, 1);
        let (loss_start, _) = loss_and_gradient(&initial, &tfidf.rows, &labels, 0.0);
        let (loss_end, _) = loss_and_gradient(trained, &tfidf.rows, &labels, 0.0);
        assert!(
            loss_end < loss_start,
            "cross-entropy should decrease: {loss_start} -> {loss_end}"
        );

        for (row, label) in tfidf.rows.iter().zip(&labels) {
            let p = model_predict(&model, row).unwrap();
            assert_eq!(p.label, Predicted::Class(*label));
        }
    }

    #[test]
    fn gradient_matches_central_finite_differences() {
        let (tfidf, labels, _) = separable_matrix();
        let mut params = fit(&tfidf, &labels, 0.5, 0.0, 0, 7);
        let l2 = 1e-2;
        let (_, grad) = loss_and_gradient(&params, &tfidf.rows, &labels, l2);

        let step = 1e-5;
        for c in 0..CLASS_COUNT {
            for j in 0..=params.n_features {
                let original = params.weights[c][j];
                params.weights[c][j] = original + step;
                let (plus, _) = loss_and_gradient(&params, &tfidf.rows, &labels, l2);
                params.weights[c][j] = original - step;
                let (minus, _) = loss_and_gradient(&params, &tfidf.rows, &labels, l2);
                params.weights[c][j] = original;
                let numeric = (plus - minus) / (2.0 * step);
                let denom = grad[c][j].abs().max(numeric.abs()).max(1e-8);
                assert!(
                    (grad[c][j] - numeric).abs() / denom < 1e-4,
                    "w[{c}][{j}]: analytic {} vs numeric {numeric}",
                    grad[c][j]
                );
            }
        }
    }

    #[test]
    fn fit_is_deterministic_given_seed() {
        let (tfidf, labels, _) = separable_matrix();
        let a = fit(&tfidf, &labels, 0.5, 1e-3, 50, 42);
        let b = fit(&tfidf, &labels, 0.5, 1e-3, 50, 42);
        assert_eq!(a, b);
        let c = fit(&tfidf, &labels, 0.5, 1e-3, 50, 43);
        assert_ne!(a, c);
    }

    #[test]
    fn distribution_sums_to_one_and_weights_stay_finite() {
        let (tfidf, labels, vocab) = separable_matrix();
        let model = model_fit(
            &ClassifierSpec::softmax(),
            &tfidf,
            &labels,
            &PreprocessConfig::default(),
            &vocab,
        )
        .unwrap();
        if let ModelParams::Softmax(p) = &model.params {
            assert!(p.weights.iter().flatten().all(|w| w.is_finite()));
        }
        for row in &tfidf.rows {
            let p = model_predict(&model, row).unwrap();
            let sum: f64 = p.distribution.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
    }
}
