//! k-nearest-neighbor classification by cosine similarity.
//!
//! Training rows are L2-normalized TF-IDF, so cosine similarity is a plain
//! dot product. Neighbor ranking ties break on training-row index; vote
//! ties break on summed similarity, then canonical class order.

use serde::{Deserialize, Serialize};

use crate::corpus::{RefactoringType, CLASS_COUNT};
use crate::features::{FeatureMatrix, FeatureRow};

use super::{ClassDistribution, Predicted, Prediction};

/// The retained training rows and their labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    pub rows: Vec<FeatureRow>,
    pub labels: Vec<RefactoringType>,
}

pub(super) fn fit(matrix: &FeatureMatrix, labels: &[RefactoringType]) -> KnnParams {
    KnnParams { rows: matrix.rows.clone(), labels: labels.to_vec() }
}

pub(super) fn predict(params: &KnnParams, row: &FeatureRow, k: usize) -> Prediction {
    let mut scored: Vec<(usize, f64)> = params
        .rows
        .iter()
        .enumerate()
        .map(|(i, train)| (i, train.dot(row)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    let k_eff = k.min(scored.len()).max(1);
    let mut votes = [0usize; CLASS_COUNT];
    let mut similarity = [0.0f64; CLASS_COUNT];
    for &(index, sim) in &scored[..k_eff] {
        let c = params.labels[index].index();
        votes[c] += 1;
        similarity[c] += sim;
    }

    let mut winner = 0;
    for c in 1..CLASS_COUNT {
        let better = votes[c] > votes[winner]
            || (votes[c] == votes[winner] && similarity[c] > similarity[winner]);
        if better {
            winner = c;
        }
    }

    let mut distribution: ClassDistribution = [0.0; CLASS_COUNT];
    for c in 0..CLASS_COUNT {
        distribution[c] = votes[c] as f64 / k_eff as f64;
    }

    Prediction {
        label: Predicted::Class(RefactoringType::from_index(winner).expect("in range")),
        distribution,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RefactoringType::*;
    use crate::features::{build_vocabulary, count_vectorize, tfidf_transform, FeatureConfig};
    use crate::models::{fit as model_fit, predict as model_predict, ClassifierSpec};
    use crate::textprep::{Document, PreprocessConfig};

    fn doc(id: &str, tokens: &[&str]) -> Document {
        Document {
            source_id: id.to_string(),
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
            config_fingerprint: PreprocessConfig::default().fingerprint(),
        }
    }

    #[test]
    fn nearest_neighbor_of_a_training_row_is_itself() {
        let docs = vec![
            doc("a", &["alpha", "one"]),
            doc("b", &["beta", "two"]),
            doc("c", &["gamma", "three"]),
        ];
        let labels = vec![ExtractMethod, MoveMethod, RenameMethod];
        let vocab =
            build_vocabulary(&docs, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        let tfidf = tfidf_transform(&count_vectorize(&docs, &vocab), &vocab);
        let model = model_fit(
            &ClassifierSpec::Knn { k: 1 },
            &tfidf,
            &labels,
            &PreprocessConfig::default(),
            &vocab,
        )
        .unwrap();

        for (row, label) in tfidf.rows.iter().zip(&labels) {
            let p = model_predict(&model, row).unwrap();
            assert_eq!(p.label, Predicted::Class(*label));
            assert_eq!(p.distribution[label.index()], 1.0);
        }
    }

    #[test]
    fn vote_shares_sum_to_one() {
        let docs = vec![
            doc("a1", &["alpha"]),
            doc("a2", &["alpha", "x"]),
            doc("b1", &["beta"]),
        ];
        let labels = vec![ExtractMethod, ExtractMethod, MoveMethod];
        let vocab =
            build_vocabulary(&docs, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        let tfidf = tfidf_transform(&count_vectorize(&docs, &vocab), &vocab);
        let model = model_fit(
            &ClassifierSpec::Knn { k: 3 },
            &tfidf,
            &labels,
            &PreprocessConfig::default(),
            &vocab,
        )
        .unwrap();
        let p = model_predict(&model, &tfidf.rows[0]).unwrap();
        let sum: f64 = p.distribution.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
        assert_eq!(p.label, Predicted::Class(ExtractMethod));
    }

    #[test]
    fn zero_query_breaks_ties_deterministically() {
        let docs = vec![doc("a", &["alpha"]), doc("b", &["beta"])];
        let labels = vec![MoveMethod, ExtractMethod];
        let vocab =
            build_vocabulary(&docs, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        let tfidf = tfidf_transform(&count_vectorize(&docs, &vocab), &vocab);
        let model = model_fit(
            &ClassifierSpec::Knn { k: 1 },
            &tfidf,
            &labels,
            &PreprocessConfig::default(),
            &vocab,
        )
        .unwrap();
        // All similarities are zero; the first training row (index order)
        // wins, so the label is MoveMethod on every run.
        let zero = FeatureRow { entries: vec![], vocab_fingerprint: vocab.fingerprint() };
        let p1 = model_predict(&model, &zero).unwrap();
        let p2 = model_predict(&model, &zero).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(p1.label, Predicted::Class(MoveMethod));
    }
}
