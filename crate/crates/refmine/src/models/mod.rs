//! Multi-class classifiers and the keyword-matching baseline behind one
//! uniform fit/predict contract.
//!
//! Naive Bayes trains on count features; softmax regression and kNN train
//! on L2-normalized TF-IDF; the keyword baseline ignores the matrix and
//! compiles its rule table against the model's preprocessing config.

mod baseline;
mod knn;
mod naive_bayes;
mod softmax;
mod store;

pub use baseline::{
    baseline_predict, default_rule_table, load_rule_table, KeywordRule, KeywordRuleTable,
    NoMatchPolicy,
};
pub use softmax::{loss_and_gradient, SoftmaxParams};
pub use store::{load_model, serialize_model};

use serde::{Deserialize, Serialize};

use crate::corpus::{RefactoringType, CLASS_COUNT};
use crate::features::{vectorize_one, FeatureMatrix, FeatureRow, Vocabulary, Weighting};
use crate::textprep::{preprocess_text, Document, PreprocessConfig};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("{spec}: invalid hyperparameter: {detail}")]
    InvalidHyperparameter { spec: String, detail: String },
    #[error("{kind} requires {expected:?} features, got {got:?}")]
    IncompatibleWeighting { kind: String, expected: Weighting, got: Weighting },
    #[error("training set contains a single class; need at least two")]
    SingleClassTrainingSet,
    #[error("row was built against a different vocabulary than the model")]
    VocabularyMismatch,
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("model file has format_version {found}, this build supports {supported}")]
    FormatVersionMismatch { found: i64, supported: u32 },
    #[error("corrupt model file: {detail}")]
    CorruptModel { detail: String },
}

/// Classifier kind plus validated hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassifierSpec {
    NaiveBayes {
        /// Laplace smoothing on term counts. Must be positive.
        alpha: f64,
    },
    Softmax {
        learning_rate: f64,
        l2_lambda: f64,
        epochs: u32,
        seed: u64,
    },
    Knn {
        /// Neighborhood size. Must be at least 1.
        k: usize,
    },
    KeywordBaseline { rules: KeywordRuleTable },
}

impl ClassifierSpec {
    pub fn naive_bayes() -> Self {
        ClassifierSpec::NaiveBayes { alpha: 1.0 }
    }

    pub fn softmax() -> Self {
        ClassifierSpec::Softmax { learning_rate: 0.5, l2_lambda: 1e-3, epochs: 300, seed: 42 }
    }

    pub fn knn() -> Self {
        ClassifierSpec::Knn { k: 5 }
    }

    pub fn keyword_baseline() -> Self {
        ClassifierSpec::KeywordBaseline { rules: default_rule_table() }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassifierSpec::NaiveBayes { .. } => "naive_bayes",
            ClassifierSpec::Softmax { .. } => "softmax",
            ClassifierSpec::Knn { .. } => "knn",
            ClassifierSpec::KeywordBaseline { .. } => "keyword_baseline",
        }
    }

    /// Feature weighting this kind trains on. The baseline ignores its
    /// matrix, so any weighting is accepted there.
    pub fn required_weighting(&self) -> Option<Weighting> {
        match self {
            ClassifierSpec::NaiveBayes { .. } => Some(Weighting::Counts),
            ClassifierSpec::Softmax { .. } | ClassifierSpec::Knn { .. } => Some(Weighting::Tfidf),
            ClassifierSpec::KeywordBaseline { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let fail = |detail: String| {
            Err(ModelError::InvalidHyperparameter { spec: self.name().to_string(), detail })
        };
        match self {
            ClassifierSpec::NaiveBayes { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0) {
                    return fail(format!("alpha must be > 0, got {alpha}"));
                }
            }
            ClassifierSpec::Softmax { learning_rate, l2_lambda, epochs, .. } => {
                if !(learning_rate.is_finite() && *learning_rate > 0.0) {
                    return fail(format!("learning_rate must be > 0, got {learning_rate}"));
                }
                if !(l2_lambda.is_finite() && *l2_lambda >= 0.0) {
                    return fail(format!("l2_lambda must be >= 0, got {l2_lambda}"));
                }
                if *epochs < 1 {
                    return fail("epochs must be >= 1".to_string());
                }
            }
            ClassifierSpec::Knn { k } => {
                if *k < 1 {
                    return fail("k must be >= 1".to_string());
                }
            }
            ClassifierSpec::KeywordBaseline { rules } => {
                rules.validate().map_err(|detail| ModelError::InvalidHyperparameter {
                    spec: self.name().to_string(),
                    detail,
                })?;
            }
        }
        Ok(())
    }
}

/// Probability mass over the six classes, indexed canonically.
pub type ClassDistribution = [f64; CLASS_COUNT];

/// Classifier output: the winning label (or an abstention from the strict
/// keyword baseline) plus the full distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub label: Predicted,
    pub distribution: ClassDistribution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicted {
    Class(RefactoringType),
    /// No baseline rule matched, strict mode. Scored as an error.
    Abstain,
}

impl Predicted {
    pub fn as_class(&self) -> Option<RefactoringType> {
        match self {
            Predicted::Class(c) => Some(*c),
            Predicted::Abstain => None,
        }
    }
}

impl Serialize for Predicted {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Predicted::Class(c) => serializer.serialize_str(c.as_str()),
            Predicted::Abstain => serializer.serialize_str("abstain"),
        }
    }
}

impl<'de> Deserialize<'de> for Predicted {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "abstain" {
            return Ok(Predicted::Abstain);
        }
        s.parse()
            .map(Predicted::Class)
            .map_err(|e: crate::corpus::ParseLabelError| serde::de::Error::custom(e.to_string()))
    }
}

/// Argmax with ties broken by canonical class order.
pub(crate) fn argmax_class(distribution: &ClassDistribution) -> RefactoringType {
    let mut best = 0;
    for (i, value) in distribution.iter().enumerate().skip(1) {
        if *value > distribution[best] {
            best = i;
        }
    }
    RefactoringType::from_index(best).expect("index in range")
}

pub(crate) fn uniform_distribution() -> ClassDistribution {
    [1.0 / CLASS_COUNT as f64; CLASS_COUNT]
}

/// Fitted parameters, one variant per classifier kind. Probabilities are
/// stored in probability space (not logs) so the JSON model file contains
/// only finite values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelParams {
    NaiveBayes(naive_bayes::NbParams),
    Softmax(softmax::SoftmaxParams),
    Knn(knn::KnnParams),
    KeywordBaseline(baseline::CompiledRules),
}

/// A fitted classifier together with the feature pipeline that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub spec: ClassifierSpec,
    /// The six classes in canonical order.
    pub class_labels: [RefactoringType; CLASS_COUNT],
    pub preprocess: PreprocessConfig,
    pub vocabulary: Vocabulary,
    pub params: ModelParams,
}

impl TrainedModel {
    pub fn name(&self) -> &'static str {
        self.spec.name()
    }

    pub fn vocab_fingerprint(&self) -> u64 {
        self.vocabulary.fingerprint()
    }
}

/// Train a classifier. Deterministic given the spec (including any seed).
pub fn fit(
    spec: &ClassifierSpec,
    matrix: &FeatureMatrix,
    labels: &[RefactoringType],
    preprocess: &PreprocessConfig,
    vocabulary: &Vocabulary,
) -> Result<TrainedModel, ModelError> {
    spec.validate()?;
    assert_eq!(matrix.n_rows(), labels.len(), "labels must align with matrix rows");
    assert_eq!(
        matrix.vocab_fingerprint,
        vocabulary.fingerprint(),
        "matrix built on another vocabulary"
    );

    if let Some(expected) = spec.required_weighting() {
        if matrix.weighting != expected {
            return Err(ModelError::IncompatibleWeighting {
                kind: spec.name().to_string(),
                expected,
                got: matrix.weighting,
            });
        }
    }
    let distinct: std::collections::BTreeSet<RefactoringType> = labels.iter().copied().collect();
    if distinct.len() < 2 {
        return Err(ModelError::SingleClassTrainingSet);
    }

    let params = match spec {
        ClassifierSpec::NaiveBayes { alpha } => {
            ModelParams::NaiveBayes(naive_bayes::fit(matrix, labels, *alpha, vocabulary.len()))
        }
        ClassifierSpec::Softmax { learning_rate, l2_lambda, epochs, seed } => {
            ModelParams::Softmax(softmax::fit(
                matrix,
                labels,
                *learning_rate,
                *l2_lambda,
                *epochs,
                *seed,
            ))
        }
        ClassifierSpec::Knn { .. } => ModelParams::Knn(knn::fit(matrix, labels)),
        ClassifierSpec::KeywordBaseline { rules } => {
            ModelParams::KeywordBaseline(baseline::compile(rules, preprocess))
        }
    };

    Ok(TrainedModel {
        spec: spec.clone(),
        class_labels: RefactoringType::ALL,
        preprocess: preprocess.clone(),
        vocabulary: vocabulary.clone(),
        params,
    })
}

/// Classify one feature row built against the model's vocabulary.
pub fn predict(model: &TrainedModel, row: &FeatureRow) -> Result<Prediction, ModelError> {
    if row.vocab_fingerprint != model.vocabulary.fingerprint() {
        return Err(ModelError::VocabularyMismatch);
    }
    let prediction = match &model.params {
        ModelParams::NaiveBayes(params) => naive_bayes::predict(params, row),
        ModelParams::Softmax(params) => softmax::predict(params, row),
        ModelParams::Knn(params) => knn::predict(params, row, knn_k(&model.spec)),
        ModelParams::KeywordBaseline(rules) => baseline::predict(rules, row, &model.vocabulary),
    };
    Ok(prediction)
}

fn knn_k(spec: &ClassifierSpec) -> usize {
    match spec {
        ClassifierSpec::Knn { k } => *k,
        _ => unreachable!("knn params imply a knn spec"),
    }
}

/// Classify a raw commit message through the model's stored pipeline:
/// preprocess with the trained config, vectorize against the trained
/// vocabulary (training IDF reused), then [`predict`]. This is the one
/// code path for raw-text prediction; the CLI calls it too.
pub fn predict_message(model: &TrainedModel, message: &str) -> Prediction {
    let document = Document {
        source_id: String::new(),
        tokens: preprocess_text(message, &model.preprocess),
        config_fingerprint: model.preprocess.fingerprint(),
    };
    let weighting = match model.spec.required_weighting() {
        Some(w) => w,
        None => Weighting::Counts,
    };
    let row = vectorize_one(&document, &model.vocabulary, weighting);
    predict(model, &row).expect("row built against the model's own vocabulary")
}
