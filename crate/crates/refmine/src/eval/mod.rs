//! Cross-validation, metric computation, and model comparison.

mod confusion;
mod metrics;

pub use confusion::{confusion, ConfusionMatrix};
pub use metrics::{macro_and_weighted, per_class_metrics, AverageMetrics, ClassMetrics};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{stratified_folds, CorpusError, Dataset, RefactoringType};
use crate::features::{
    build_vocabulary, count_vectorize, tfidf_transform, vectorize_one, FeatureConfig,
    FeatureError, Vocabulary, Weighting,
};
use crate::fingerprint;
use crate::models::{fit, predict, ClassifierSpec, ModelError, Predicted};
use crate::textprep::{preprocess, Document, PreprocessConfig};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("truth has {truth} entries but predictions have {predicted}")]
    LengthMismatch { truth: usize, predicted: usize },
    #[error("reports are not comparable: {detail}")]
    FoldMismatch { detail: String },
    #[error("test-fold document {id:?} leaked into vocabulary construction")]
    LeakageDetected { id: String },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Fail if any held-out document id participated in building `vocab`.
/// [`cross_validate`] runs this for every fold; the same check is callable
/// directly so tests can prove the guard trips on a poisoned vocabulary.
pub fn verify_no_vocabulary_leakage<'a>(
    vocab: &Vocabulary,
    held_out_ids: impl IntoIterator<Item = &'a str>,
) -> Result<(), EvalError> {
    for id in held_out_ids {
        if vocab.source_ids().contains(id) {
            return Err(EvalError::LeakageDetected { id: id.to_string() });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: RefactoringType,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
}

/// Everything one cross-validation run produces. Serialization is
/// deterministic: no wall-clock fields, canonical key order, and the
/// report writer pins float formatting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub model: String,
    pub k: usize,
    pub seed: u64,
    pub dataset_fingerprint: String,
    pub accuracy: f64,
    pub macro_avg: AverageMetrics,
    pub weighted_avg: AverageMetrics,
    pub abstentions: u64,
    pub per_class: Vec<ClassReport>,
    pub spec: ClassifierSpec,
    pub preprocess: PreprocessConfig,
    pub features: FeatureConfig,
    pub aggregate_confusion: ConfusionMatrix,
    pub folds: Vec<FoldResult>,
}

impl EvaluationReport {
    pub fn per_class_f1(&self) -> [f64; crate::corpus::CLASS_COUNT] {
        let mut out = [0.0; crate::corpus::CLASS_COUNT];
        for entry in &self.per_class {
            out[entry.class.index()] = entry.f1;
        }
        out
    }
}

/// Stratified k-fold cross-validation of one classifier spec.
///
/// For every fold, the vocabulary and IDF statistics are rebuilt from the
/// training folds only and a leakage check proves no held-out document
/// contributed. Folds are evaluated in parallel; results are aggregated in
/// fold order, so output is deterministic given the seed.
pub fn cross_validate(
    dataset: &Dataset,
    preprocess_config: &PreprocessConfig,
    feature_config: &FeatureConfig,
    spec: &ClassifierSpec,
    k: usize,
    seed: u64,
) -> Result<EvaluationReport, EvalError> {
    spec.validate()?;
    let assignment = stratified_folds(dataset, k, seed)?;
    let documents: Vec<Document> =
        dataset.records().iter().map(|r| preprocess(r, preprocess_config)).collect();
    let labels: Vec<RefactoringType> = dataset.labels();
    let weighting = spec.required_weighting().unwrap_or(Weighting::Counts);

    let fold_matrices: Vec<ConfusionMatrix> = (0..k)
        .into_par_iter()
        .map(|fold| -> Result<ConfusionMatrix, EvalError> {
            let mut train_docs = Vec::new();
            let mut train_labels = Vec::new();
            let mut test_docs = Vec::new();
            let mut test_labels = Vec::new();
            for (doc, label) in documents.iter().zip(&labels) {
                let assigned = assignment.fold_of(&doc.source_id).expect("complete assignment");
                if assigned == fold {
                    test_docs.push(doc);
                    test_labels.push(*label);
                } else {
                    train_docs.push(doc.clone());
                    train_labels.push(*label);
                }
            }

            let vocab = build_vocabulary(&train_docs, feature_config)?;
            verify_no_vocabulary_leakage(&vocab, test_docs.iter().map(|d| d.source_id.as_str()))?;

            let counts = count_vectorize(&train_docs, &vocab);
            let matrix = match weighting {
                Weighting::Counts => counts,
                Weighting::Tfidf => tfidf_transform(&counts, &vocab),
            };
            let model = fit(spec, &matrix, &train_labels, preprocess_config, &vocab)?;

            let predictions: Vec<Predicted> = test_docs
                .iter()
                .map(|doc| {
                    let row = vectorize_one(doc, &vocab, weighting);
                    predict(&model, &row).map(|p| p.label)
                })
                .collect::<Result<_, ModelError>>()?;
            confusion(&test_labels, &predictions)
        })
        .collect::<Result<_, _>>()?;

    let mut aggregate = ConfusionMatrix::new();
    for cm in &fold_matrices {
        aggregate.add(cm);
    }
    let class_metrics = per_class_metrics(&aggregate);
    let (macro_avg, weighted_avg, accuracy) = macro_and_weighted(&class_metrics);

    Ok(EvaluationReport {
        model: spec.name().to_string(),
        k,
        seed,
        dataset_fingerprint: fingerprint::to_hex(dataset.fingerprint()),
        accuracy,
        macro_avg,
        weighted_avg,
        abstentions: aggregate.abstains(),
        per_class: class_metrics
            .iter()
            .map(|(class, m)| ClassReport {
                class: *class,
                precision: m.precision,
                recall: m.recall,
                f1: m.f1,
                support: m.support,
            })
            .collect(),
        spec: spec.clone(),
        preprocess: preprocess_config.clone(),
        features: *feature_config,
        aggregate_confusion: aggregate,
        folds: fold_matrices
            .into_iter()
            .enumerate()
            .map(|(fold, cm)| {
                let total = cm.total();
                FoldResult {
                    fold,
                    accuracy: if total == 0 { 0.0 } else { cm.trace() as f64 / total as f64 },
                    confusion: cm,
                }
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub model: String,
    pub accuracy: f64,
    pub macro_f1: f64,
    pub per_class_f1: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultyEntry {
    pub class: RefactoringType,
    pub mean_f1: f64,
}

/// Models side by side, plus a per-class difficulty ranking: classes ordered
/// by mean F1 across models, descending (harder classes come last).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub k: usize,
    pub seed: u64,
    pub dataset_fingerprint: String,
    pub class_order: Vec<RefactoringType>,
    pub models: Vec<ComparisonRow>,
    pub difficulty: Vec<DifficultyEntry>,
}

/// Combine reports from the same dataset, k, and fold seed.
pub fn compare(reports: &[EvaluationReport]) -> Result<ComparisonTable, EvalError> {
    let first = reports.first().ok_or_else(|| EvalError::FoldMismatch {
        detail: "no reports to compare".to_string(),
    })?;
    for report in reports {
        if report.k != first.k || report.seed != first.seed {
            return Err(EvalError::FoldMismatch {
                detail: format!(
                    "{} used k={} seed={}, {} used k={} seed={}",
                    first.model, first.k, first.seed, report.model, report.k, report.seed
                ),
            });
        }
        if report.dataset_fingerprint != first.dataset_fingerprint {
            return Err(EvalError::FoldMismatch {
                detail: format!("{} was evaluated on a different dataset", report.model),
            });
        }
    }

    let models: Vec<ComparisonRow> = reports
        .iter()
        .map(|r| ComparisonRow {
            model: r.model.clone(),
            accuracy: r.accuracy,
            macro_f1: r.macro_avg.f1,
            per_class_f1: r.per_class_f1().to_vec(),
        })
        .collect();

    let mut difficulty: Vec<DifficultyEntry> = RefactoringType::ALL
        .iter()
        .map(|&class| {
            let mean = models.iter().map(|m| m.per_class_f1[class.index()]).sum::<f64>()
                / models.len() as f64;
            DifficultyEntry { class, mean_f1: mean }
        })
        .collect();
    difficulty.sort_by(|a, b| {
        b.mean_f1.total_cmp(&a.mean_f1).then_with(|| a.class.index().cmp(&b.class.index()))
    });

    Ok(ComparisonTable {
        k: first.k,
        seed: first.seed,
        dataset_fingerprint: first.dataset_fingerprint.clone(),
        class_order: RefactoringType::ALL.to_vec(),
        models,
        difficulty,
    })
}
