//! Versioned JSON model files.
//!
//! Layout: `format_version` (currently 1), `spec`, `class_labels`,
//! `preprocess`, `vocabulary`, `idf`, `parameters`. All floats are stored
//! in probability/weight space (always finite), and JSON round-trips f64
//! exactly, so a reloaded model predicts bit-identically.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{RefactoringType, CLASS_COUNT};
use crate::features::Vocabulary;
use crate::textprep::PreprocessConfig;

use super::{ClassifierSpec, ModelError, ModelParams, TrainedModel};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    spec: ClassifierSpec,
    class_labels: Vec<RefactoringType>,
    preprocess: PreprocessConfig,
    vocabulary: Vocabulary,
    /// Smoothed IDF per vocabulary column; derivable from the vocabulary
    /// but stored explicitly for interoperability.
    idf: Vec<f64>,
    parameters: ModelParams,
}

/// Write the model to `path` as versioned JSON.
pub fn serialize_model(model: &TrainedModel, path: impl AsRef<Path>) -> Result<(), ModelError> {
    let path = path.as_ref();
    let file = ModelFile {
        format_version: FORMAT_VERSION,
        spec: model.spec.clone(),
        class_labels: model.class_labels.to_vec(),
        preprocess: model.preprocess.clone(),
        vocabulary: model.vocabulary.clone(),
        idf: model.vocabulary.idf_values(),
        parameters: model.params.clone(),
    };
    let json = serde_json::to_string_pretty(&file)
        .map_err(|e| ModelError::CorruptModel { detail: e.to_string() })?;
    std::fs::write(path, json)
        .map_err(|e| ModelError::Io { path: path.display().to_string(), source: e })
}

/// Load a model written by [`serialize_model`].
pub fn load_model(path: impl AsRef<Path>) -> Result<TrainedModel, ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ModelError::Io { path: path.display().to_string(), source: e })?;

    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| ModelError::CorruptModel { detail: e.to_string() })?;
    let found = value
        .get("format_version")
        .and_then(serde_json::Value::as_i64)
        .ok_or_else(|| ModelError::CorruptModel { detail: "missing format_version".into() })?;
    if found != i64::from(FORMAT_VERSION) {
        return Err(ModelError::FormatVersionMismatch { found, supported: FORMAT_VERSION });
    }

    let file: ModelFile = serde_json::from_value(value)
        .map_err(|e| ModelError::CorruptModel { detail: e.to_string() })?;

    let mut vocabulary = file.vocabulary;
    vocabulary.rebuild_index();

    if file.class_labels != RefactoringType::ALL {
        return Err(ModelError::CorruptModel {
            detail: "class_labels are not the six canonical classes in order".into(),
        });
    }
    if file.idf.len() != vocabulary.len() {
        return Err(ModelError::CorruptModel { detail: "idf length != vocabulary size".into() });
    }
    // IDF is derived from integer document frequencies, so the stored
    // values must reproduce bit-exactly; a mismatch means the file was
    // edited inconsistently.
    for (col, &stored) in file.idf.iter().enumerate() {
        if stored.to_bits() != vocabulary.idf(col).to_bits() {
            return Err(ModelError::CorruptModel {
                detail: format!("idf[{col}] does not match the vocabulary statistics"),
            });
        }
    }
    check_dimensions(&file.parameters, vocabulary.len())?;

    Ok(TrainedModel {
        spec: file.spec,
        class_labels: RefactoringType::ALL,
        preprocess: file.preprocess,
        vocabulary,
        params: file.parameters,
    })
}

fn check_dimensions(params: &ModelParams, vocab_len: usize) -> Result<(), ModelError> {
    let corrupt = |detail: &str| Err(ModelError::CorruptModel { detail: detail.to_string() });
    match params {
        ModelParams::NaiveBayes(p) => {
            if p.priors.len() != CLASS_COUNT
                || p.term_likelihood.len() != CLASS_COUNT
                || p.term_likelihood.iter().any(|row| row.len() != vocab_len)
            {
                return corrupt("naive bayes parameter dimensions do not match the vocabulary");
            }
        }
        ModelParams::Softmax(p) => {
            if p.n_features != vocab_len
                || p.weights.len() != CLASS_COUNT
                || p.weights.iter().any(|row| row.len() != vocab_len + 1)
                || p.weights.iter().flatten().any(|w| !w.is_finite())
            {
                return corrupt("softmax weight dimensions do not match or are not finite");
            }
        }
        ModelParams::Knn(p) => {
            if p.rows.len() != p.labels.len()
                || p.rows.iter().flat_map(|r| &r.entries).any(|&(col, _)| col >= vocab_len)
            {
                return corrupt("knn rows do not match the vocabulary");
            }
        }
        ModelParams::KeywordBaseline(p) => {
            if p.table.rules.is_empty() {
                return corrupt("baseline rule table is empty");
            }
        }
    }
    Ok(())
}
