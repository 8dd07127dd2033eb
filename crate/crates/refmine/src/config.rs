//! Run configuration: one TOML file with documented defaults for every
//! field. CLI flags override file values; file values override defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::corpus::DataFormat;
use crate::features::FeatureConfig;
use crate::models::{
    default_rule_table, load_rule_table, ClassifierSpec, KeywordRuleTable, NoMatchPolicy,
};
use crate::textprep::{PreprocessConfig, StopwordList};

/// Output styles for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Text,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!("unknown format {other:?} (expected json, text, or csv)")),
        }
    }
}

/// Fully resolved configuration for a run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dataset_path: Option<PathBuf>,
    pub dataset_format: DataFormat,
    pub preprocess: PreprocessConfig,
    pub features: FeatureConfig,
    pub top_n_keywords: usize,
    pub models: Vec<ClassifierSpec>,
    pub k: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub formats: Vec<ReportFormat>,
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dataset_path: None,
            dataset_format: DataFormat::Csv,
            preprocess: PreprocessConfig::default(),
            features: FeatureConfig::default(),
            top_n_keywords: 25,
            models: vec![
                ClassifierSpec::naive_bayes(),
                ClassifierSpec::softmax(),
                ClassifierSpec::knn(),
            ],
            k: 10,
            seed: 17,
            out_dir: PathBuf::from("runs"),
            formats: vec![ReportFormat::Json, ReportFormat::Text],
            jobs: None,
        }
    }
}

// Raw file schema: every field optional so defaults apply per key.

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    dataset: RawDataset,
    #[serde(default)]
    preprocess: RawPreprocess,
    #[serde(default)]
    features: RawFeatures,
    #[serde(default)]
    evaluation: RawEvaluation,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    model: RawModels,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    path: Option<PathBuf>,
    format: Option<DataFormat>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPreprocess {
    lowercase: Option<bool>,
    strip_noise: Option<bool>,
    /// "builtin", "none", or a path to a one-word-per-line file.
    stopwords: Option<String>,
    stem: Option<bool>,
    leakage_filter: Option<bool>,
    min_token_len: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFeatures {
    min_df: Option<usize>,
    max_df_ratio: Option<f64>,
    top_n_keywords: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvaluation {
    models: Option<Vec<String>>,
    k: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    formats: Option<Vec<ReportFormat>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModels {
    #[serde(default)]
    naive_bayes: RawNaiveBayes,
    #[serde(default)]
    softmax: RawSoftmax,
    #[serde(default)]
    knn: RawKnn,
    #[serde(default)]
    keyword_baseline: RawBaseline,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNaiveBayes {
    alpha: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSoftmax {
    learning_rate: Option<f64>,
    l2_lambda: Option<f64>,
    epochs: Option<u32>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKnn {
    k: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBaseline {
    /// "builtin" or a path to a JSON rule list.
    rules: Option<String>,
    no_match: Option<NoMatchPolicy>,
}

/// Flag-level overrides collected by the CLI; every field beats the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub dataset: Option<PathBuf>,
    pub dataset_format: Option<DataFormat>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<ReportFormat>,
    pub jobs: Option<usize>,
    pub top_n: Option<usize>,
}

/// Load `path` (or defaults when `None`) and apply flag overrides.
pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<RunConfig, String> {
    let raw: RawConfig = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            toml::from_str(&text).map_err(|e| format!("config {}: {e}", p.display()))?
        }
        None => RawConfig::default(),
    };
    resolve(raw, overrides)
}

fn resolve(raw: RawConfig, overrides: &Overrides) -> Result<RunConfig, String> {
    let defaults = RunConfig::default();
    let default_pp = PreprocessConfig::default();

    let stopwords = match raw.preprocess.stopwords.as_deref() {
        None | Some("builtin") => StopwordList::default_english(),
        Some("none") => StopwordList::empty(),
        Some(path) => StopwordList::from_file(path)
            .map_err(|e| format!("cannot read stopword file {path}: {e}"))?,
    };

    let preprocess = PreprocessConfig {
        lowercase: raw.preprocess.lowercase.unwrap_or(default_pp.lowercase),
        strip_noise: raw.preprocess.strip_noise.unwrap_or(default_pp.strip_noise),
        stopwords,
        stem: raw.preprocess.stem.unwrap_or(default_pp.stem),
        leakage_filter: raw.preprocess.leakage_filter.unwrap_or(default_pp.leakage_filter),
        min_token_len: raw.preprocess.min_token_len.unwrap_or(default_pp.min_token_len),
    };
    if preprocess.min_token_len < 1 {
        return Err("preprocess.min_token_len must be >= 1".to_string());
    }

    let features = FeatureConfig {
        min_df: raw.features.min_df.unwrap_or(defaults.features.min_df),
        max_df_ratio: raw.features.max_df_ratio.unwrap_or(defaults.features.max_df_ratio),
    };
    if features.min_df < 1 {
        return Err("features.min_df must be >= 1".to_string());
    }
    if !(features.max_df_ratio > 0.0 && features.max_df_ratio <= 1.0) {
        return Err("features.max_df_ratio must be in (0, 1]".to_string());
    }

    let model_names = raw
        .evaluation
        .models
        .unwrap_or_else(|| vec!["naive_bayes".into(), "softmax".into(), "knn".into()]);
    let mut models = Vec::new();
    for name in &model_names {
        models.push(build_spec(name, &raw.model)?);
    }

    let config = RunConfig {
        dataset_path: overrides.dataset.clone().or(raw.dataset.path),
        dataset_format: overrides
            .dataset_format
            .or(raw.dataset.format)
            .unwrap_or(defaults.dataset_format),
        preprocess,
        features,
        top_n_keywords: overrides
            .top_n
            .or(raw.features.top_n_keywords)
            .unwrap_or(defaults.top_n_keywords),
        models,
        k: overrides.k.or(raw.evaluation.k).unwrap_or(defaults.k),
        seed: overrides.seed.or(raw.evaluation.seed).unwrap_or(defaults.seed),
        out_dir: overrides.out_dir.clone().or(raw.output.dir).unwrap_or(defaults.out_dir),
        formats: overrides
            .format
            .map(|f| vec![f])
            .or(raw.output.formats)
            .unwrap_or(defaults.formats),
        jobs: overrides.jobs,
    };
    if config.k < 2 {
        return Err("evaluation.k must be >= 2".to_string());
    }
    Ok(config)
}

/// Resolve one model name against the `[model.*]` hyperparameter sections.
pub fn build_spec(name: &str, sections: &RawModels) -> Result<ClassifierSpec, String> {
    match name {
        "naive_bayes" => Ok(ClassifierSpec::NaiveBayes {
            alpha: sections.naive_bayes.alpha.unwrap_or(1.0),
        }),
        "softmax" => Ok(ClassifierSpec::Softmax {
            learning_rate: sections.softmax.learning_rate.unwrap_or(0.5),
            l2_lambda: sections.softmax.l2_lambda.unwrap_or(1e-3),
            epochs: sections.softmax.epochs.unwrap_or(300),
            seed: sections.softmax.seed.unwrap_or(42),
        }),
        "knn" => Ok(ClassifierSpec::Knn { k: sections.knn.k.unwrap_or(5) }),
        "keyword_baseline" => Ok(ClassifierSpec::KeywordBaseline {
            rules: baseline_table(&sections.keyword_baseline)?,
        }),
        other => Err(format!(
            "unknown model {other:?} (expected naive_bayes, softmax, knn, or keyword_baseline)"
        )),
    }
}

fn baseline_table(raw: &RawBaseline) -> Result<KeywordRuleTable, String> {
    let no_match = raw.no_match.unwrap_or(NoMatchPolicy::Abstain);
    match raw.rules.as_deref() {
        None | Some("builtin") => {
            Ok(KeywordRuleTable { no_match, ..default_rule_table() })
        }
        Some(path) => load_rule_table(path, no_match).map_err(|e| e.to_string()),
    }
}

/// The baseline spec from the `[model.keyword_baseline]` section (or the
/// built-in table); used by `evaluate`, which always appends the baseline.
pub fn baseline_spec(path: Option<&Path>) -> Result<ClassifierSpec, String> {
    let raw: RawConfig = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            toml::from_str(&text).map_err(|e| format!("config {}: {e}", p.display()))?
        }
        None => RawConfig::default(),
    };
    Ok(ClassifierSpec::KeywordBaseline { rules: baseline_table(&raw.model.keyword_baseline)? })
}
