//! Labeled commit-message datasets: loading, validation, deduplication,
//! stratified fold assignment, and class priors.
//!
//! Supported on-disk formats:
//! - CSV (RFC 4180, UTF-8) with required header columns `id,message,label`;
//!   extra columns are ignored with a warning.
//! - JSONL with one `{"id": .., "message": .., "label": ..}` object per line.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::fingerprint::Fingerprint;
use crate::rng::Rng;

/// The six method-level refactoring types used as class labels.
///
/// The declared order is the canonical class order used for tie-breaking,
/// confusion-matrix axes, and report columns everywhere in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RefactoringType {
    ExtractMethod,
    InlineMethod,
    MoveMethod,
    PullUpMethod,
    PushDownMethod,
    RenameMethod,
}

pub const CLASS_COUNT: usize = 6;

impl RefactoringType {
    /// All six variants in canonical order.
    pub const ALL: [RefactoringType; CLASS_COUNT] = [
        RefactoringType::ExtractMethod,
        RefactoringType::InlineMethod,
        RefactoringType::MoveMethod,
        RefactoringType::PullUpMethod,
        RefactoringType::PushDownMethod,
        RefactoringType::RenameMethod,
    ];

    /// Canonical lowercase snake-case form, fixed for serialization.
    pub fn as_str(&self) -> &'static str {
        match self {
            RefactoringType::ExtractMethod => "extract_method",
            RefactoringType::InlineMethod => "inline_method",
            RefactoringType::MoveMethod => "move_method",
            RefactoringType::PullUpMethod => "pull_up_method",
            RefactoringType::PushDownMethod => "push_down_method",
            RefactoringType::RenameMethod => "rename_method",
        }
    }

    /// Position in [`RefactoringType::ALL`].
    pub fn index(&self) -> usize {
        match self {
            RefactoringType::ExtractMethod => 0,
            RefactoringType::InlineMethod => 1,
            RefactoringType::MoveMethod => 2,
            RefactoringType::PullUpMethod => 3,
            RefactoringType::PushDownMethod => 4,
            RefactoringType::RenameMethod => 5,
        }
    }

    pub fn from_index(i: usize) -> Option<RefactoringType> {
        RefactoringType::ALL.get(i).copied()
    }
}

impl FromStr for RefactoringType {
    type Err = ParseLabelError;

    /// Case-insensitive parse of the canonical snake-case forms.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "extract_method" => Ok(RefactoringType::ExtractMethod),
            "inline_method" => Ok(RefactoringType::InlineMethod),
            "move_method" => Ok(RefactoringType::MoveMethod),
            "pull_up_method" => Ok(RefactoringType::PullUpMethod),
            "push_down_method" => Ok(RefactoringType::PushDownMethod),
            "rename_method" => Ok(RefactoringType::RenameMethod),
            _ => Err(ParseLabelError { value: s.to_string() }),
        }
    }
}

impl fmt::Display for RefactoringType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for RefactoringType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for RefactoringType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e: ParseLabelError| D::Error::custom(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown refactoring label {value:?} (expected one of: extract_method, inline_method, move_method, pull_up_method, push_down_method, rename_method)")]
pub struct ParseLabelError {
    pub value: String,
}

/// One labeled sample: a commit identifier, its raw message, and the
/// refactoring type it performs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitRecord {
    pub id: String,
    pub message: String,
    pub label: RefactoringType,
}

/// Dataset file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    Csv,
    Jsonl,
}

impl FromStr for DataFormat {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(DataFormat::Csv),
            "jsonl" => Ok(DataFormat::Jsonl),
            other => Err(CorpusError::UnknownFormat { value: other.to_string() }),
        }
    }
}

/// An ordered, id-unique collection of commit records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    records: Vec<CommitRecord>,
    source: String,
}

impl Dataset {
    /// Build from records, enforcing the id-uniqueness and non-empty-message
    /// invariants. `source` is a file path or `"inline"`.
    pub fn new(records: Vec<CommitRecord>, source: impl Into<String>) -> Result<Self, CorpusError> {
        let mut seen = HashSet::with_capacity(records.len());
        for (i, rec) in records.iter().enumerate() {
            if rec.id.is_empty() {
                return Err(CorpusError::EmptyId { row: i + 1 });
            }
            if rec.message.trim().is_empty() {
                return Err(CorpusError::EmptyMessage { row: i + 1 });
            }
            if !seen.insert(rec.id.as_str()) {
                return Err(CorpusError::DuplicateId { id: rec.id.clone() });
            }
        }
        Ok(Dataset { records, source: source.into() })
    }

    pub fn records(&self) -> &[CommitRecord] {
        &self.records
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn labels(&self) -> Vec<RefactoringType> {
        self.records.iter().map(|r| r.label).collect()
    }

    /// Stable content fingerprint over (id, message, label) in order.
    /// Two datasets with equal records have equal fingerprints regardless
    /// of the source path they were loaded from.
    pub fn fingerprint(&self) -> u64 {
        let mut fp = Fingerprint::new();
        for rec in &self.records {
            fp.write_str(&rec.id);
            fp.write_str(&rec.message);
            fp.write_str(rec.label.as_str());
        }
        fp.finish()
    }
}

/// Key by which [`deduplicate`] identifies duplicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DedupKey {
    Id,
    Message,
}

/// Per-dataset summary statistics. Reporting only, never mutates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub records: usize,
    pub class_counts: BTreeMap<RefactoringType, usize>,
    pub duplicate_messages: usize,
    /// Message length in whitespace-split tokens.
    pub min_tokens: usize,
    pub max_tokens: usize,
    pub mean_tokens: f64,
}

/// Mapping of every record id to a fold index in `[0, k)`, stratified so
/// per-class fold sizes differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldAssignment {
    k: usize,
    seed: u64,
    assignment: BTreeMap<String, usize>,
}

impl FoldAssignment {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn fold_of(&self, id: &str) -> Option<usize> {
        self.assignment.get(id).copied()
    }

    pub fn assignment(&self) -> &BTreeMap<String, usize> {
        &self.assignment
    }

    /// Record ids of one fold, in dataset order.
    pub fn fold_ids<'a>(&self, dataset: &'a Dataset, fold: usize) -> Vec<&'a str> {
        dataset
            .records()
            .iter()
            .filter(|r| self.assignment.get(&r.id) == Some(&fold))
            .map(|r| r.id.as_str())
            .collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown dataset format {value:?} (expected csv or jsonl)")]
    UnknownFormat { value: String },
    #[error("missing required column {column:?}")]
    MissingColumn { column: String },
    #[error("row {row}: unknown label {value:?}")]
    UnknownLabel { row: usize, value: String },
    #[error("duplicate record id {id:?}")]
    DuplicateId { id: String },
    #[error("row {row}: empty id")]
    EmptyId { row: usize },
    #[error("row {row}: empty message")]
    EmptyMessage { row: usize },
    #[error("row {row}: malformed row: {detail}")]
    MalformedRow { row: usize, detail: String },
    #[error("class {label} has {count} members, fewer than k = {k}")]
    ClassTooSmall { label: RefactoringType, count: usize, k: usize },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("k must be at least 2, got {k}")]
    BadFoldCount { k: usize },
}

/// Load a dataset from `path`, preserving file order.
pub fn load_dataset(path: impl AsRef<Path>, format: DataFormat) -> Result<Dataset, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CorpusError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let records = match format {
        DataFormat::Csv => parse_csv(&text)?,
        DataFormat::Jsonl => parse_jsonl(&text)?,
    };
    Dataset::new(records, path.display().to_string())
}

fn parse_csv(text: &str) -> Result<Vec<CommitRecord>, CorpusError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| CorpusError::MalformedRow { row: 0, detail: e.to_string() })?
        .clone();
    let mut col = |name: &str| -> Result<usize, CorpusError> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CorpusError::MissingColumn { column: name.to_string() })
    };
    let id_col = col("id")?;
    let message_col = col("message")?;
    let label_col = col("label")?;
    for extra in headers.iter().filter(|h| !matches!(*h, "id" | "message" | "label")) {
        log::warn!("ignoring extra CSV column {extra:?}");
    }

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| CorpusError::MalformedRow { row: row_no, detail: e.to_string() })?;
        let field = |c: usize| -> Result<&str, CorpusError> {
            row.get(c).ok_or_else(|| CorpusError::MalformedRow {
                row: row_no,
                detail: format!("missing field {c}"),
            })
        };
        records.push(record_from_parts(
            row_no,
            field(id_col)?,
            field(message_col)?,
            field(label_col)?,
        )?);
    }
    Ok(records)
}

#[derive(Deserialize)]
struct JsonlRow {
    id: String,
    message: String,
    label: String,
}

fn parse_jsonl(text: &str) -> Result<Vec<CommitRecord>, CorpusError> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let row_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let row: JsonlRow = serde_json::from_str(line)
            .map_err(|e| CorpusError::MalformedRow { row: row_no, detail: e.to_string() })?;
        records.push(record_from_parts(row_no, &row.id, &row.message, &row.label)?);
    }
    Ok(records)
}

fn record_from_parts(
    row: usize,
    id: &str,
    message: &str,
    label: &str,
) -> Result<CommitRecord, CorpusError> {
    if id.trim().is_empty() {
        return Err(CorpusError::EmptyId { row });
    }
    if message.trim().is_empty() {
        return Err(CorpusError::EmptyMessage { row });
    }
    let label = label
        .parse()
        .map_err(|_| CorpusError::UnknownLabel { row, value: label.to_string() })?;
    Ok(CommitRecord { id: id.trim().to_string(), message: message.to_string(), label })
}

/// Write a dataset back to disk in the given format. `load_dataset` of the
/// result yields an equal dataset.
pub fn write_dataset(
    dataset: &Dataset,
    path: impl AsRef<Path>,
    format: DataFormat,
) -> Result<(), CorpusError> {
    let path = path.as_ref();
    let io_err = |e: std::io::Error| CorpusError::Io { path: path.display().to_string(), source: e };
    let mut out: Vec<u8> = Vec::new();
    match format {
        DataFormat::Csv => {
            let mut writer = csv::Writer::from_writer(&mut out);
            writer
                .write_record(["id", "message", "label"])
                .map_err(|e| CorpusError::MalformedRow { row: 0, detail: e.to_string() })?;
            for rec in dataset.records() {
                writer
                    .write_record([rec.id.as_str(), rec.message.as_str(), rec.label.as_str()])
                    .map_err(|e| CorpusError::MalformedRow { row: 0, detail: e.to_string() })?;
            }
            writer.flush().map_err(io_err)?;
            drop(writer);
        }
        DataFormat::Jsonl => {
            for rec in dataset.records() {
                let line = serde_json::json!({
                    "id": rec.id,
                    "message": rec.message,
                    "label": rec.label.as_str(),
                });
                writeln!(out, "{line}").map_err(io_err)?;
            }
        }
    }
    std::fs::write(path, out).map_err(io_err)
}

/// Compute per-class counts, duplicate-message count, and message length
/// statistics (whitespace-split tokens).
pub fn validate(dataset: &Dataset) -> ValidationSummary {
    let mut class_counts: BTreeMap<RefactoringType, usize> =
        RefactoringType::ALL.iter().map(|c| (*c, 0)).collect();
    let mut messages = HashSet::new();
    let mut duplicate_messages = 0;
    let mut min_tokens = usize::MAX;
    let mut max_tokens = 0;
    let mut total_tokens = 0usize;

    for rec in dataset.records() {
        *class_counts.get_mut(&rec.label).expect("all classes present") += 1;
        if !messages.insert(rec.message.as_str()) {
            duplicate_messages += 1;
        }
        let tokens = rec.message.split_whitespace().count();
        min_tokens = min_tokens.min(tokens);
        max_tokens = max_tokens.max(tokens);
        total_tokens += tokens;
    }

    let n = dataset.len();
    ValidationSummary {
        records: n,
        class_counts,
        duplicate_messages,
        min_tokens: if n == 0 { 0 } else { min_tokens },
        max_tokens,
        mean_tokens: if n == 0 { 0.0 } else { total_tokens as f64 / n as f64 },
    }
}

/// Remove duplicates by `key`, keeping the first occurrence and preserving
/// relative order.
pub fn deduplicate(dataset: &Dataset, key: DedupKey) -> Dataset {
    let mut seen = HashSet::new();
    let records: Vec<CommitRecord> = dataset
        .records()
        .iter()
        .filter(|rec| {
            let k = match key {
                DedupKey::Id => rec.id.as_str(),
                DedupKey::Message => rec.message.as_str(),
            };
            seen.insert(k.to_string())
        })
        .cloned()
        .collect();
    Dataset { records, source: dataset.source.clone() }
}

/// Assign every record to one of `k` folds, stratified by class: within each
/// class, fold sizes differ by at most one. Identical inputs and seed yield
/// an identical assignment on every platform (see [`crate::rng`]).
pub fn stratified_folds(
    dataset: &Dataset,
    k: usize,
    seed: u64,
) -> Result<FoldAssignment, CorpusError> {
    if k < 2 {
        return Err(CorpusError::BadFoldCount { k });
    }
    let mut by_class: BTreeMap<RefactoringType, Vec<&str>> = BTreeMap::new();
    for rec in dataset.records() {
        by_class.entry(rec.label).or_default().push(&rec.id);
    }
    for class in RefactoringType::ALL {
        let count = by_class.get(&class).map_or(0, Vec::len);
        if count > 0 && count < k {
            return Err(CorpusError::ClassTooSmall { label: class, count, k });
        }
    }

    let mut rng = Rng::new(seed);
    let mut assignment = BTreeMap::new();
    // Deal each class round-robin after a seeded shuffle. The starting fold
    // rotates with the accumulated remainder so overall fold sizes stay
    // balanced, not just per-class ones.
    let mut start = 0usize;
    for (_, mut ids) in by_class {
        rng.shuffle(&mut ids);
        for (i, id) in ids.iter().enumerate() {
            assignment.insert(id.to_string(), (start + i) % k);
        }
        start = (start + ids.len()) % k;
    }
    Ok(FoldAssignment { k, seed, assignment })
}

/// Empirical class priors: count / total, over all six classes.
pub fn class_priors(dataset: &Dataset) -> Result<BTreeMap<RefactoringType, f64>, CorpusError> {
    if dataset.is_empty() {
        return Err(CorpusError::EmptyDataset);
    }
    let mut counts: BTreeMap<RefactoringType, usize> =
        RefactoringType::ALL.iter().map(|c| (*c, 0)).collect();
    for rec in dataset.records() {
        *counts.get_mut(&rec.label).expect("all classes present") += 1;
    }
    let total = dataset.len() as f64;
    Ok(counts.into_iter().map(|(c, n)| (c, n as f64 / total)).collect())
}

/// Convenience constructor for tests and the synthetic generator.
pub fn dataset_from_rows(
    rows: &[(&str, &str, RefactoringType)],
) -> Result<Dataset, CorpusError> {
    let records = rows
        .iter()
        .map(|(id, message, label)| CommitRecord {
            id: id.to_string(),
            message: message.to_string(),
            label: *label,
        })
        .collect();
    Dataset::new(records, "inline")
}
