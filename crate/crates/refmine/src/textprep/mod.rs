//! Commit-message preprocessing: a fixed-order, configurable pipeline from
//! raw text to a normalized token sequence.
//!
//! The step order is fixed:
//! normalize -> tokenize -> stopword removal -> leakage filter -> stemming
//! -> length filter. Each step is independently switchable so experiments
//! can ablate them.
//!
//! Tokens coming out of [`tokenize`] are always lowercase. The `lowercase`
//! config flag additionally lowercases the *text* during [`normalize`];
//! doing so erases the case information that camelCase splitting needs, so
//! the default leaves it off and lets tokenization handle casing.

mod porter;
mod stopwords;

pub use porter::porter_stem;
pub use stopwords::{StopwordList, DEFAULT_STOPWORDS};

use std::collections::BTreeSet;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::corpus::CommitRecord;
use crate::fingerprint::Fingerprint;

/// Tokens that literally name the six class labels. The leakage filter
/// removes them to test whether prediction survives without the giveaway
/// keywords.
pub const LABEL_VOCABULARY: &[&str] =
    &["extract", "inline", "move", "pull", "push", "rename", "method", "up", "down"];

/// Pipeline configuration. See the module docs for the fixed step order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    /// Lowercase the raw text during normalization. Off by default so that
    /// camelCase identifiers can still be split during tokenization; token
    /// output is lowercase either way.
    pub lowercase: bool,
    /// Strip URLs, 7-40 character hex strings, and issue references like
    /// "#123", each replaced by a single space.
    pub strip_noise: bool,
    pub stopwords: StopwordList,
    /// Porter-stem each surviving token.
    pub stem: bool,
    /// Remove the literal label-vocabulary tokens ([`LABEL_VOCABULARY`]).
    pub leakage_filter: bool,
    /// Drop tokens shorter than this many bytes (applied last).
    pub min_token_len: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        PreprocessConfig {
            lowercase: false,
            strip_noise: true,
            stopwords: StopwordList::default_english(),
            stem: true,
            leakage_filter: false,
            min_token_len: 2,
        }
    }
}

impl PreprocessConfig {
    /// Stable fingerprint over every field, including the stopword list
    /// contents. Documents carry it so downstream stages can verify they
    /// were produced by the same pipeline.
    pub fn fingerprint(&self) -> u64 {
        let mut fp = Fingerprint::new();
        fp.write_u64(self.lowercase as u64);
        fp.write_u64(self.strip_noise as u64);
        fp.write_str(&self.stopwords.name);
        for word in &self.stopwords.words {
            fp.write_str(word);
        }
        fp.write_u64(self.stem as u64);
        fp.write_u64(self.leakage_filter as u64);
        fp.write_u64(self.min_token_len as u64);
        fp.finish()
    }
}

/// A preprocessed commit message: the surviving tokens plus the fingerprint
/// of the config that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub source_id: String,
    pub tokens: Vec<String>,
    pub config_fingerprint: u64,
}

fn noise_patterns() -> &'static [Regex; 3] {
    static PATTERNS: OnceLock<[Regex; 3]> = OnceLock::new();
    PATTERNS.get_or_init(|| {
        [
            Regex::new(r"(?i)\b[a-z][a-z0-9+.-]*://\S+").expect("static regex"),
            Regex::new(r"(?i)\b[0-9a-f]{7,40}\b").expect("static regex"),
            Regex::new(r"#\d+").expect("static regex"),
        ]
    })
}

/// Normalize raw message text. Idempotent: applying it twice equals
/// applying it once.
pub fn normalize(text: &str, config: &PreprocessConfig) -> String {
    let mut out = text.to_string();
    if config.strip_noise {
        for pattern in noise_patterns() {
            out = pattern.replace_all(&out, " ").into_owned();
        }
    }
    if config.lowercase {
        out = out.to_lowercase();
    }
    out
}

/// Split text into lowercase tokens: first on runs of non-alphanumeric
/// characters (which covers snake_case and punctuation), then at camelCase
/// boundaries when case information is present. Never yields empty tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for piece in text.split(|c: char| !c.is_alphanumeric()) {
        if piece.is_empty() {
            continue;
        }
        for word in split_case_boundaries(piece) {
            tokens.push(word.to_lowercase());
        }
    }
    tokens
}

/// Split "renameVariable" -> ["rename", "Variable"] and "HTMLParser" ->
/// ["HTML", "Parser"]: break before an uppercase that follows a non-upper,
/// and before the last uppercase of an uppercase run followed by lowercase.
fn split_case_boundaries(piece: &str) -> Vec<&str> {
    let chars: Vec<(usize, char)> = piece.char_indices().collect();
    let mut cuts = vec![0];
    for w in 1..chars.len() {
        let (idx, cur) = chars[w];
        let prev = chars[w - 1].1;
        let boundary = (cur.is_uppercase() && !prev.is_uppercase())
            || (cur.is_uppercase()
                && prev.is_uppercase()
                && chars.get(w + 1).is_some_and(|&(_, next)| next.is_lowercase()));
        if boundary {
            cuts.push(idx);
        }
    }
    cuts.push(piece.len());
    cuts.windows(2).map(|w| &piece[w[0]..w[1]]).filter(|s| !s.is_empty()).collect()
}

/// Drop every token present in `stoplist`, preserving order.
pub fn remove_stopwords(tokens: Vec<String>, stoplist: &StopwordList) -> Vec<String> {
    tokens.into_iter().filter(|t| !stoplist.contains(t)).collect()
}

/// Drop every token present in `label_vocabulary`, preserving order.
pub fn leakage_filter(tokens: Vec<String>, label_vocabulary: &BTreeSet<&str>) -> Vec<String> {
    tokens.into_iter().filter(|t| !label_vocabulary.contains(t.as_str())).collect()
}

fn label_vocabulary_set() -> &'static BTreeSet<&'static str> {
    static SET: OnceLock<BTreeSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| LABEL_VOCABULARY.iter().copied().collect())
}

/// Run the full pipeline over one record. Deterministic, equal to composing
/// the individual steps in the fixed order.
pub fn preprocess(record: &CommitRecord, config: &PreprocessConfig) -> Document {
    Document {
        source_id: record.id.clone(),
        tokens: preprocess_text(&record.message, config),
        config_fingerprint: config.fingerprint(),
    }
}

/// Pipeline body shared by [`preprocess`] and raw-message prediction.
pub fn preprocess_text(message: &str, config: &PreprocessConfig) -> Vec<String> {
    let normalized = normalize(message, config);
    let mut tokens = tokenize(&normalized);
    tokens = remove_stopwords(tokens, &config.stopwords);
    if config.leakage_filter {
        tokens = leakage_filter(tokens, label_vocabulary_set());
    }
    if config.stem {
        tokens = tokens.into_iter().map(|t| porter_stem(&t)).collect();
        // Stemming can map inflected forms back onto label-vocabulary tokens
        // ("extracted" -> "extract"), so the filter runs once more to keep
        // the no-label-token guarantee.
        if config.leakage_filter {
            tokens = leakage_filter(tokens, label_vocabulary_set());
        }
    }
    if config.min_token_len > 1 {
        tokens.retain(|t| t.len() >= config.min_token_len);
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RefactoringType;

    fn lowercase_config() -> PreprocessConfig {
        PreprocessConfig { lowercase: true, ..PreprocessConfig::default() }
    }

    #[test]
    fn normalize_lowercases_when_enabled() {
        let config = lowercase_config();
        assert_eq!(
            normalize("Extract Method from FooParser", &config),
            "extract method from fooparser"
        );
    }

    #[test]
    fn normalize_strips_urls_hex_and_issue_refs() {
        let config = PreprocessConfig::default();
        let out = normalize("fix per https://x.y/z see #42", &config);
        assert_eq!(tokenize(&out), ["fix", "per", "see"]);
        let out = normalize("revert deadbeef00 and a1b2c3d", &config);
        assert_eq!(tokenize(&out), ["revert", "and"]);
        // Six hex chars is below the 7-char floor.
        let out = normalize("abc123 stays", &config);
        assert_eq!(tokenize(&out), ["abc123", "stays"]);
    }

    #[test]
    fn normalize_is_idempotent() {
        for config in [PreprocessConfig::default(), lowercase_config()] {
            for text in [
                "Extract Method from FooParser",
                "fix per https://x.y/z see #42",
                "plain already normalized text",
                "mixed CASE with a1b2c3d4e5 sha",
            ] {
                let once = normalize(text, &config);
                assert_eq!(normalize(&once, &config), once, "input {text:?}");
            }
        }
    }

    #[test]
    fn tokenize_splits_punctuation_and_case() {
        assert_eq!(tokenize("pull-up method"), ["pull", "up", "method"]);
        assert_eq!(
            tokenize("renameVariable in util_helper"),
            ["rename", "variable", "in", "util", "helper"]
        );
        assert_eq!(tokenize(""), Vec::<String>::new());
        assert_eq!(tokenize("HTMLParser v2"), ["html", "parser", "v2"]);
    }

    #[test]
    fn remove_stopwords_filters_in_order() {
        let list = StopwordList::default_english();
        let tokens = vec!["move".to_string(), "the".to_string(), "method".to_string()];
        assert_eq!(remove_stopwords(tokens, &list), ["move", "method"]);

        let empty = StopwordList::empty();
        let tokens = vec!["move".to_string(), "the".to_string()];
        assert_eq!(remove_stopwords(tokens.clone(), &empty), tokens);

        let all_stop = vec!["the".to_string(), "and".to_string()];
        assert!(remove_stopwords(all_stop, &list).is_empty());
    }

    #[test]
    fn leakage_filter_removes_label_tokens() {
        let vocab = super::label_vocabulary_set();
        let tokens: Vec<String> =
            ["rename", "method", "for", "clarity"].iter().map(|s| s.to_string()).collect();
        assert_eq!(leakage_filter(tokens, vocab), ["for", "clarity"]);

        let tokens: Vec<String> = ["extract", "extract"].iter().map(|s| s.to_string()).collect();
        assert!(leakage_filter(tokens, vocab).is_empty());
    }

    fn record(message: &str) -> CommitRecord {
        CommitRecord {
            id: "c1".to_string(),
            message: message.to_string(),
            label: RefactoringType::ExtractMethod,
        }
    }

    #[test]
    fn preprocess_composes_pipeline_with_defaults() {
        let config = PreprocessConfig::default();
        let doc = preprocess(&record("Extracted helper method from Parser.parse()"), &config);
        assert_eq!(doc.tokens, ["extract", "helper", "method", "from", "parser", "pars"]);
        assert_eq!(doc.source_id, "c1");
        assert_eq!(doc.config_fingerprint, config.fingerprint());
    }

    #[test]
    fn preprocess_equals_manual_step_composition() {
        let config = PreprocessConfig::default();
        let message = "Pulled up parseHeader into BaseParser, see #12";
        let normalized = normalize(message, &config);
        let mut manual = tokenize(&normalized);
        manual = remove_stopwords(manual, &config.stopwords);
        manual = manual.into_iter().map(|t| porter_stem(&t)).collect();
        manual.retain(|t| t.len() >= config.min_token_len);
        assert_eq!(preprocess_text(message, &config), manual);
    }

    #[test]
    fn preprocess_all_stopwords_yields_empty() {
        let config = PreprocessConfig::default();
        let doc = preprocess(&record("the and of to"), &config);
        assert!(doc.tokens.is_empty());
    }

    #[test]
    fn preprocess_is_deterministic() {
        let config = PreprocessConfig::default();
        let rec = record("Move método into ÜtilClass #9 deadbeef1");
        assert_eq!(preprocess(&rec, &config), preprocess(&rec, &config));
    }

    #[test]
    fn preprocess_splits_camel_case_identifiers_by_default() {
        let config = PreprocessConfig::default();
        let doc = preprocess(&record("renameVariable in utilHelper"), &config);
        assert_eq!(doc.tokens, ["renam", "variabl", "util", "helper"]);
    }

    #[test]
    fn leakage_filter_catches_stemmed_label_tokens() {
        let config = PreprocessConfig { leakage_filter: true, ..PreprocessConfig::default() };
        // "extracted" stems to "extract", which is in the label vocabulary.
        let doc = preprocess(&record("extracted the parse logic"), &config);
        assert!(!doc.tokens.contains(&"extract".to_string()), "tokens: {:?}", doc.tokens);
        assert!(doc.tokens.contains(&"logic".to_string()));
    }

    #[test]
    fn min_token_len_drops_short_tokens_after_stemming() {
        let config = PreprocessConfig::default();
        let doc = preprocess(&record("a an x ab abc"), &config);
        // "a"/"an" are stopwords, "x" is below min length.
        assert_eq!(doc.tokens, ["ab", "abc"]);
    }

    #[test]
    fn fingerprint_changes_with_config() {
        let base = PreprocessConfig::default();
        let stemless = PreprocessConfig { stem: false, ..base.clone() };
        assert_ne!(base.fingerprint(), stemless.fingerprint());
        let other_stoplist = PreprocessConfig { stopwords: StopwordList::empty(), ..base.clone() };
        assert_ne!(base.fingerprint(), other_stoplist.fingerprint());
        assert_eq!(base.fingerprint(), PreprocessConfig::default().fingerprint());
    }

    #[test]
    fn stemming_never_lengthens_pipeline_tokens() {
        let config = PreprocessConfig { stem: false, ..PreprocessConfig::default() };
        let raw = preprocess_text("Refactoring utilities for readability improvements", &config);
        for token in raw {
            assert!(porter_stem(&token).len() <= token.len());
        }
    }
}
