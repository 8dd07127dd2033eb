//! Stopword lists.
//!
//! The built-in list is pinned so results stay reproducible across releases.
//! Deliberately absent from it: "from", "up", and "down" — they carry signal
//! in refactoring messages ("pull up", "push down", "extract ... from ...").

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// The pinned built-in English list (~120 words).
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
    "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
    "between", "both", "but", "by", "can", "cannot", "could", "did", "do", "does",
    "doing", "during", "each", "few", "for", "further", "had", "has", "have",
    "having", "he", "her", "here", "hers", "herself", "him", "himself", "his",
    "how", "i", "if", "in", "into", "is", "it", "its", "itself", "just", "me",
    "more", "most", "my", "myself", "no", "nor", "not", "now", "of", "off", "on",
    "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over",
    "own", "same", "she", "should", "so", "some", "such", "than", "that", "the",
    "their", "theirs", "them", "themselves", "then", "there", "these", "they",
    "this", "those", "through", "to", "too", "under", "until", "very", "was",
    "we", "were", "what", "when", "where", "which", "while", "who", "whom",
    "why", "will", "with", "would", "you", "your", "yours",
];

/// A named set of words to drop during preprocessing. The name is part of
/// the config fingerprint together with the word set itself, so swapping
/// lists invalidates cached pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StopwordList {
    pub name: String,
    pub words: BTreeSet<String>,
}

impl StopwordList {
    /// The pinned built-in English list.
    pub fn default_english() -> Self {
        StopwordList {
            name: "builtin-en".to_string(),
            words: DEFAULT_STOPWORDS.iter().map(|w| w.to_string()).collect(),
        }
    }

    /// No stopword removal.
    pub fn empty() -> Self {
        StopwordList { name: "none".to_string(), words: BTreeSet::new() }
    }

    /// Load from a plain-text file, one word per line. Blank lines and
    /// `#`-prefixed lines are skipped; words are lowercased.
    pub fn from_file(path: impl AsRef<Path>) -> std::io::Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.to_ascii_lowercase())
            .collect();
        Ok(StopwordList { name: path.display().to_string(), words })
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_list_has_expected_shape() {
        let list = StopwordList::default_english();
        assert_eq!(list.len(), DEFAULT_STOPWORDS.len());
        assert!(list.contains("the"));
        // Kept as signal for this domain:
        assert!(!list.contains("from"));
        assert!(!list.contains("up"));
        assert!(!list.contains("down"));
        // All entries lowercase and deduplicated.
        assert!(DEFAULT_STOPWORDS.iter().all(|w| w.chars().all(|c| c.is_ascii_lowercase())));
        assert_eq!(
            DEFAULT_STOPWORDS.len(),
            DEFAULT_STOPWORDS.iter().collect::<std::collections::BTreeSet<_>>().len()
        );
    }

    #[test]
    fn from_file_skips_blanks_and_comments() {
        let file = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(file.path(), "# comment\nThe\n\n  and  \n").unwrap();
        let list = StopwordList::from_file(file.path()).unwrap();
        assert_eq!(list.len(), 2);
        assert!(list.contains("the"));
        assert!(list.contains("and"));
    }
}
