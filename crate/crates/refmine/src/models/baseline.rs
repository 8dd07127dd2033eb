//! Keyword-matching baseline: an ordered rule table scanned first-match-wins.
//!
//! A rule matches when every one of its pattern tokens appears in the
//! message tokens, order-free. Multi-token rules are listed before
//! single-token ones so "pull up" beats a lone "pull". On no match the
//! table either abstains (strict mode, scored as wrong) or falls back to a
//! uniform distribution.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::RefactoringType;
use crate::features::{FeatureRow, Vocabulary};
use crate::textprep::{porter_stem, PreprocessConfig};

use super::{argmax_class, uniform_distribution, ModelError, Predicted, Prediction};

/// One pattern -> class rule. Patterns are lowercase tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordRule {
    pub patterns: Vec<String>,
    pub label: RefactoringType,
}

/// What to output when no rule matches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoMatchPolicy {
    /// Strict mode: abstain; evaluation scores it as an error.
    Abstain,
    /// Emit a uniform distribution (argmax falls to the first class).
    Uniform,
}

/// Ordered rules plus the no-match policy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordRuleTable {
    pub rules: Vec<KeywordRule>,
    pub no_match: NoMatchPolicy,
}

impl KeywordRuleTable {
    pub fn validate(&self) -> Result<(), String> {
        if self.rules.is_empty() {
            return Err("rule table is empty".to_string());
        }
        for (i, rule) in self.rules.iter().enumerate() {
            if rule.patterns.is_empty() {
                return Err(format!("rule {i} has no patterns"));
            }
            for p in &rule.patterns {
                if p.is_empty() || p.chars().any(|c| c.is_uppercase() || c.is_whitespace()) {
                    return Err(format!(
                        "rule {i}: pattern {p:?} must be a single lowercase token"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The default table, derived from the class names themselves: two-token
/// rules first, then one keyword per remaining class.
pub fn default_rule_table() -> KeywordRuleTable {
    let rule = |patterns: &[&str], label| KeywordRule {
        patterns: patterns.iter().map(|p| p.to_string()).collect(),
        label,
    };
    KeywordRuleTable {
        rules: vec![
            rule(&["pull", "up"], RefactoringType::PullUpMethod),
            rule(&["push", "down"], RefactoringType::PushDownMethod),
            rule(&["extract"], RefactoringType::ExtractMethod),
            rule(&["inline"], RefactoringType::InlineMethod),
            rule(&["move"], RefactoringType::MoveMethod),
            rule(&["rename"], RefactoringType::RenameMethod),
        ],
        no_match: NoMatchPolicy::Abstain,
    }
}

/// Load rules from a JSON file: a list of `{"patterns": [..], "label": ..}`
/// in priority order.
pub fn load_rule_table(
    path: impl AsRef<Path>,
    no_match: NoMatchPolicy,
) -> Result<KeywordRuleTable, ModelError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| ModelError::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let rules: Vec<KeywordRule> = serde_json::from_str(&text).map_err(|e| {
        ModelError::CorruptModel { detail: format!("rule table {}: {e}", path.display()) }
    })?;
    let table = KeywordRuleTable { rules, no_match };
    table.validate().map_err(|detail| ModelError::InvalidHyperparameter {
        spec: "keyword_baseline".to_string(),
        detail,
    })?;
    Ok(table)
}

/// Rule table after fit-time compilation: pattern tokens are run through
/// the model's stemmer setting so they match preprocessed message tokens
/// ("rename" -> "renam" when stemming is on).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompiledRules {
    pub table: KeywordRuleTable,
}

pub(super) fn compile(table: &KeywordRuleTable, preprocess: &PreprocessConfig) -> CompiledRules {
    let mut compiled = table.clone();
    if preprocess.stem {
        for rule in &mut compiled.rules {
            for pattern in &mut rule.patterns {
                *pattern = porter_stem(pattern);
            }
        }
    }
    CompiledRules { table: compiled }
}

fn first_match(rules: &KeywordRuleTable, present: &BTreeSet<&str>) -> Option<RefactoringType> {
    rules
        .rules
        .iter()
        .find(|rule| rule.patterns.iter().all(|p| present.contains(p.as_str())))
        .map(|rule| rule.label)
}

fn prediction_for(matched: Option<RefactoringType>, no_match: NoMatchPolicy) -> Prediction {
    match matched {
        Some(class) => {
            let mut distribution = [0.0; crate::corpus::CLASS_COUNT];
            distribution[class.index()] = 1.0;
            Prediction { label: Predicted::Class(class), distribution }
        }
        None => {
            let distribution = uniform_distribution();
            let label = match no_match {
                NoMatchPolicy::Abstain => Predicted::Abstain,
                NoMatchPolicy::Uniform => Predicted::Class(argmax_class(&distribution)),
            };
            Prediction { label, distribution }
        }
    }
}

/// Classify a token sequence directly against an (uncompiled) rule table.
/// Pure: same tokens and table always give the same prediction.
pub fn baseline_predict(tokens: &[String], table: &KeywordRuleTable) -> Prediction {
    let present: BTreeSet<&str> = tokens.iter().map(String::as_str).collect();
    prediction_for(first_match(table, &present), table.no_match)
}

/// Row-based prediction used behind the uniform model contract: the present
/// token set is reconstructed from the row's nonzero vocabulary terms.
/// Pattern tokens pruned from the vocabulary can therefore never match.
pub(super) fn predict(rules: &CompiledRules, row: &FeatureRow, vocab: &Vocabulary) -> Prediction {
    let present: BTreeSet<&str> =
        row.entries.iter().filter(|(_, w)| *w > 0.0).map(|&(col, _)| vocab.terms()[col].as_str()).collect();
    prediction_for(first_match(&rules.table, &present), rules.table.no_match)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RefactoringType::*;

    fn tokens(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn single_keyword_rule_matches() {
        let table = default_rule_table();
        let p = baseline_predict(&tokens(&["extract", "helper", "method"]), &table);
        assert_eq!(p.label, Predicted::Class(ExtractMethod));
        assert_eq!(p.distribution[ExtractMethod.index()], 1.0);
    }

    #[test]
    fn two_token_rules_precede_singles() {
        let table = default_rule_table();
        let p = baseline_predict(&tokens(&["pull", "up", "method"]), &table);
        assert_eq!(p.label, Predicted::Class(PullUpMethod));
        // Order-free matching.
        let p = baseline_predict(&tokens(&["method", "up", "something", "pull"]), &table);
        assert_eq!(p.label, Predicted::Class(PullUpMethod));
    }

    #[test]
    fn no_match_abstains_in_strict_mode() {
        let table = default_rule_table();
        let p = baseline_predict(&tokens(&["improve", "readability"]), &table);
        assert_eq!(p.label, Predicted::Abstain);
        let sum: f64 = p.distribution.iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn no_match_uniform_mode_picks_first_class() {
        let mut table = default_rule_table();
        table.no_match = NoMatchPolicy::Uniform;
        let p = baseline_predict(&tokens(&["improve", "readability"]), &table);
        assert_eq!(p.label, Predicted::Class(ExtractMethod));
        assert!((p.distribution[0] - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn baseline_predict_is_pure() {
        let table = default_rule_table();
        let t = tokens(&["move", "parser"]);
        assert_eq!(baseline_predict(&t, &table), baseline_predict(&t, &table));
    }

    #[test]
    fn compile_stems_patterns_when_config_stems() {
        let stemming = PreprocessConfig::default();
        let compiled = compile(&default_rule_table(), &stemming);
        let rename_rule =
            compiled.table.rules.iter().find(|r| r.label == RenameMethod).unwrap();
        assert_eq!(rename_rule.patterns, ["renam"]);
        let inline_rule =
            compiled.table.rules.iter().find(|r| r.label == InlineMethod).unwrap();
        assert_eq!(inline_rule.patterns, ["inlin"]);

        let plain = PreprocessConfig { stem: false, ..PreprocessConfig::default() };
        let compiled = compile(&default_rule_table(), &plain);
        let rename_rule =
            compiled.table.rules.iter().find(|r| r.label == RenameMethod).unwrap();
        assert_eq!(rename_rule.patterns, ["rename"]);
    }

    #[test]
    fn validate_rejects_bad_tables() {
        let empty = KeywordRuleTable { rules: vec![], no_match: NoMatchPolicy::Abstain };
        assert!(empty.validate().is_err());

        let uppercase = KeywordRuleTable {
            rules: vec![KeywordRule { patterns: vec!["Extract".into()], label: ExtractMethod }],
            no_match: NoMatchPolicy::Abstain,
        };
        assert!(uppercase.validate().is_err());
        assert!(default_rule_table().validate().is_ok());
    }

    #[test]
    fn rule_file_round_trip() {
        let table = default_rule_table();
        let file = tempfile::NamedTempFile::new().unwrap();
        std::fs::write(file.path(), serde_json::to_string_pretty(&table.rules).unwrap()).unwrap();
        let loaded = load_rule_table(file.path(), NoMatchPolicy::Abstain).unwrap();
        assert_eq!(loaded, table);
    }
}
