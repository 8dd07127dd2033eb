//! Sparse bag-of-words features: vocabulary construction, count and TF-IDF
//! matrices, and per-class discriminative keyword ranking.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::RefactoringType;
use crate::fingerprint::Fingerprint;
use crate::textprep::Document;

/// Document-frequency thresholds for vocabulary pruning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    /// Keep terms appearing in at least this many documents.
    pub min_df: usize,
    /// Drop terms appearing in more than this fraction of documents.
    pub max_df_ratio: f64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        // min_df 2 drops hapax noise; 0.9 drops boilerplate.
        FeatureConfig { min_df: 2, max_df_ratio: 0.9 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("no term survives min_df = {min_df}, max_df_ratio = {max_df_ratio} over {n_docs} documents")]
    EmptyVocabulary { min_df: usize, max_df_ratio: f64, n_docs: usize },
}

/// An ordered term dictionary with document frequencies.
///
/// Terms are stored lexicographically so column ids are stable across runs
/// over the same corpus and thresholds. The vocabulary remembers which
/// document ids it was built from (in memory only, never serialized) so the
/// evaluation layer can prove no test-fold document leaked into it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_freq: Vec<usize>,
    n_docs: usize,
    config_fingerprint: u64,
    #[serde(skip)]
    source_ids: BTreeSet<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn column(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn doc_freq(&self, col: usize) -> usize {
        self.doc_freq[col]
    }

    /// Fingerprint of the preprocessing config the source documents carried.
    pub fn config_fingerprint(&self) -> u64 {
        self.config_fingerprint
    }

    /// Ids of the documents this vocabulary was built from. Empty after
    /// deserialization; only populated by [`build_vocabulary`].
    pub fn source_ids(&self) -> &BTreeSet<String> {
        &self.source_ids
    }

    /// Smoothed inverse document frequency: ln((1 + N) / (1 + df)) + 1.
    pub fn idf(&self, col: usize) -> f64 {
        ((1.0 + self.n_docs as f64) / (1.0 + self.doc_freq[col] as f64)).ln() + 1.0
    }

    pub fn idf_values(&self) -> Vec<f64> {
        (0..self.len()).map(|c| self.idf(c)).collect()
    }

    /// Content fingerprint over terms, document frequencies, corpus size,
    /// and the preprocessing fingerprint. Feature rows carry it so models
    /// can reject rows built against a different vocabulary.
    pub fn fingerprint(&self) -> u64 {
        let mut fp = Fingerprint::new();
        fp.write_u64(self.n_docs as u64);
        fp.write_u64(self.config_fingerprint);
        for (term, df) in self.terms.iter().zip(&self.doc_freq) {
            fp.write_str(term);
            fp.write_u64(*df as u64);
        }
        fp.finish()
    }

    /// Rebuild the term -> column index (after deserialization).
    pub fn rebuild_index(&mut self) {
        self.index = self.terms.iter().cloned().zip(0..).collect();
    }

    /// Test-only constructor used to simulate a poisoned vocabulary.
    pub fn with_source_ids(mut self, ids: impl IntoIterator<Item = String>) -> Self {
        self.source_ids = ids.into_iter().collect();
        self
    }
}

/// Matrix weighting scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    Counts,
    Tfidf,
}

/// One sparse row: strictly increasing column ids, no explicit zeros.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub entries: Vec<(usize, f64)>,
    pub vocab_fingerprint: u64,
}

impl FeatureRow {
    pub fn l2_norm(&self) -> f64 {
        self.entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Dot product of two rows sharing a vocabulary.
    pub fn dot(&self, other: &FeatureRow) -> f64 {
        let (mut i, mut j) = (0, 0);
        let mut sum = 0.0;
        while i < self.entries.len() && j < other.entries.len() {
            let (ca, wa) = self.entries[i];
            let (cb, wb) = other.entries[j];
            match ca.cmp(&cb) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += wa * wb;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }
}

/// Sparse document-by-term matrix with aligned row ids.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub weighting: Weighting,
    pub n_cols: usize,
    pub rows: Vec<FeatureRow>,
    pub row_ids: Vec<String>,
    pub vocab_fingerprint: u64,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Sum of all entries; for a count matrix this equals the number of
    /// in-vocabulary token occurrences.
    pub fn total_mass(&self) -> f64 {
        self.rows.iter().flat_map(|r| r.entries.iter().map(|(_, w)| w)).sum()
    }
}

/// Build a vocabulary from documents that all share one preprocessing
/// config. Keeps exactly the terms with `min_df <= df` and
/// `df / n_docs <= max_df_ratio`, ordered lexicographically.
pub fn build_vocabulary(
    documents: &[Document],
    config: &FeatureConfig,
) -> Result<Vocabulary, FeatureError> {
    let config_fingerprint = documents.first().map_or(0, |d| d.config_fingerprint);
    assert!(
        documents.iter().all(|d| d.config_fingerprint == config_fingerprint),
        "documents from mixed preprocessing configs"
    );

    let n_docs = documents.len();
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for doc in documents {
        let distinct: BTreeSet<&str> = doc.tokens.iter().map(String::as_str).collect();
        for term in distinct {
            *df.entry(term).or_insert(0) += 1;
        }
    }

    let max_df = config.max_df_ratio * n_docs as f64;
    let kept: Vec<(String, usize)> = df
        .into_iter()
        .filter(|&(_, d)| d >= config.min_df && d as f64 <= max_df)
        .map(|(t, d)| (t.to_string(), d))
        .collect();

    if kept.is_empty() {
        return Err(FeatureError::EmptyVocabulary {
            min_df: config.min_df,
            max_df_ratio: config.max_df_ratio,
            n_docs,
        });
    }

    let (terms, doc_freq): (Vec<String>, Vec<usize>) = kept.into_iter().unzip();
    let mut vocab = Vocabulary {
        terms,
        doc_freq,
        n_docs,
        config_fingerprint,
        source_ids: documents.iter().map(|d| d.source_id.clone()).collect(),
        index: HashMap::new(),
    };
    vocab.rebuild_index();
    Ok(vocab)
}

fn count_row(document: &Document, vocab: &Vocabulary) -> FeatureRow {
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for token in &document.tokens {
        if let Some(col) = vocab.column(token) {
            *counts.entry(col).or_insert(0.0) += 1.0;
        }
    }
    FeatureRow { entries: counts.into_iter().collect(), vocab_fingerprint: vocab.fingerprint() }
}

fn tfidf_row(counts: &FeatureRow, vocab: &Vocabulary) -> FeatureRow {
    let mut entries: Vec<(usize, f64)> =
        counts.entries.iter().map(|&(col, tf)| (col, tf * vocab.idf(col))).collect();
    let norm = entries.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (_, w) in &mut entries {
            *w /= norm;
        }
    }
    FeatureRow { entries, vocab_fingerprint: counts.vocab_fingerprint }
}

/// Term-occurrence counts per document; out-of-vocabulary tokens ignored.
pub fn count_vectorize(documents: &[Document], vocab: &Vocabulary) -> FeatureMatrix {
    assert!(
        documents.iter().all(|d| d.config_fingerprint == vocab.config_fingerprint()),
        "documents preprocessed with a different config than the vocabulary"
    );
    FeatureMatrix {
        weighting: Weighting::Counts,
        n_cols: vocab.len(),
        rows: documents.iter().map(|d| count_row(d, vocab)).collect(),
        row_ids: documents.iter().map(|d| d.source_id.clone()).collect(),
        vocab_fingerprint: vocab.fingerprint(),
    }
}

/// TF-IDF weights from a count matrix: tf * (ln((1+N)/(1+df)) + 1), each
/// row then L2-normalized. Zero rows stay zero.
pub fn tfidf_transform(matrix: &FeatureMatrix, vocab: &Vocabulary) -> FeatureMatrix {
    assert_eq!(matrix.weighting, Weighting::Counts, "tfidf_transform expects a count matrix");
    assert_eq!(matrix.vocab_fingerprint, vocab.fingerprint(), "matrix built on another vocabulary");
    FeatureMatrix {
        weighting: Weighting::Tfidf,
        n_cols: matrix.n_cols,
        rows: matrix.rows.iter().map(|r| tfidf_row(r, vocab)).collect(),
        row_ids: matrix.row_ids.clone(),
        vocab_fingerprint: matrix.vocab_fingerprint,
    }
}

/// Vectorize a single document against a fixed (training) vocabulary.
/// With `Weighting::Tfidf` the training IDF is reused, never recomputed,
/// and the result equals the corresponding row of the matrix route.
pub fn vectorize_one(document: &Document, vocab: &Vocabulary, weighting: Weighting) -> FeatureRow {
    assert_eq!(
        document.config_fingerprint,
        vocab.config_fingerprint(),
        "document preprocessed with a different config than the vocabulary"
    );
    let counts = count_row(document, vocab);
    match weighting {
        Weighting::Counts => counts,
        Weighting::Tfidf => tfidf_row(&counts, vocab),
    }
}

/// A scored keyword for one class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredTerm {
    pub term: String,
    pub score: f64,
}

/// Per-class keyword rankings, descending by score, ties broken
/// lexicographically by term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KeywordRanking {
    pub per_class: BTreeMap<RefactoringType, Vec<ScoredTerm>>,
}

impl KeywordRanking {
    /// CSV export: `class,rank,term,score` with 1-based ranks.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,rank,term,score\n");
        for (class, terms) in &self.per_class {
            for (i, st) in terms.iter().enumerate() {
                out.push_str(&format!("{},{},{},{:.6}\n", class, i + 1, st.term, st.score));
            }
        }
        out
    }
}

/// One-vs-rest chi-square association between term presence and a class,
/// over the 2x2 contingency table. Zero cells get +0.5 before the statistic
/// is computed so degenerate margins cannot blow up the division. Returns
/// the `top_n` terms per class, descending score, ties lexicographic.
pub fn chi2_keyword_ranking(
    matrix: &FeatureMatrix,
    vocab: &Vocabulary,
    labels: &[RefactoringType],
    top_n: usize,
) -> KeywordRanking {
    assert_eq!(matrix.n_rows(), labels.len(), "labels must align with matrix rows");
    assert_eq!(matrix.vocab_fingerprint, vocab.fingerprint(), "matrix built on another vocabulary");
    let n = matrix.n_rows();

    // presence[col][class] = number of class docs containing the term
    let mut presence = vec![[0usize; crate::corpus::CLASS_COUNT]; matrix.n_cols];
    let mut class_totals = [0usize; crate::corpus::CLASS_COUNT];
    for (row, label) in matrix.rows.iter().zip(labels) {
        class_totals[label.index()] += 1;
        for &(col, w) in &row.entries {
            if w > 0.0 {
                presence[col][label.index()] += 1;
            }
        }
    }
    let term_totals: Vec<usize> =
        presence.iter().map(|per_class| per_class.iter().sum()).collect();

    let mut per_class = BTreeMap::new();
    for class in RefactoringType::ALL {
        let ci = class.index();
        if class_totals[ci] == 0 {
            per_class.insert(class, Vec::new());
            continue;
        }
        let mut scored: Vec<ScoredTerm> = (0..matrix.n_cols)
            .map(|col| {
                let in_class = presence[col][ci];
                let score = chi2_presence(
                    in_class,
                    class_totals[ci] - in_class,
                    term_totals[col] - in_class,
                    n - class_totals[ci] - (term_totals[col] - in_class),
                );
                ScoredTerm { term: vocab.terms()[col].clone(), score }
            })
            .collect();
        scored.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.term.cmp(&b.term)));
        scored.truncate(top_n);
        per_class.insert(class, scored);
    }
    KeywordRanking { per_class }
}

/// Chi-square over the 2x2 presence table (a: class & present, b: class &
/// absent, c: rest & present, d: rest & absent), +0.5 on zero cells.
fn chi2_presence(a: usize, b: usize, c: usize, d: usize) -> f64 {
    let smooth = |x: usize| if x == 0 { 0.5 } else { x as f64 };
    let (a, b, c, d) = (smooth(a), smooth(b), smooth(c), smooth(d));
    let n = a + b + c + d;
    let det = a * d - b * c;
    n * det * det / ((a + b) * (c + d) * (a + c) * (b + d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::RefactoringType::*;

    fn doc(id: &str, tokens: &[&str]) -> Document {
        Document {
            source_id: id.to_string(),
            tokens: tokens.iter().map(|t| t.to_string()).collect(),
            config_fingerprint: 7,
        }
    }

    #[test]
    fn build_vocabulary_applies_min_df() {
        let docs = [doc("1", &["a", "b"]), doc("2", &["b", "c"])];
        let vocab =
            build_vocabulary(&docs, &FeatureConfig { min_df: 2, max_df_ratio: 1.0 }).unwrap();
        assert_eq!(vocab.terms(), ["b"]);
        assert_eq!(vocab.doc_freq(0), 2);
    }

    #[test]
    fn build_vocabulary_identity_thresholds_keep_everything() {
        let docs = [doc("1", &["b", "a", "b"]), doc("2", &["c"])];
        let vocab =
            build_vocabulary(&docs, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        assert_eq!(vocab.terms(), ["a", "b", "c"]);
    }

    #[test]
    fn build_vocabulary_max_df_prunes_boilerplate() {
        let docs = [doc("1", &["a"]), doc("2", &["a"]), doc("3", &["a"])];
        let err =
            build_vocabulary(&docs, &FeatureConfig { min_df: 1, max_df_ratio: 0.5 }).unwrap_err();
        assert!(matches!(err, FeatureError::EmptyVocabulary { .. }));
    }

    #[test]
    fn vocabulary_records_source_ids() {
        let docs = [doc("x", &["a", "b"]), doc("y", &["a"])];
        let vocab =
            build_vocabulary(&docs, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        assert!(vocab.source_ids().contains("x"));
        assert!(vocab.source_ids().contains("y"));
        assert_eq!(vocab.config_fingerprint(), 7);
    }

    #[test]
    fn count_vectorize_counts_occurrences() {
        let corpus = [doc("1", &["b", "c"]), doc("2", &["b"])];
        let vocab =
            build_vocabulary(&corpus, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        let row = count_row(&doc("q", &["b", "b", "c"]), &vocab);
        let b = vocab.column("b").unwrap();
        let c = vocab.column("c").unwrap();
        assert_eq!(row.entries, vec![(b, 2.0), (c, 1.0)]);

        assert!(count_row(&doc("q", &["zz", "yy"]), &vocab).is_zero());
        assert!(count_row(&doc("q", &[]), &vocab).is_zero());
    }

    #[test]
    fn count_matrix_mass_equals_in_vocab_occurrences() {
        let corpus = [doc("1", &["a", "b", "b"]), doc("2", &["b", "zz"])];
        let vocab =
            build_vocabulary(&corpus, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        let matrix = count_vectorize(&corpus, &vocab);
        // "zz" is in the vocabulary too (min_df 1), so mass counts it.
        assert_eq!(matrix.total_mass(), 5.0);
    }

    #[test]
    fn tfidf_matches_hand_derived_values() {
        // corpus {[a b], [b]}: idf(a) = ln(3/2)+1, idf(b) = ln(3/3)+1 = 1;
        // row 1 pre-norm (1.405465, 1.0), post-norm (0.8148, 0.5797).
        let corpus = [doc("1", &["a", "b"]), doc("2", &["b"])];
        let vocab =
            build_vocabulary(&corpus, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        let counts = count_vectorize(&corpus, &vocab);
        let tfidf = tfidf_transform(&counts, &vocab);

        let a = vocab.column("a").unwrap();
        let b = vocab.column("b").unwrap();
        assert!((vocab.idf(a) - 1.405465).abs() < 1e-6);
        assert!((vocab.idf(b) - 1.0).abs() < 1e-12);

        let row1: BTreeMap<usize, f64> = tfidf.rows[0].entries.iter().copied().collect();
        assert!((row1[&a] - 0.8148).abs() < 5e-5, "got {}", row1[&a]);
        assert!((row1[&b] - 0.5797).abs() < 5e-5, "got {}", row1[&b]);

        // Term present in every doc: idf = ln(1) + 1 = 1.
        assert!((vocab.idf(b) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tfidf_rows_have_unit_norm_or_are_zero() {
        let corpus = [doc("1", &["a", "b", "b"]), doc("2", &["c"]), doc("3", &["zz"])];
        let vocab = build_vocabulary(&corpus[..2], &FeatureConfig { min_df: 1, max_df_ratio: 1.0 })
            .unwrap();
        let counts = count_vectorize(&corpus, &vocab);
        let tfidf = tfidf_transform(&counts, &vocab);
        for row in &tfidf.rows {
            if row.is_zero() {
                continue;
            }
            assert!((row.l2_norm() - 1.0).abs() < 1e-9);
        }
        assert!(tfidf.rows[2].is_zero(), "all-OOV row stays zero");
    }

    #[test]
    fn vectorize_one_equals_matrix_route() {
        let corpus = [doc("1", &["a", "b"]), doc("2", &["b"]), doc("3", &["a", "c", "c"])];
        let vocab =
            build_vocabulary(&corpus, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        let counts = count_vectorize(&corpus, &vocab);
        let tfidf = tfidf_transform(&counts, &vocab);
        for (i, document) in corpus.iter().enumerate() {
            let one = vectorize_one(document, &vocab, Weighting::Tfidf);
            assert_eq!(one, tfidf.rows[i], "row {i}");
        }
        assert!(vectorize_one(&doc("q", &["zz"]), &vocab, Weighting::Tfidf).is_zero());
        assert!(vectorize_one(&doc("q", &[]), &vocab, Weighting::Counts).is_zero());
    }

    /// Brute-force oracle: recount the 2x2 table from raw token sets and
    /// evaluate the chi-square formula directly.
    fn chi2_oracle(
        docs: &[(Vec<&str>, RefactoringType)],
        term: &str,
        class: RefactoringType,
    ) -> f64 {
        let mut a = 0.0;
        let mut b = 0.0;
        let mut c = 0.0;
        let mut d = 0.0;
        for (tokens, label) in docs {
            let present = tokens.contains(&term);
            match (*label == class, present) {
                (true, true) => a += 1.0,
                (true, false) => b += 1.0,
                (false, true) => c += 1.0,
                (false, false) => d += 1.0,
            }
        }
        let smooth = |x: f64| if x == 0.0 { 0.5 } else { x };
        let (a, b, c, d) = (smooth(a), smooth(b), smooth(c), smooth(d));
        let n = a + b + c + d;
        n * (a * d - b * c).powi(2) / ((a + b) * (c + d) * (a + c) * (b + d))
    }

    #[test]
    fn chi2_planted_keywords_rank_first() {
        let raw: Vec<(Vec<&str>, RefactoringType)> = vec![
            (vec!["alpha", "noise1"], ExtractMethod),
            (vec!["alpha", "noise2"], ExtractMethod),
            (vec!["beta", "noise1"], MoveMethod),
            (vec!["beta", "noise3"], MoveMethod),
        ];
        let docs: Vec<Document> =
            raw.iter().enumerate().map(|(i, (t, _))| doc(&i.to_string(), t)).collect();
        let labels: Vec<RefactoringType> = raw.iter().map(|(_, l)| *l).collect();
        let vocab =
            build_vocabulary(&docs, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        let matrix = count_vectorize(&docs, &vocab);
        let ranking = chi2_keyword_ranking(&matrix, &vocab, &labels, 3);

        assert_eq!(ranking.per_class[&ExtractMethod][0].term, "alpha");
        assert_eq!(ranking.per_class[&MoveMethod][0].term, "beta");

        // Scores equal the brute-force oracle.
        for class in [ExtractMethod, MoveMethod] {
            for st in &ranking.per_class[&class] {
                let expected = chi2_oracle(&raw, &st.term, class);
                assert!((st.score - expected).abs() < 1e-12, "{class} {term}", term = st.term);
            }
        }
    }

    #[test]
    fn chi2_perfect_association_is_maximal() {
        let raw: Vec<(Vec<&str>, RefactoringType)> = vec![
            (vec!["key", "shared"], ExtractMethod),
            (vec!["key", "shared"], ExtractMethod),
            (vec!["shared", "other"], MoveMethod),
            (vec!["shared"], MoveMethod),
        ];
        let docs: Vec<Document> =
            raw.iter().enumerate().map(|(i, (t, _))| doc(&i.to_string(), t)).collect();
        let labels: Vec<RefactoringType> = raw.iter().map(|(_, l)| *l).collect();
        let vocab =
            build_vocabulary(&docs, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        let matrix = count_vectorize(&docs, &vocab);
        let ranking = chi2_keyword_ranking(&matrix, &vocab, &labels, 10);
        let extract = &ranking.per_class[&ExtractMethod];
        assert_eq!(extract[0].term, "key");
        assert!(extract.iter().skip(1).all(|st| st.score <= extract[0].score));
    }

    #[test]
    fn chi2_independent_term_scores_zero() {
        // "shared" appears in exactly half of each class.
        let raw: Vec<(Vec<&str>, RefactoringType)> = vec![
            (vec!["shared", "x1"], ExtractMethod),
            (vec!["x2"], ExtractMethod),
            (vec!["shared", "y1"], MoveMethod),
            (vec!["y2"], MoveMethod),
        ];
        let docs: Vec<Document> =
            raw.iter().enumerate().map(|(i, (t, _))| doc(&i.to_string(), t)).collect();
        let labels: Vec<RefactoringType> = raw.iter().map(|(_, l)| *l).collect();
        let vocab =
            build_vocabulary(&docs, &FeatureConfig { min_df: 1, max_df_ratio: 1.0 }).unwrap();
        let matrix = count_vectorize(&docs, &vocab);
        let ranking = chi2_keyword_ranking(&matrix, &vocab, &labels, 10);
        let shared =
            ranking.per_class[&ExtractMethod].iter().find(|st| st.term == "shared").unwrap();
        assert!(shared.score.abs() < 1e-9, "got {}", shared.score);
    }

    #[test]
    fn chi2_is_symmetric_in_class_and_rest() {
        for (a, b, c, d) in [(3, 2, 1, 4), (0, 5, 5, 0), (2, 2, 3, 3), (1, 0, 0, 9)] {
            let forward = chi2_presence(a, b, c, d);
            let swapped = chi2_presence(c, d, a, b);
            assert!((forward - swapped).abs() < 1e-12);
        }
    }

    #[test]
    fn keyword_csv_has_header_and_ranks() {
        let mut per_class = BTreeMap::new();
        per_class.insert(
            ExtractMethod,
            vec![ScoredTerm { term: "alpha".into(), score: 4.0 }],
        );
        let ranking = KeywordRanking { per_class };
        let csv = ranking.to_csv();
        assert!(csv.starts_with("class,rank,term,score\n"));
        assert!(csv.contains("extract_method,1,alpha,4.000000"));
    }
}
