//! Nearest-neighbour commit message retrieval over bag-of-words diff vectors.
//!
//! For a query diff the `k` most cosine-similar training diffs are
//! re-ranked by smoothed BLEU4 against the query, and the winner's message
//! is returned verbatim.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::corpus::{CommitRecord, EvalPair, Lang};
use crate::error::{Error, Result};
use crate::ngram::{bleu4, BleuConfig, Smoothing};
use crate::text::{preprocess, PrepConfig, TokenSeq};

pub const DEFAULT_K: usize = 5;

/// Diff markers such as `+` and `-` carry signal, so punctuation is kept.
const DIFF_PREP: PrepConfig = PrepConfig {
    lowercase: true,
    strip_punctuation: false,
};

/// Term counts of a preprocessed diff. Zero counts are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BowVector(pub BTreeMap<String, u32>);

impl BowVector {
    fn from_tokens(tokens: &TokenSeq) -> Self {
        let mut counts = BTreeMap::new();
        for t in tokens.surfaces() {
            *counts.entry(t.to_string()).or_insert(0) += 1;
        }
        BowVector(counts)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.values().map(|&c| f64::from(c).powi(2)).sum::<f64>().sqrt()
    }
}

fn diff_tokens(diff: &str) -> TokenSeq {
    preprocess(diff, DIFF_PREP)
}

pub fn bow_vector(diff: &str) -> BowVector {
    BowVector::from_tokens(&diff_tokens(diff))
}

/// Cosine similarity; 0 when either vector is empty.
pub fn cosine(a: &BowVector, b: &BowVector) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let (small, large) = if a.0.len() <= b.0.len() { (a, b) } else { (b, a) };
    let dot: f64 = small
        .0
        .iter()
        .filter_map(|(t, &c)| large.0.get(t).map(|&d| f64::from(c) * f64::from(d)))
        .sum();
    (dot / (a.norm() * b.norm())).clamp(0.0, 1.0)
}

struct Entry {
    record: CommitRecord,
    tokens: TokenSeq,
    /// Sorted by term id.
    terms: Vec<(u32, f64)>,
    norm: f64,
}

/// Training records with their diff vectors, in input order.
pub struct RetrievalIndex {
    entries: Vec<Entry>,
    vocabulary: BTreeMap<String, u32>,
}

impl RetrievalIndex {
    pub fn build(records: Vec<CommitRecord>) -> Self {
        let mut vocabulary = BTreeMap::new();
        let entries = records
            .into_iter()
            .map(|record| {
                let tokens = diff_tokens(&record.diff);
                let bow = BowVector::from_tokens(&tokens);
                let mut terms: Vec<(u32, f64)> = bow
                    .0
                    .iter()
                    .map(|(term, &count)| {
                        let next = vocabulary.len() as u32;
                        let id = *vocabulary.entry(term.clone()).or_insert(next);
                        (id, f64::from(count))
                    })
                    .collect();
                terms.sort_unstable_by_key(|&(id, _)| id);
                Entry {
                    norm: bow.norm(),
                    record,
                    tokens,
                    terms,
                }
            })
            .collect();
        RetrievalIndex { entries, vocabulary }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vocabulary(&self) -> &BTreeMap<String, u32> {
        &self.vocabulary
    }

    pub fn records(&self) -> impl Iterator<Item = &CommitRecord> {
        self.entries.iter().map(|e| &e.record)
    }

    /// Cosine similarity of the query against every record, in index order.
    pub fn similarities(&self, query_diff: &str) -> Vec<f64> {
        let query = bow_vector(query_diff);
        let qnorm = query.norm();
        let mut qterms: Vec<(u32, f64)> = query
            .0
            .iter()
            .filter_map(|(t, &c)| self.vocabulary.get(t).map(|&id| (id, f64::from(c))))
            .collect();
        qterms.sort_unstable_by_key(|&(id, _)| id);
        self.entries
            .iter()
            .map(|e| {
                if qnorm == 0.0 || e.norm == 0.0 {
                    return 0.0;
                }
                (sparse_dot(&qterms, &e.terms) / (qnorm * e.norm)).clamp(0.0, 1.0)
            })
            .collect()
    }
}

fn sparse_dot(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let (mut i, mut j, mut dot) = (0, 0, 0.0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                dot += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    dot
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generation {
    pub message: String,
    /// Id of the training record the message came from.
    pub provenance: String,
    pub similarity: f64,
    pub bleu: f64,
    /// No training diff shared a term with the query.
    pub zero_similarity: bool,
}

/// Re-ranks the top `k` records by cosine with BLEU4 (`+1` smoothing) of
/// their diff against the query diff. Ties keep the earlier candidate.
pub fn generate(query_diff: &str, index: &RetrievalIndex, k: usize) -> Result<Generation> {
    if index.is_empty() {
        return Err(Error::InvalidInput("retrieval index is empty".into()));
    }
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let sims = index.similarities(query_diff);
    if sims.iter().all(|&s| s == 0.0) {
        let first = &index.entries[0].record;
        return Ok(Generation {
            message: first.message.clone(),
            provenance: first.id.clone(),
            similarity: 0.0,
            bleu: 0.0,
            zero_similarity: true,
        });
    }
    let mut order: Vec<usize> = (0..sims.len()).collect();
    order.sort_by(|&a, &b| sims[b].total_cmp(&sims[a]));
    let query_tokens = diff_tokens(query_diff);
    let cfg = BleuConfig::with_smoothing(Smoothing::Norm);

    let mut best: Option<(usize, f64)> = None;
    for &i in order.iter().take(k) {
        let bleu = bleu4(&index.entries[i].tokens, &query_tokens, &cfg).unwrap_or(0.0);
        if best.is_none_or(|(_, b)| bleu > b) {
            best = Some((i, bleu));
        }
    }
    let (i, bleu) = best.expect("k >= 1 and index non-empty");
    let record = &index.entries[i].record;
    Ok(Generation {
        message: record.message.clone(),
        provenance: record.id.clone(),
        similarity: sims[i],
        bleu,
        zero_similarity: false,
    })
}

/// Generates a prediction for every test commit. Output order follows `test`.
pub fn generate_pairs(test: &[CommitRecord], index: &RetrievalIndex, k: usize) -> Result<Vec<(EvalPair, Lang)>> {
    test.par_iter()
        .map(|record| {
            let generation = generate(&record.diff, index, k)?;
            Ok((
                EvalPair {
                    id: record.id.clone(),
                    reference: record.message.clone(),
                    prediction: generation.message,
                },
                record.lang,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, diff: &str, message: &str) -> CommitRecord {
        CommitRecord {
            id: id.into(),
            diff: diff.into(),
            message: message.into(),
            lang: Lang::Java,
        }
    }

    fn bow(pairs: &[(&str, u32)]) -> BowVector {
        BowVector(pairs.iter().map(|&(t, c)| (t.to_string(), c)).collect())
    }

    #[test]
    fn bag_of_words_examples() {
        assert_eq!(bow_vector("add add remove"), bow(&[("add", 2), ("remove", 1)]));
        assert!(bow_vector("").is_empty());
        assert_eq!(bow_vector("+ foo\n- foo"), bow(&[("+", 1), ("-", 1), ("foo", 2)]));
        assert_eq!(bow_vector("Foo FOO"), bow(&[("foo", 2)]));
    }

    #[test]
    fn cosine_examples() {
        let a = bow(&[("a", 1), ("b", 1)]);
        assert!((cosine(&a, &a) - 1.0).abs() < 1e-12);
        assert_eq!(cosine(&a, &bow(&[("c", 3)])), 0.0);
        assert!((cosine(&a, &bow(&[("a", 1)])) - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(cosine(&a, &BowVector::default()), 0.0);
    }

    #[test]
    fn index_similarities_agree_with_cosine() {
        let index = RetrievalIndex::build(vec![
            record("1", "+ int x = 1 ;", "add x"),
            record("2", "- return null ;", "remove null"),
        ]);
        let q = "+ int y = 1 ;";
        let sims = index.similarities(q);
        for (sim, rec) in sims.iter().zip(index.records()) {
            assert!((sim - cosine(&bow_vector(q), &bow_vector(&rec.diff))).abs() < 1e-12);
        }
    }

    #[test]
    fn identical_diff_returns_its_message() {
        let index = RetrievalIndex::build(vec![
            record("1", "+ int x = 1 ;", "add x"),
            record("2", "- return null ;", "remove null return"),
            record("3", "+ log . info ( msg ) ;", "add logging"),
        ]);
        let g = generate("- return null ;", &index, 5).unwrap();
        assert_eq!((g.message.as_str(), g.provenance.as_str()), ("remove null return", "2"));
        assert!(!g.zero_similarity);
    }

    #[test]
    fn k_one_is_plain_nearest_neighbour() {
        let index = RetrievalIndex::build(vec![
            record("1", "a b c", "first"),
            record("2", "a b c d", "second"),
        ]);
        let sims = index.similarities("a b c d e");
        let nn = if sims[0] >= sims[1] { "first" } else { "second" };
        assert_eq!(generate("a b c d e", &index, 1).unwrap().message, nn);
    }

    #[test]
    fn equal_cosine_is_broken_by_bleu() {
        // Same bag of words, different order: cosine ties, BLEU prefers the in-order diff.
        let index = RetrievalIndex::build(vec![
            record("1", "c b a d", "shuffled"),
            record("2", "a b c d", "ordered"),
        ]);
        let sims = index.similarities("a b c d");
        assert_eq!(sims[0], sims[1]);
        let g = generate("a b c d", &index, 2).unwrap();
        assert_eq!(g.message, "ordered");
        assert_eq!(generate("a b c d", &index, 1).unwrap().message, "shuffled");
    }

    #[test]
    fn zero_similarity_falls_back_to_first_record() {
        let index = RetrievalIndex::build(vec![record("1", "a", "first"), record("2", "b", "second")]);
        let g = generate("zzz", &index, 2).unwrap();
        assert!(g.zero_similarity);
        assert_eq!(g.provenance, "1");
    }

    #[test]
    fn errors() {
        let empty = RetrievalIndex::build(vec![]);
        assert!(generate("a", &empty, 1).is_err());
        let index = RetrievalIndex::build(vec![record("1", "a", "m")]);
        assert!(generate("a", &index, 0).is_err());
    }

    #[test]
    fn vocabulary_covers_training_terms() {
        let index = RetrievalIndex::build(vec![record("1", "a b", "m"), record("2", "b c", "n")]);
        assert_eq!(index.vocabulary().keys().collect::<Vec<_>>(), ["a", "b", "c"]);
    }
}
