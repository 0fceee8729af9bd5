//! Independent oracles and random generators shared by the integration and
//! acceptance targets.
#![allow(dead_code)]

use std::collections::HashMap;

use cmg_eval::meteor::{count_chunks, Match, MatchSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Words chosen so that exact, stem, synonym and case-only matches all occur.
pub const VOCAB: &[&str] = &[
    "fix", "fixed", "fixes", "Fix", "repair", "patch", "add", "added", "adds", "Add", "remove", "removed",
    "delete", "drop", "update", "updated", "bump", "Update", "test", "tests", "testing", "bug", "bugs",
    "parser", "Parser", "config", "in", "the", "for", "to", "of", "null", "npe", "NPE", "crash", "cache",
    "README", "readme", "version", "2.1.0", "#42", "docs", "typo", "handle", "error", "errors",
];

const PUNCT: &[&str] = &[".", ",", ":", "!", "(", ")", ";", "'"];

/// A commit-message-like string: words, sometimes with attached punctuation.
pub fn random_message(rng: &mut impl Rng, max_words: usize) -> String {
    let n = rng.gen_range(1..=max_words);
    let mut words = Vec::with_capacity(n);
    for _ in 0..n {
        let mut w = VOCAB.choose(rng).unwrap().to_string();
        match rng.gen_range(0..10) {
            0 => w.push_str(PUNCT.choose(rng).unwrap()),
            1 => w.insert_str(0, PUNCT.choose(rng).unwrap()),
            _ => {}
        }
        words.push(w);
    }
    words.join(" ")
}

/// Words over a small alphabet so that repeats are frequent.
pub fn random_words(rng: &mut impl Rng, max_len: usize, alphabet: &[&'static str]) -> Vec<&'static str> {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| *alphabet.choose(rng).unwrap()).collect()
}

/// Longest common subsequence by plain recursion.
pub fn lcs_oracle(a: &[&str], b: &[&str]) -> usize {
    match (a.split_first(), b.split_first()) {
        (Some((x, ra)), Some((y, rb))) => {
            if x == y {
                1 + lcs_oracle(ra, rb)
            } else {
                lcs_oracle(ra, b).max(lcs_oracle(a, rb))
            }
        }
        _ => 0,
    }
}

/// Word-level Levenshtein distance by plain recursion.
pub fn edit_distance_oracle(a: &[&str], b: &[&str]) -> usize {
    match (a.split_first(), b.split_first()) {
        (None, _) => b.len(),
        (_, None) => a.len(),
        (Some((x, ra)), Some((y, rb))) => {
            let sub = edit_distance_oracle(ra, rb) + usize::from(x != y);
            let del = edit_distance_oracle(ra, b) + 1;
            let ins = edit_distance_oracle(a, rb) + 1;
            sub.min(del).min(ins)
        }
    }
}

/// Best (matches, chunks) over every one-to-one alignment drawn from the
/// candidate pairs: most matches first, then fewest chunks.
pub fn exhaustive_alignment(ms: &MatchSet, pred_len: usize) -> (usize, usize) {
    fn go(i: usize, pred_len: usize, by_pred: &[Vec<Match>], used: &mut Vec<bool>, cur: &mut Vec<Match>, best: &mut (usize, usize)) {
        if i == pred_len {
            let m = cur.len();
            let c = count_chunks(cur);
            if m > best.0 || (m == best.0 && c < best.1) {
                *best = (m, c);
            }
            return;
        }
        go(i + 1, pred_len, by_pred, used, cur, best);
        for &m in &by_pred[i] {
            if !used[m.reference] {
                used[m.reference] = true;
                cur.push(m);
                go(i + 1, pred_len, by_pred, used, cur, best);
                cur.pop();
                used[m.reference] = false;
            }
        }
    }
    let mut by_pred = vec![Vec::new(); pred_len];
    let mut ref_len = 0;
    for &m in &ms.candidates {
        by_pred[m.pred].push(m);
        ref_len = ref_len.max(m.reference + 1);
    }
    let mut best = (0, 0);
    go(0, pred_len, &by_pred, &mut vec![false; ref_len], &mut Vec::new(), &mut best);
    best
}

/// Spearman's rho for tie-free data: 1 - 6 Σd² / (n(n² - 1)).
pub fn spearman_closed_form(xs: &[f64], ys: &[f64]) -> f64 {
    let rank = |v: &[f64]| {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = (pos + 1) as f64;
        }
        r
    };
    let (rx, ry) = (rank(xs), rank(ys));
    let n = xs.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Term counts of a lower-cased, punctuation-preserving tokenisation.
pub fn term_counts(tokens: &[String]) -> HashMap<&str, f64> {
    let mut counts = HashMap::new();
    for t in tokens {
        *counts.entry(t.as_str()).or_insert(0.0) += 1.0;
    }
    counts
}

pub fn cosine_oracle(a: &HashMap<&str, f64>, b: &HashMap<&str, f64>) -> f64 {
    let dot: f64 = a.iter().map(|(k, v)| v * b.get(k).copied().unwrap_or(0.0)).sum();
    let na: f64 = a.values().map(|v| v * v).sum::<f64>().sqrt();
    let nb: f64 = b.values().map(|v| v * v).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}
