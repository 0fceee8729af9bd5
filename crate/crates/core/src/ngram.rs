//! Sentence-level BLEU4 (plain, `+1`-smoothed and neighbour-averaged) and
//! ROUGE-N / ROUGE-L.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::TokenSeq;

pub const MAX_ORDER: usize = 4;

fn ngram_counts(seq: &TokenSeq, k: usize) -> HashMap<Vec<&str>, usize> {
    let words: Vec<&str> = seq.surfaces().collect();
    let mut counts = HashMap::new();
    if words.len() >= k {
        for w in words.windows(k) {
            *counts.entry(w.to_vec()).or_insert(0) += 1;
        }
    }
    counts
}

/// Clipped k-gram matches and the number of k-grams in `pred`.
///
/// Each distinct k-gram contributes `min(count in pred, count in ref)`.
pub fn clipped_matches(pred: &TokenSeq, reference: &TokenSeq, k: usize) -> (usize, usize) {
    assert!(k >= 1, "n-gram order must be at least 1");
    let total = (pred.len() + 1).saturating_sub(k);
    if total == 0 {
        return (0, 0);
    }
    let ref_counts = ngram_counts(reference, k);
    let matched = ngram_counts(pred, k)
        .iter()
        .map(|(g, &c)| c.min(ref_counts.get(g).copied().unwrap_or(0)))
        .sum();
    (matched, total)
}

/// Per-order match statistics for a prediction/reference pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NgramStats {
    /// Clipped matches per order, index 0 is unigrams.
    pub matched: [usize; MAX_ORDER],
    /// k-grams in the prediction.
    pub pred_total: [usize; MAX_ORDER],
    /// k-grams in the reference.
    pub ref_total: [usize; MAX_ORDER],
}

impl NgramStats {
    pub fn compute(pred: &TokenSeq, reference: &TokenSeq) -> Self {
        let mut stats = NgramStats::default();
        for k in 1..=MAX_ORDER {
            let (m, l) = clipped_matches(pred, reference, k);
            stats.matched[k - 1] = m;
            stats.pred_total[k - 1] = l;
            stats.ref_total[k - 1] = (reference.len() + 1).saturating_sub(k);
        }
        stats
    }
}

pub fn brevity_penalty(pred_len: usize, ref_len: usize) -> Result<f64> {
    if ref_len == 0 {
        return Err(Error::InvalidReference("reference has no tokens".into()));
    }
    Ok(if pred_len == 0 {
        0.0
    } else if pred_len >= ref_len {
        1.0
    } else {
        (1.0 - ref_len as f64 / pred_len as f64).exp()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothing {
    #[default]
    None,
    /// `p_k = (m_k + 1) / (l_k + 1)`.
    Norm,
    /// Match counts averaged with their neighbouring orders.
    Cc,
}

/// Options for the neighbour-averaged smoothing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CcOptions {
    /// Apply the `+1` of `Norm` on top of the averaged counts.
    pub add_one: bool,
    /// `m_0 = m_1 + 1` when set, `m_0 = 0` otherwise.
    pub lower_from_unigrams: bool,
    /// `m_5 = m_4` when set, `m_5 = 0` otherwise.
    pub upper_repeats_last: bool,
}

impl Default for CcOptions {
    fn default() -> Self {
        CcOptions {
            add_one: true,
            lower_from_unigrams: true,
            upper_repeats_last: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BleuConfig {
    pub weights: [f64; MAX_ORDER],
    pub smoothing: Smoothing,
    pub use_brevity_penalty: bool,
    pub cc: CcOptions,
}

impl Default for BleuConfig {
    fn default() -> Self {
        BleuConfig {
            weights: [0.25; MAX_ORDER],
            smoothing: Smoothing::None,
            use_brevity_penalty: true,
            cc: CcOptions::default(),
        }
    }
}

impl BleuConfig {
    pub fn with_smoothing(smoothing: Smoothing) -> Self {
        BleuConfig {
            smoothing,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|&w| w.is_nan() || w <= 0.0) {
            return Err(Error::InvalidInput("BLEU weights must be strictly positive".into()));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("BLEU weights sum to {sum}, not 1")));
        }
        Ok(())
    }
}

/// Sentence-level BLEU4.
///
/// An empty prediction scores 0. Without smoothing, any order with no
/// matches (or no k-grams at all) makes the score 0.
pub fn bleu4(pred: &TokenSeq, reference: &TokenSeq, cfg: &BleuConfig) -> Result<f64> {
    cfg.validate()?;
    if reference.is_empty() {
        return Err(Error::InvalidReference("reference has no tokens".into()));
    }
    if pred.is_empty() {
        return Ok(0.0);
    }
    let stats = NgramStats::compute(pred, reference);
    let Some(precisions) = precisions(&stats, cfg) else {
        return Ok(0.0);
    };
    let log_sum: f64 = cfg
        .weights
        .iter()
        .zip(precisions)
        .map(|(w, p)| w * p.ln())
        .sum();
    let bp = if cfg.use_brevity_penalty {
        brevity_penalty(pred.len(), reference.len())?
    } else {
        1.0
    };
    Ok((bp * log_sum.exp()).clamp(0.0, 1.0))
}

/// Modified precisions per order, or `None` when one of them is zero.
fn precisions(stats: &NgramStats, cfg: &BleuConfig) -> Option<[f64; MAX_ORDER]> {
    let m = stats.matched.map(|x| x as f64);
    let l = stats.pred_total.map(|x| x as f64);
    let mut p = [0.0; MAX_ORDER];
    match cfg.smoothing {
        Smoothing::None => {
            for k in 0..MAX_ORDER {
                if m[k] == 0.0 {
                    return None;
                }
                p[k] = m[k] / l[k];
            }
        }
        Smoothing::Norm => {
            for k in 0..MAX_ORDER {
                p[k] = (m[k] + 1.0) / (l[k] + 1.0);
            }
        }
        Smoothing::Cc => {
            let below = if cfg.cc.lower_from_unigrams { m[0] + 1.0 } else { 0.0 };
            let above = if cfg.cc.upper_repeats_last { m[MAX_ORDER - 1] } else { 0.0 };
            for k in 0..MAX_ORDER {
                let prev = if k == 0 { below } else { m[k - 1] };
                let next = if k + 1 == MAX_ORDER { above } else { m[k + 1] };
                // Averaging can push the count past l_k at the top order.
                let smoothed = ((prev + m[k] + next) / 3.0).min(l[k]);
                p[k] = if cfg.cc.add_one {
                    (smoothed + 1.0) / (l[k] + 1.0)
                } else if smoothed > 0.0 {
                    smoothed / l[k]
                } else {
                    return None;
                };
            }
        }
    }
    Some(p)
}

/// Clipped n-gram matches over the number of reference n-grams.
pub fn rouge_n(pred: &TokenSeq, reference: &TokenSeq, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("ROUGE order must be at least 1".into()));
    }
    if reference.len() < n {
        return Err(Error::UndefinedScore(format!(
            "reference has {} tokens, ROUGE-{n} needs at least {n}",
            reference.len()
        )));
    }
    let (matched, _) = clipped_matches(pred, reference, n);
    let ref_total = reference.len() + 1 - n;
    Ok(matched as f64 / ref_total as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RougeLMode {
    /// LCS length over reference length.
    #[default]
    Recall,
    /// Harmonic mean of LCS precision and recall.
    F1,
}

/// Length of the longest common subsequence of two token sequences.
pub fn lcs_len(a: &TokenSeq, b: &TokenSeq) -> usize {
    let b_words: Vec<&str> = b.surfaces().collect();
    let mut row = vec![0usize; b_words.len() + 1];
    for x in a.surfaces() {
        let mut diag = 0;
        for (j, y) in b_words.iter().enumerate() {
            let above = row[j + 1];
            row[j + 1] = if x == *y {
                diag + 1
            } else {
                above.max(row[j])
            };
            diag = above;
        }
    }
    row[b_words.len()]
}

pub fn rouge_l(pred: &TokenSeq, reference: &TokenSeq) -> Result<f64> {
    rouge_l_with(pred, reference, RougeLMode::Recall)
}

pub fn rouge_l_with(pred: &TokenSeq, reference: &TokenSeq, mode: RougeLMode) -> Result<f64> {
    if reference.is_empty() {
        return Err(Error::InvalidReference("reference has no tokens".into()));
    }
    let lcs = lcs_len(pred, reference) as f64;
    let recall = lcs / reference.len() as f64;
    Ok(match mode {
        RougeLMode::Recall => recall,
        RougeLMode::F1 => {
            if lcs == 0.0 {
                0.0
            } else {
                let precision = lcs / pred.len() as f64;
                2.0 * precision * recall / (precision + recall)
            }
        }
    })
}
