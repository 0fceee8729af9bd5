//! The METEOR family: METEOR, METEOR-NEXT and Log-MNEXT.
//!
//! All three share one pipeline: unigram matching (exact, stem, synonym),
//! chunk-minimizing alignment, a weighted F-score and a fragmentation
//! penalty `beta * (chunks / matched)^gamma`. Log-MNEXT lower-cases and
//! strips punctuation first, and drops the penalty when the two token
//! sequences are identical.

mod align;
mod params;

pub use align::{align, count_chunks, match_unigrams, Alignment, Match, MatchSet, Matcher, EXACT_SEARCH_LIMIT};
pub use params::{FragMode, MatcherWeights, Matchers, MeteorParams, WordOrder};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{preprocess, PrepConfig, SynonymLexicon, TokenSeq};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
    pub pred_len: usize,
    pub ref_len: usize,
    /// Sum over matches of the matcher weight.
    pub weighted_matches: f64,
}

pub fn precision_recall_f(
    a: &Alignment,
    params: &MeteorParams,
    pred_len: usize,
    ref_len: usize,
) -> Result<Prf> {
    if pred_len == 0 || ref_len == 0 {
        return Err(Error::InvalidInput(
            "precision and recall need non-empty prediction and reference".into(),
        ));
    }
    let weighted: f64 = a.matches.iter().map(|m| params.weights.of(m.matcher)).sum();
    let precision = weighted / pred_len as f64;
    let recall = weighted / ref_len as f64;
    let f_score = weighted_f(precision, recall, params.alpha);
    Ok(Prf {
        precision,
        recall,
        f_score,
        pred_len,
        ref_len,
        weighted_matches: weighted,
    })
}

/// `P*R / (alpha*P + (1-alpha)*R)`, with 0 at `P = R = 0`.
fn weighted_f(p: f64, r: f64, alpha: f64) -> f64 {
    if p == 0.0 || r == 0.0 {
        0.0
    } else if p == r {
        // Exact value; avoids rounding in alpha + (1 - alpha).
        p
    } else {
        p * r / (alpha * p + (1.0 - alpha) * r)
    }
}

/// Fragmentation penalty, clamped to `[0, 1]`.
///
/// Zero when nothing matched, and in Log-MNEXT mode when the pair is identical.
pub fn frag_penalty(a: &Alignment, params: &MeteorParams, identical: bool) -> f64 {
    if a.matched() == 0 {
        return 0.0;
    }
    if identical && params.frag_mode == FragMode::LogMnext {
        return 0.0;
    }
    let chunks = match params.word_order {
        WordOrder::Aligned => a.chunk_count,
        WordOrder::SingleChunk => 1,
        WordOrder::NoPenalty => return 0.0,
    };
    let ratio = chunks as f64 / a.matched() as f64;
    (params.beta * ratio.powf(params.gamma)).clamp(0.0, 1.0)
}

/// Full breakdown of one METEOR-family evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeteorScore {
    pub score: f64,
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
    pub penalty: f64,
    pub matches: usize,
    pub chunks: usize,
    /// One side had no tokens; the score is 0 by convention.
    pub degenerate: bool,
}

impl MeteorScore {
    fn degenerate() -> Self {
        MeteorScore {
            score: 0.0,
            precision: 0.0,
            recall: 0.0,
            f_score: 0.0,
            penalty: 0.0,
            matches: 0,
            chunks: 0,
            degenerate: true,
        }
    }
}

/// Runs the pipeline on already-preprocessed tokens, honouring `params.frag_mode`.
pub fn score_tokens(
    pred: &TokenSeq,
    reference: &TokenSeq,
    params: &MeteorParams,
    lexicon: &SynonymLexicon,
) -> MeteorScore {
    if pred.is_empty() || reference.is_empty() {
        return MeteorScore::degenerate();
    }
    let ms = match_unigrams(pred, reference, params, lexicon);
    let alignment = align(&ms, pred.len(), reference.len());
    let prf = precision_recall_f(&alignment, params, pred.len(), reference.len())
        .expect("both sides non-empty");
    let identical = pred.same_surfaces(reference);
    let penalty = frag_penalty(&alignment, params, identical);
    MeteorScore {
        score: (prf.f_score * (1.0 - penalty)).clamp(0.0, 1.0),
        precision: prf.precision,
        recall: prf.recall,
        f_score: prf.f_score,
        penalty,
        matches: alignment.matched(),
        chunks: alignment.chunk_count,
        degenerate: false,
    }
}

fn with_mode(params: &MeteorParams, frag_mode: FragMode) -> MeteorParams {
    MeteorParams {
        frag_mode,
        ..*params
    }
}

/// METEOR: `F * (1 - penalty)`, penalty always applied. Pass [`MeteorParams::classic`]
/// for the standard parameterisation.
pub fn meteor(
    pred: &TokenSeq,
    reference: &TokenSeq,
    params: &MeteorParams,
    lexicon: &SynonymLexicon,
) -> MeteorScore {
    score_tokens(pred, reference, &with_mode(params, FragMode::MeteorClassic), lexicon)
}

/// METEOR-NEXT: the same pipeline with tunable parameters.
pub fn meteor_next(
    pred: &TokenSeq,
    reference: &TokenSeq,
    params: &MeteorParams,
    lexicon: &SynonymLexicon,
) -> MeteorScore {
    score_tokens(pred, reference, &with_mode(params, FragMode::MeteorClassic), lexicon)
}

/// Log-MNEXT on raw strings: lower-cases and strips punctuation, then
/// scores with the identity-aware penalty.
pub fn log_mnext(
    pred: &str,
    reference: &str,
    params: &MeteorParams,
    lexicon: &SynonymLexicon,
) -> MeteorScore {
    let pred = preprocess(pred, PrepConfig::CLEAN);
    let reference = preprocess(reference, PrepConfig::CLEAN);
    log_mnext_tokens(&pred, &reference, params, lexicon)
}

/// Log-MNEXT on tokens that were preprocessed by the caller.
pub fn log_mnext_tokens(
    pred: &TokenSeq,
    reference: &TokenSeq,
    params: &MeteorParams,
    lexicon: &SynonymLexicon,
) -> MeteorScore {
    score_tokens(pred, reference, &with_mode(params, FragMode::LogMnext), lexicon)
}
