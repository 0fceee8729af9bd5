//! Unigram matching and chunk-minimizing alignment.

use serde::{Deserialize, Serialize};

use super::MeteorParams;
use crate::text::{SynonymLexicon, TokenSeq};

/// Matcher types, ordered by priority (`Exact` highest).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Matcher {
    Exact,
    Stem,
    Synonym,
}

impl Matcher {
    fn priority(self) -> u32 {
        match self {
            Matcher::Exact => 3,
            Matcher::Stem => 2,
            Matcher::Synonym => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Match {
    pub pred: usize,
    pub reference: usize,
    pub matcher: Matcher,
}

/// Candidate matches, at most one per index pair, sorted by `(pred, reference)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchSet {
    pub candidates: Vec<Match>,
}

impl MatchSet {
    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }
}

/// A one-to-one subset of candidate matches, sorted by prediction index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alignment {
    pub matches: Vec<Match>,
    pub chunk_count: usize,
}

impl Alignment {
    pub fn matched(&self) -> usize {
        self.matches.len()
    }
}

/// Records the highest-priority enabled matcher for every index pair.
pub fn match_unigrams(
    pred: &TokenSeq,
    reference: &TokenSeq,
    params: &MeteorParams,
    lexicon: &SynonymLexicon,
) -> MatchSet {
    let mut candidates = Vec::new();
    for (i, p) in pred.tokens.iter().enumerate() {
        for (j, r) in reference.tokens.iter().enumerate() {
            let matcher = if p.surface == r.surface {
                Matcher::Exact
            } else if params.matchers.stem && p.stem == r.stem {
                Matcher::Stem
            } else if params.matchers.synonym && lexicon.are_synonyms(&p.folded, &r.folded) {
                Matcher::Synonym
            } else {
                continue;
            };
            candidates.push(Match {
                pred: i,
                reference: j,
                matcher,
            });
        }
    }
    MatchSet { candidates }
}

/// Number of maximal runs of matches that are adjacent on both sides.
/// `matches` must be sorted by prediction index.
pub fn count_chunks(matches: &[Match]) -> usize {
    matches
        .iter()
        .enumerate()
        .filter(|(k, m)| {
            *k == 0 || {
                let prev = matches[k - 1];
                !(prev.pred + 1 == m.pred && prev.reference + 1 == m.reference)
            }
        })
        .count()
}

/// Above this many prediction tokens with candidates the greedy aligner is used.
pub const EXACT_SEARCH_LIMIT: usize = 30;

const NODE_BUDGET: usize = 2_000_000;

/// Picks a one-to-one alignment with the most matches; among those, the
/// fewest chunks; then the highest matcher priority; then the
/// lexicographically smallest `(pred, reference)` list.
pub fn align(ms: &MatchSet, pred_len: usize, ref_len: usize) -> Alignment {
    if ms.is_empty() {
        return Alignment::default();
    }
    let mut per_pred: Vec<Vec<(usize, Matcher)>> = vec![Vec::new(); pred_len];
    for m in &ms.candidates {
        per_pred[m.pred].push((m.reference, m.matcher));
    }
    for c in &mut per_pred {
        c.sort_unstable();
    }
    let active = per_pred.iter().filter(|c| !c.is_empty()).count();
    if active > EXACT_SEARCH_LIMIT {
        return greedy_align(&per_pred, ref_len);
    }

    let target = max_cardinality(&per_pred, ref_len);
    let mut best_priority_tail = vec![0u32; pred_len + 1];
    for i in (0..pred_len).rev() {
        let best = per_pred[i].iter().map(|(_, m)| m.priority()).max().unwrap_or(0);
        best_priority_tail[i] = best_priority_tail[i + 1] + best;
    }
    let mut search = Search {
        per_pred: &per_pred,
        priority_tail: best_priority_tail,
        used: vec![false; ref_len],
        current: Vec::with_capacity(target),
        best: None,
        target,
        nodes: 0,
    };
    search.visit(0, 0, 0);
    match search.best {
        Some(best) => Alignment {
            chunk_count: best.chunks,
            matches: best.matches,
        },
        None => greedy_align(&per_pred, ref_len),
    }
}

struct Best {
    chunks: usize,
    priority: u32,
    matches: Vec<Match>,
}

struct Search<'a> {
    per_pred: &'a [Vec<(usize, Matcher)>],
    priority_tail: Vec<u32>,
    used: Vec<bool>,
    current: Vec<Match>,
    best: Option<Best>,
    target: usize,
    nodes: usize,
}

impl Search<'_> {
    /// Upper bound on further matches from prediction index `i` onward.
    fn reachable(&self, i: usize) -> usize {
        let preds = self.per_pred[i..]
            .iter()
            .filter(|c| c.iter().any(|&(j, _)| !self.used[j]))
            .count();
        if preds == 0 {
            return 0;
        }
        let mut refs = vec![false; self.used.len()];
        for c in &self.per_pred[i..] {
            for &(j, _) in c {
                if !self.used[j] {
                    refs[j] = true;
                }
            }
        }
        preds.min(refs.iter().filter(|&&r| r).count())
    }

    fn visit(&mut self, i: usize, chunks: usize, priority: u32) {
        self.nodes += 1;
        if self.nodes > NODE_BUDGET {
            return;
        }
        let matched = self.current.len();
        if let Some(best) = &self.best {
            if chunks > best.chunks
                || (chunks == best.chunks && priority + self.priority_tail[i] <= best.priority)
            {
                return;
            }
        }
        if i == self.per_pred.len() {
            if matched == self.target {
                self.best = Some(Best {
                    chunks,
                    priority,
                    matches: self.current.clone(),
                });
            }
            return;
        }
        if matched + self.reachable(i) < self.target {
            return;
        }
        let per_pred = self.per_pred;
        for &(j, matcher) in &per_pred[i] {
            if self.used[j] {
                continue;
            }
            let extends = self
                .current
                .last()
                .is_some_and(|m| m.pred + 1 == i && m.reference + 1 == j);
            self.used[j] = true;
            self.current.push(Match {
                pred: i,
                reference: j,
                matcher,
            });
            self.visit(i + 1, chunks + usize::from(!extends), priority + matcher.priority());
            self.current.pop();
            self.used[j] = false;
        }
        self.visit(i + 1, chunks, priority);
    }
}

/// Maximum bipartite matching size (augmenting paths).
fn max_cardinality(per_pred: &[Vec<(usize, Matcher)>], ref_len: usize) -> usize {
    fn augment(
        i: usize,
        per_pred: &[Vec<(usize, Matcher)>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &(j, _) in &per_pred[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(k, per_pred, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; ref_len];
    (0..per_pred.len())
        .filter(|&i| {
            let mut seen = vec![false; ref_len];
            augment(i, per_pred, &mut seen, &mut owner)
        })
        .count()
}

/// Left-to-right greedy alignment for long inputs: continue the current
/// chunk when possible, otherwise take the highest-priority free candidate.
fn greedy_align(per_pred: &[Vec<(usize, Matcher)>], ref_len: usize) -> Alignment {
    let mut used = vec![false; ref_len];
    let mut matches: Vec<Match> = Vec::new();
    for (i, cands) in per_pred.iter().enumerate() {
        let continuing = matches
            .last()
            .filter(|m| m.pred + 1 == i)
            .and_then(|m| cands.iter().find(|&&(j, _)| j == m.reference + 1 && !used[j]));
        let choice = continuing.or_else(|| {
            cands
                .iter()
                .filter(|&&(j, _)| !used[j])
                .min_by_key(|&&(j, m)| (m, j))
        });
        if let Some(&(j, matcher)) = choice {
            used[j] = true;
            matches.push(Match {
                pred: i,
                reference: j,
                matcher,
            });
        }
    }
    Alignment {
        chunk_count: count_chunks(&matches),
        matches,
    }
}
