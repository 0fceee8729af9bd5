//! Shift-free TER: word edit distance over reference length.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::TokenSeq;

/// Operation counts of a minimal unit-cost edit script turning the
/// prediction into the reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EditSummary {
    pub substitutions: usize,
    pub deletions: usize,
    pub insertions: usize,
}

impl EditSummary {
    pub fn total(&self) -> usize {
        self.substitutions + self.deletions + self.insertions
    }
}

/// Backtrace prefers substitution (or match), then deletion, then insertion.
pub fn edit_summary(pred: &TokenSeq, reference: &TokenSeq) -> EditSummary {
    let a: Vec<&str> = pred.surfaces().collect();
    let b: Vec<&str> = reference.surfaces().collect();
    let (n, m) = (a.len(), b.len());
    let width = m + 1;
    let mut d = vec![0usize; (n + 1) * width];
    for i in 0..=n {
        d[i * width] = i;
    }
    for (j, cell) in d[..width].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        for j in 1..=m {
            let sub = d[(i - 1) * width + j - 1] + usize::from(a[i - 1] != b[j - 1]);
            let del = d[(i - 1) * width + j] + 1;
            let ins = d[i * width + j - 1] + 1;
            d[i * width + j] = sub.min(del).min(ins);
        }
    }

    let mut summary = EditSummary::default();
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * width + j];
        if i > 0 && j > 0 {
            let differs = a[i - 1] != b[j - 1];
            if d[(i - 1) * width + j - 1] + usize::from(differs) == here {
                summary.substitutions += usize::from(differs);
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if i > 0 && d[(i - 1) * width + j] + 1 == here {
            summary.deletions += 1;
            i -= 1;
        } else {
            summary.insertions += 1;
            j -= 1;
        }
    }
    summary
}

/// Total edits divided by reference length. Not clamped to 1.
pub fn ter(pred: &TokenSeq, reference: &TokenSeq) -> Result<f64> {
    if reference.is_empty() {
        return Err(Error::InvalidReference("reference has no tokens".into()));
    }
    Ok(edit_summary(pred, reference).total() as f64 / reference.len() as f64)
}
