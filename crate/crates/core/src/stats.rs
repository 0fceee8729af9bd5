//! Tie-aware ranking, Spearman correlation and score aggregation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_CORRELATION_SAMPLES: usize = 3;
pub const MAX_HUMAN_SCORE: u8 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub rho: f64,
    pub n: usize,
    pub ties_present: bool,
}

/// Fractional ranks starting at 1; tied values share the mean of their positions.
pub fn rank(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start+1 ..= end.
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

fn has_ties(values: &[f64]) -> bool {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.windows(2).any(|w| w[0] == w[1])
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho as the Pearson correlation of fractional ranks.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<CorrelationResult> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidInput(format!(
            "score vectors differ in length ({} vs {})",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < MIN_CORRELATION_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "need at least {MIN_CORRELATION_SAMPLES} samples, got {}",
            xs.len()
        )));
    }
    if xs.iter().chain(ys).any(|v| v.is_nan()) {
        return Err(Error::InvalidInput("scores contain NaN".into()));
    }
    let (rx, ry) = (rank(xs), rank(ys));
    let rho = pearson(&rx, &ry)
        .ok_or_else(|| Error::UndefinedCorrelation("one of the score vectors is constant".into()))?;
    Ok(CorrelationResult {
        rho,
        n: xs.len(),
        ties_present: has_ties(xs) || has_ties(ys),
    })
}

/// Mean of per-annotator scores, each in `0..=4`.
pub fn average_human(scores: &[u8]) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::InvalidInput("no annotator scores".into()));
    }
    if let Some(bad) = scores.iter().find(|&&s| s > MAX_HUMAN_SCORE) {
        return Err(Error::InvalidInput(format!(
            "annotator score {bad} outside 0..={MAX_HUMAN_SCORE}"
        )));
    }
    Ok(scores.iter().map(|&s| f64::from(s)).sum::<f64>() / scores.len() as f64)
}

/// Arithmetic mean as a percentage.
pub fn corpus_mean(scores: &[f64]) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::InvalidInput("no scores to average".into()));
    }
    Ok(scores.iter().sum::<f64>() / scores.len() as f64 * 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[10.0, 20.0, 30.0]), [1.0, 2.0, 3.0]);
        assert_eq!(rank(&[5.0, 5.0]), [1.5, 1.5]);
        assert_eq!(rank(&[3.0, 1.0, 3.0, 2.0]), [3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn spearman_examples() {
        let xs = [1.0, 2.0, 5.0, 9.0];
        assert_eq!(spearman(&xs, &xs).unwrap().rho, 1.0);
        let rev = [9.0, 5.0, 2.0, 1.0];
        assert_eq!(spearman(&xs, &rev).unwrap().rho, -1.0);
        let r = spearman(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap();
        assert_eq!(r.rho, 0.5);
        assert!(!r.ties_present);
    }

    #[test]
    fn spearman_errors() {
        assert!(matches!(
            spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::UndefinedCorrelation(_))
        ));
        assert!(matches!(spearman(&[1.0, 2.0, 3.0], &[1.0, 2.0]), Err(Error::InvalidInput(_))));
        assert!(spearman(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn ties_use_rank_pearson() {
        // Ranks x = (1.5, 1.5, 3, 4), y = (1, 2, 3, 4).
        let r = spearman(&[1.0, 1.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(r.ties_present);
        let oracle = 4.5 / (4.5f64 * 5.0).sqrt();
        assert!((r.rho - oracle).abs() < 1e-12);
    }

    #[test]
    fn averaging() {
        assert_eq!(average_human(&[2, 3, 4]).unwrap(), 3.0);
        assert_eq!(average_human(&[0, 0, 0]).unwrap(), 0.0);
        assert_eq!(average_human(&[4]).unwrap(), 4.0);
        assert!(average_human(&[5]).is_err());
        assert!(average_human(&[]).is_err());
        assert_eq!(corpus_mean(&[1.0, 1.0]).unwrap(), 100.0);
        assert_eq!(corpus_mean(&[0.0, 1.0]).unwrap(), 50.0);
        assert!((corpus_mean(&[0.1413; 7]).unwrap() - 14.13).abs() < 1e-9);
        assert_eq!(format!("{:.2}", corpus_mean(&[0.1413; 7]).unwrap()), "14.13");
    }

    proptest! {
        #[test]
        fn ranks_sum_to_triangular_number(v in prop::collection::vec(0u8..6, 1..30)) {
            let values: Vec<f64> = v.iter().map(|&x| f64::from(x)).collect();
            let n = values.len() as f64;
            prop_assert!((rank(&values).iter().sum::<f64>() - n * (n + 1.0) / 2.0).abs() < 1e-9);
        }

        #[test]
        fn spearman_is_symmetric(x in prop::collection::vec(0u8..5, 3..20), y in prop::collection::vec(0u8..5, 3..20)) {
            let n = x.len().min(y.len());
            let xs: Vec<f64> = x[..n].iter().map(|&v| f64::from(v)).collect();
            let ys: Vec<f64> = y[..n].iter().map(|&v| f64::from(v)).collect();
            match (spearman(&xs, &ys), spearman(&ys, &xs)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a.rho, b.rho),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "asymmetric failure"),
            }
        }
    }
}
