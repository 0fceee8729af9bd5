//! Scoring any metric with individual design factors switched on or off,
//! and the correlation grid built from it.
//!
//! Factors that do not apply to a metric are ignored, so their with and
//! without cells are computed identically.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::AnnotatedPair;
use crate::edit::ter;
use crate::error::{Error, Result};
use crate::meteor::{score_tokens, FragMode, Matchers, MeteorParams, WordOrder};
use crate::ngram::{bleu4, rouge_l_with, rouge_n, BleuConfig, CcOptions, RougeLMode, Smoothing};
use crate::report::{fmt_score, jsonl, rounded, Report};
use crate::stats::spearman;
use crate::text::{preprocess, PrepConfig, SynonymLexicon, TokenSeq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MetricId {
    #[serde(rename = "BLEU4")]
    Bleu4,
    #[serde(rename = "BLEUNORM")]
    BleuNorm,
    #[serde(rename = "BLEUCC")]
    BleuCc,
    #[serde(rename = "METEOR")]
    Meteor,
    #[serde(rename = "METEOR_NEXT")]
    MeteorNext,
    #[serde(rename = "ROUGE1")]
    Rouge1,
    #[serde(rename = "ROUGE2")]
    Rouge2,
    #[serde(rename = "ROUGEL")]
    RougeL,
    #[serde(rename = "TER")]
    Ter,
    #[serde(rename = "LOG_MNEXT")]
    LogMnext,
}

impl MetricId {
    /// The nine standard metrics of the correlation study, in row order.
    pub const STANDARD: [MetricId; 9] = [
        MetricId::Bleu4,
        MetricId::BleuNorm,
        MetricId::BleuCc,
        MetricId::Meteor,
        MetricId::MeteorNext,
        MetricId::Rouge1,
        MetricId::Rouge2,
        MetricId::RougeL,
        MetricId::Ter,
    ];

    pub const ALL: [MetricId; 10] = [
        MetricId::Bleu4,
        MetricId::BleuNorm,
        MetricId::BleuCc,
        MetricId::Meteor,
        MetricId::MeteorNext,
        MetricId::Rouge1,
        MetricId::Rouge2,
        MetricId::RougeL,
        MetricId::Ter,
        MetricId::LogMnext,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricId::Bleu4 => "BLEU4",
            MetricId::BleuNorm => "BLEUNORM",
            MetricId::BleuCc => "BLEUCC",
            MetricId::Meteor => "METEOR",
            MetricId::MeteorNext => "METEOR_NEXT",
            MetricId::Rouge1 => "ROUGE1",
            MetricId::Rouge2 => "ROUGE2",
            MetricId::RougeL => "ROUGEL",
            MetricId::Ter => "TER",
            MetricId::LogMnext => "LOG_MNEXT",
        }
    }

    /// False only for TER, where fewer edits is better.
    pub fn higher_is_better(self) -> bool {
        self != MetricId::Ter
    }

    fn is_bleu(self) -> bool {
        matches!(self, MetricId::Bleu4 | MetricId::BleuNorm | MetricId::BleuCc)
    }

    fn is_meteor(self) -> bool {
        matches!(self, MetricId::Meteor | MetricId::MeteorNext | MetricId::LogMnext)
    }

    /// Whether toggling `factor` can change this metric's score.
    pub fn honours(self, factor: Factor) -> bool {
        match factor {
            Factor::Length => self.is_bleu(),
            Factor::WordOrder | Factor::Semantics => self.is_meteor(),
            Factor::CaseFolding | Factor::Punctuation => true,
            Factor::Smoothing => self == MetricId::Bleu4,
        }
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_uppercase();
        Ok(match key.as_str() {
            "BLEU4" | "BLEU" => MetricId::Bleu4,
            "BLEUNORM" => MetricId::BleuNorm,
            "BLEUCC" => MetricId::BleuCc,
            "METEOR" => MetricId::Meteor,
            "METEORNEXT" => MetricId::MeteorNext,
            "ROUGE1" => MetricId::Rouge1,
            "ROUGE2" => MetricId::Rouge2,
            "ROUGEL" => MetricId::RougeL,
            "TER" => MetricId::Ter,
            "LOGMNEXT" => MetricId::LogMnext,
            _ => return Err(format!("unknown metric `{s}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Length,
    WordOrder,
    Semantics,
    CaseFolding,
    Punctuation,
    Smoothing,
}

impl Factor {
    pub const ALL: [Factor; 6] = [
        Factor::Length,
        Factor::WordOrder,
        Factor::Semantics,
        Factor::CaseFolding,
        Factor::Punctuation,
        Factor::Smoothing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Factor::Length => "length",
            Factor::WordOrder => "word_order",
            Factor::Semantics => "semantics",
            Factor::CaseFolding => "case",
            Factor::Punctuation => "punctuation",
            Factor::Smoothing => "smoothing",
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Factor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "length" => Factor::Length,
            "word_order" | "order" => Factor::WordOrder,
            "semantics" => Factor::Semantics,
            "case" | "case_folding" => Factor::CaseFolding,
            "punctuation" | "punctuation_removal" => Factor::Punctuation,
            "smoothing" => Factor::Smoothing,
            other => return Err(format!("unknown factor `{other}`")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothingFactor {
    #[default]
    Off,
    Norm,
    Cc,
}

/// On/off switches for the six factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorSet {
    pub length: bool,
    pub word_order: bool,
    pub semantics: bool,
    pub case_folding: bool,
    pub punctuation_removal: bool,
    pub smoothing: SmoothingFactor,
    /// How the METEOR family treats order when `word_order` is off.
    pub unordered: WordOrder,
}

impl FactorSet {
    /// The factor settings of each metric as originally formulated.
    pub fn default_for(metric: MetricId) -> Self {
        let meteor = metric.is_meteor();
        FactorSet {
            length: true,
            word_order: true,
            semantics: true,
            case_folding: meteor,
            punctuation_removal: metric == MetricId::LogMnext,
            smoothing: SmoothingFactor::Off,
            unordered: WordOrder::SingleChunk,
        }
    }

    pub fn with(mut self, factor: Factor, on: bool) -> Self {
        match factor {
            Factor::Length => self.length = on,
            Factor::WordOrder => self.word_order = on,
            Factor::Semantics => self.semantics = on,
            Factor::CaseFolding => self.case_folding = on,
            Factor::Punctuation => self.punctuation_removal = on,
            Factor::Smoothing => {
                self.smoothing = if on { SmoothingFactor::Norm } else { SmoothingFactor::Off }
            }
        }
        self
    }

    pub fn prep(&self) -> PrepConfig {
        PrepConfig {
            lowercase: self.case_folding,
            strip_punctuation: self.punctuation_removal,
        }
    }

    /// Applies `name=on,name=off,...` overrides; `smoothing` also accepts `norm` and `cc`.
    pub fn apply_overrides(mut self, spec: &str) -> Result<Self> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("factor override `{item}` is not name=value")))?;
            let factor: Factor = name.parse().map_err(Error::InvalidInput)?;
            let value = value.trim().to_ascii_lowercase();
            if factor == Factor::Smoothing && matches!(value.as_str(), "norm" | "cc") {
                self.smoothing = if value == "norm" { SmoothingFactor::Norm } else { SmoothingFactor::Cc };
                continue;
            }
            let on = match value.as_str() {
                "on" | "true" | "1" | "yes" => true,
                "off" | "false" | "0" | "no" => false,
                _ => return Err(Error::InvalidInput(format!("factor value `{value}` is not on/off"))),
            };
            self = self.with(factor, on);
        }
        Ok(self)
    }
}

/// Everything besides the factors that a metric needs.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricParams {
    pub meteor: MeteorParams,
    pub meteor_next: MeteorParams,
    pub bleu_cc: CcOptions,
    pub rouge_l: RougeLMode,
    /// Negate lower-is-better metrics before correlating with human scores.
    pub orient_for_correlation: bool,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            meteor: MeteorParams::classic(),
            meteor_next: MeteorParams::next(),
            bleu_cc: CcOptions::default(),
            rouge_l: RougeLMode::Recall,
            orient_for_correlation: true,
        }
    }
}

/// Scores a raw string pair. Preprocessing follows the case and punctuation factors.
pub fn score_with_factors(
    pred: &str,
    reference: &str,
    metric: MetricId,
    factors: &FactorSet,
    lexicon: &SynonymLexicon,
    params: &MetricParams,
) -> Result<f64> {
    let prep = factors.prep();
    score_tokens_with_factors(
        &preprocess(pred, prep),
        &preprocess(reference, prep),
        metric,
        factors,
        lexicon,
        params,
    )
}

/// Scores tokens as given; the case and punctuation factors are not re-applied.
pub fn score_tokens_with_factors(
    pred: &TokenSeq,
    reference: &TokenSeq,
    metric: MetricId,
    factors: &FactorSet,
    lexicon: &SynonymLexicon,
    params: &MetricParams,
) -> Result<f64> {
    match metric {
        MetricId::Bleu4 | MetricId::BleuNorm | MetricId::BleuCc => {
            let smoothing = match metric {
                MetricId::BleuNorm => Smoothing::Norm,
                MetricId::BleuCc => Smoothing::Cc,
                _ => match factors.smoothing {
                    SmoothingFactor::Off => Smoothing::None,
                    SmoothingFactor::Norm => Smoothing::Norm,
                    SmoothingFactor::Cc => Smoothing::Cc,
                },
            };
            let cfg = BleuConfig {
                smoothing,
                use_brevity_penalty: factors.length,
                cc: params.bleu_cc,
                ..BleuConfig::default()
            };
            bleu4(pred, reference, &cfg)
        }
        MetricId::Rouge1 => rouge_n(pred, reference, 1),
        MetricId::Rouge2 => rouge_n(pred, reference, 2),
        MetricId::RougeL => rouge_l_with(pred, reference, params.rouge_l),
        MetricId::Ter => ter(pred, reference),
        MetricId::Meteor | MetricId::MeteorNext | MetricId::LogMnext => {
            let (base, frag_mode) = match metric {
                MetricId::Meteor => (params.meteor, FragMode::MeteorClassic),
                MetricId::MeteorNext => (params.meteor_next, FragMode::MeteorClassic),
                _ => (params.meteor_next, FragMode::LogMnext),
            };
            let meteor_params = MeteorParams {
                matchers: if factors.semantics { base.matchers } else { Matchers::EXACT_ONLY },
                word_order: if factors.word_order { base.word_order } else { factors.unordered },
                frag_mode,
                ..base
            };
            if reference.is_empty() {
                return Err(Error::InvalidReference("reference has no tokens".into()));
            }
            Ok(score_tokens(pred, reference, &meteor_params, lexicon).score)
        }
    }
}

/// Correlation between metric scores and human means, with or without a factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationCell {
    pub metric: MetricId,
    pub factor: Factor,
    /// `None` when the correlation is undefined.
    pub without_value: Option<f64>,
    /// One entry, or two (`+1` and neighbour-averaged) for BLEU4 smoothing.
    pub with_values: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationRow {
    pub metric: MetricId,
    pub cells: Vec<AblationCell>,
    /// Correlation of the metric under its own default factors.
    pub clean: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AblationGrid {
    pub rows: Vec<AblationRow>,
}

pub const GRID_HEADER: &str = "metric,factor,without,with,clean";

impl Report for AblationGrid {
    fn table(&self) -> String {
        let mut out = format!("{GRID_HEADER}\n");
        for row in &self.rows {
            for cell in &row.cells {
                let with: Vec<String> = cell.with_values.iter().map(|v| fmt_score(*v)).collect();
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.metric,
                    cell.factor,
                    fmt_score(cell.without_value),
                    with.join(";"),
                    fmt_score(row.clean)
                ));
            }
        }
        out
    }

    fn structured(&self) -> String {
        #[derive(Serialize)]
        struct Line {
            metric: MetricId,
            factor: Factor,
            without: Option<f64>,
            with: Vec<Option<f64>>,
            clean: Option<f64>,
        }
        jsonl(self.rows.iter().flat_map(|row| {
            row.cells.iter().map(move |cell| Line {
                metric: row.metric,
                factor: cell.factor,
                without: rounded(cell.without_value, 4),
                with: cell.with_values.iter().map(|v| rounded(*v, 4)).collect(),
                clean: rounded(row.clean, 4),
            })
        }))
    }
}

/// Spearman correlation of a metric under `factors` with the human means.
/// Pairs on which the metric is undefined are left out.
pub fn correlate_factors(
    pairs: &[AnnotatedPair],
    metric: MetricId,
    factors: &FactorSet,
    lexicon: &SynonymLexicon,
    params: &MetricParams,
) -> Option<f64> {
    let sign = if params.orient_for_correlation && !metric.higher_is_better() { -1.0 } else { 1.0 };
    let (scores, human): (Vec<f64>, Vec<f64>) = pairs
        .iter()
        .filter_map(|p| {
            score_with_factors(&p.pair.prediction, &p.pair.reference, metric, factors, lexicon, params)
                .ok()
                .map(|s| (sign * s, p.mean_score))
        })
        .unzip();
    spearman(&scores, &human).ok().map(|r| r.rho)
}

/// Correlation grid: for each metric and factor, the correlation with the
/// factor off and on (other factors at the metric's defaults), plus the
/// metric's default-configuration correlation.
pub fn ablation_table(
    pairs: &[AnnotatedPair],
    metrics: &[MetricId],
    lexicon: &SynonymLexicon,
    params: &MetricParams,
) -> Result<AblationGrid> {
    if pairs.len() < crate::stats::MIN_CORRELATION_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "ablation needs at least {} annotated pairs, got {}",
            crate::stats::MIN_CORRELATION_SAMPLES,
            pairs.len()
        )));
    }

    // Every (metric, factor set) evaluation, flattened so rayon can spread them.
    let mut jobs: Vec<(MetricId, FactorSet)> = Vec::new();
    for &metric in metrics {
        let defaults = FactorSet::default_for(metric);
        jobs.push((metric, defaults));
        for factor in Factor::ALL {
            jobs.push((metric, defaults.with(factor, false)));
            if factor == Factor::Smoothing && metric == MetricId::Bleu4 {
                jobs.push((metric, FactorSet { smoothing: SmoothingFactor::Norm, ..defaults }));
                jobs.push((metric, FactorSet { smoothing: SmoothingFactor::Cc, ..defaults }));
            } else {
                jobs.push((metric, defaults.with(factor, true)));
            }
        }
    }
    let values: Vec<Option<f64>> = jobs
        .par_iter()
        .map(|(metric, factors)| correlate_factors(pairs, *metric, factors, lexicon, params))
        .collect();

    let mut values = values.into_iter();
    let mut next = || values.next().expect("one value per job");
    let rows = metrics
        .iter()
        .map(|&metric| {
            let clean = next();
            let cells = Factor::ALL
                .iter()
                .map(|&factor| {
                    let without_value = next();
                    let mut with_values = vec![next()];
                    if factor == Factor::Smoothing && metric == MetricId::Bleu4 {
                        with_values.push(next());
                    }
                    AblationCell {
                        metric,
                        factor,
                        without_value,
                        with_values,
                    }
                })
                .collect();
            AblationRow { metric, cells, clean }
        })
        .collect();
    Ok(AblationGrid { rows })
}
