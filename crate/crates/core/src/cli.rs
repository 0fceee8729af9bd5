//! Command-line front end: `score`, `ablate`, `correlate` and `baseline`.
//!
//! Exit codes: 0 on success, 1 for validation and usage errors, 2 for I/O errors.

use std::collections::{HashMap, HashSet};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::ablation::{ablation_table, score_with_factors, AblationGrid, FactorSet, MetricId, MetricParams};
use crate::corpus::{load_annotations, load_commit_corpus, load_pairs, write_jsonl, EvalPair, Lang};
use crate::error::{Error, Result};
use crate::meteor::MeteorParams;
use crate::nngen::{generate_pairs, RetrievalIndex, DEFAULT_K};
use crate::report::{fmt_percent, fmt_score, jsonl, rounded, CorrelationReport, LanguageReport, LanguageRow, Report, ReportFormat};
use crate::stats::{corpus_mean, spearman};
use crate::text::SynonymLexicon;

/// Environment variable naming the default synonym file.
pub const SYNONYMS_ENV: &str = "CMG_EVAL_SYNONYMS";

#[derive(Debug, Parser)]
#[command(name = "cmg-eval", version, about = "Commit message generation evaluation metrics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score prediction/reference pairs with one or more metrics.
    Score(ScoreArgs),
    /// Correlate every metric with human scores, each factor off and on.
    Ablate(AblateArgs),
    /// Correlate a scores file with human annotations.
    Correlate(CorrelateArgs),
    /// Generate predictions with the nearest-neighbour retrieval baseline.
    Baseline(BaselineArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Synonym file, one synset per line. Defaults to the bundled list.
    #[arg(long, env = SYNONYMS_ENV)]
    pub synonyms: Option<PathBuf>,
    /// METEOR-NEXT / Log-MNEXT parameter file (`key = value` lines).
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Output path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "table", value_parser = parse_format)]
    pub format: ReportFormat,
    /// Worker threads. Results do not depend on this.
    #[arg(long)]
    pub jobs: Option<usize>,
}

fn parse_format(s: &str) -> std::result::Result<ReportFormat, String> {
    s.parse()
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub pairs: PathBuf,
    /// Metric name, repeatable, or ALL.
    #[arg(long = "metric")]
    pub metrics: Vec<String>,
    /// Factor overrides on top of each metric's defaults, e.g. `case=on,length=off`.
    #[arg(long)]
    pub factors: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AblateArgs {
    #[arg(long)]
    pub annotations: PathBuf,
    /// Metric rows, repeatable, or ALL. Defaults to the nine standard metrics.
    #[arg(long = "metric")]
    pub metrics: Vec<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CorrelateArgs {
    /// Output of `score` (table or structured).
    #[arg(long)]
    pub scores: PathBuf,
    #[arg(long)]
    pub annotations: PathBuf,
    /// Correlate TER as-is instead of negated.
    #[arg(long)]
    pub raw_orientation: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BaselineArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: usize,
    /// Also write a per-language Log-MNEXT report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value = "NNGen")]
    pub model_name: String,
    #[command(flatten)]
    pub common: CommonArgs,
}

impl CommonArgs {
    pub fn lexicon(&self) -> Result<SynonymLexicon> {
        match &self.synonyms {
            Some(path) => SynonymLexicon::load(path),
            None => Ok(SynonymLexicon::bundled()),
        }
    }

    pub fn metric_params(&self) -> Result<MetricParams> {
        let mut params = MetricParams::default();
        if let Some(path) = &self.params {
            params.meteor_next = MeteorParams::load(path)?;
        }
        Ok(params)
    }
}

/// Resolves `--metric` values; empty means `default`.
pub fn parse_metrics(values: &[String], default: &[MetricId]) -> Result<Vec<MetricId>> {
    if values.is_empty() {
        return Ok(default.to_vec());
    }
    let mut metrics = Vec::new();
    for value in values.iter().flat_map(|v| v.split(',')).map(str::trim).filter(|v| !v.is_empty()) {
        if value.eq_ignore_ascii_case("all") {
            for m in MetricId::ALL {
                if !metrics.contains(&m) {
                    metrics.push(m);
                }
            }
            continue;
        }
        let m: MetricId = value.parse().map_err(Error::InvalidInput)?;
        if !metrics.contains(&m) {
            metrics.push(m);
        }
    }
    Ok(metrics)
}

/// Per-pair metric scores plus corpus means as percentages.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub metrics: Vec<MetricId>,
    pub rows: Vec<(String, Vec<Option<f64>>)>,
    pub means: Vec<Option<f64>>,
}

pub const MEAN_ROW: &str = "#mean";

impl ScoreReport {
    pub fn column(&self, metric: MetricId) -> Option<Vec<Option<f64>>> {
        let idx = self.metrics.iter().position(|&m| m == metric)?;
        Some(self.rows.iter().map(|(_, v)| v[idx]).collect())
    }
}

impl Report for ScoreReport {
    fn table(&self) -> String {
        let mut out = String::from("id");
        for m in &self.metrics {
            out.push(',');
            out.push_str(m.name());
        }
        out.push('\n');
        for (id, values) in &self.rows {
            out.push_str(&csv_field(id));
            for v in values {
                out.push(',');
                out.push_str(&fmt_score(*v));
            }
            out.push('\n');
        }
        out.push_str(MEAN_ROW);
        for v in &self.means {
            out.push(',');
            out.push_str(&fmt_percent(*v));
        }
        out.push('\n');
        out
    }

    fn structured(&self) -> String {
        let object = |values: &[Option<f64>], places: i32| -> Map<String, Value> {
            self.metrics
                .iter()
                .zip(values)
                .map(|(m, v)| (m.name().to_string(), serde_json::json!(rounded(*v, places))))
                .collect()
        };
        let mut lines: Vec<Value> = self
            .rows
            .iter()
            .map(|(id, values)| serde_json::json!({ "id": id, "scores": object(values, 4) }))
            .collect();
        lines.push(serde_json::json!({ "mean": object(&self.means, 2) }));
        jsonl(lines)
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidInput("--jobs must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

pub fn score_pairs(
    pairs: &[EvalPair],
    metrics: &[MetricId],
    overrides: Option<&str>,
    lexicon: &SynonymLexicon,
    params: &MetricParams,
) -> Result<ScoreReport> {
    let factor_sets = metrics
        .iter()
        .map(|&m| match overrides {
            Some(spec) => FactorSet::default_for(m).apply_overrides(spec),
            None => Ok(FactorSet::default_for(m)),
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<(String, Vec<Option<f64>>)> = pairs
        .par_iter()
        .map(|p| {
            let values = metrics
                .iter()
                .zip(&factor_sets)
                .map(|(&m, f)| score_with_factors(&p.prediction, &p.reference, m, f, lexicon, params).ok())
                .collect();
            (p.id.clone(), values)
        })
        .collect();
    let means = (0..metrics.len())
        .map(|i| {
            let defined: Vec<f64> = rows.iter().filter_map(|(_, v)| v[i]).collect();
            corpus_mean(&defined).ok()
        })
        .collect();
    Ok(ScoreReport {
        metrics: metrics.to_vec(),
        rows,
        means,
    })
}

pub fn cmd_score(args: &ScoreArgs) -> Result<ScoreReport> {
    let pairs = load_pairs(&args.pairs)?;
    let metrics = parse_metrics(&args.metrics, &MetricId::ALL)?;
    let lexicon = args.common.lexicon()?;
    let params = args.common.metric_params()?;
    with_jobs(args.common.jobs, || {
        score_pairs(&pairs, &metrics, args.factors.as_deref(), &lexicon, &params)
    })?
}

pub fn cmd_ablate(args: &AblateArgs) -> Result<AblationGrid> {
    let pairs = load_annotations(&args.annotations)?;
    let metrics = parse_metrics(&args.metrics, &MetricId::STANDARD)?;
    let lexicon = args.common.lexicon()?;
    let params = args.common.metric_params()?;
    with_jobs(args.common.jobs, || ablation_table(&pairs, &metrics, &lexicon, &params))?
}

/// Metric columns read back from a `score` report, keyed by pair id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScoreColumns {
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<Option<f64>>)>,
}

fn parse_value(raw: &str, location: &str) -> Result<Option<f64>> {
    let raw = raw.trim();
    if raw == "NA" || raw.is_empty() {
        return Ok(None);
    }
    raw.parse::<f64>()
        .map(Some)
        .map_err(|_| Error::validation(location, format!("`{raw}` is not a number")))
}

pub fn read_scores(path: &Path) -> Result<ScoreColumns> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((first_idx, first)) = lines.next() else {
        return Ok(ScoreColumns::default());
    };
    let at = |idx: usize| format!("{}: line {}", path.display(), idx + 1);

    if first.trim_start().starts_with('{') {
        let mut out = ScoreColumns::default();
        for (idx, line) in std::iter::once((first_idx, first)).chain(lines) {
            let value: Value = serde_json::from_str(line).map_err(|e| Error::validation(at(idx), e.to_string()))?;
            let (Some(id), Some(scores)) = (value.get("id"), value.get("scores").and_then(Value::as_object)) else {
                continue;
            };
            let id = id.as_str().map(str::to_string).unwrap_or_else(|| id.to_string());
            if out.columns.is_empty() {
                out.columns = scores.keys().cloned().collect();
            }
            let row = out
                .columns
                .iter()
                .map(|c| scores.get(c).and_then(Value::as_f64))
                .collect();
            out.rows.push((id, row));
        }
        return Ok(out);
    }

    let header: Vec<&str> = first.split(',').map(str::trim).collect();
    if header.first() != Some(&"id") || header.len() < 2 {
        return Err(Error::validation(at(first_idx), "expected a header `id,<metric>,...`"));
    }
    let columns: Vec<String> = header[1..].iter().map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.starts_with('#') {
            continue;
        }
        let (id, rest) = split_id(line);
        let fields: Vec<&str> = rest.split(',').collect();
        if fields.len() != columns.len() {
            return Err(Error::validation(
                at(idx),
                format!("expected {} values, found {}", columns.len(), fields.len()),
            ));
        }
        let values = fields
            .iter()
            .map(|f| parse_value(f, &at(idx)))
            .collect::<Result<Vec<_>>>()?;
        rows.push((id, values));
    }
    Ok(ScoreColumns { columns, rows })
}

/// Splits off the (possibly quoted) id field of a CSV line.
fn split_id(line: &str) -> (String, &str) {
    if let Some(stripped) = line.strip_prefix('"') {
        let mut id = String::new();
        let mut chars = stripped.char_indices().peekable();
        while let Some((i, c)) = chars.next() {
            if c == '"' {
                if chars.peek().map(|&(_, n)| n) == Some('"') {
                    id.push('"');
                    chars.next();
                } else {
                    let rest = &stripped[i + 1..];
                    return (id, rest.strip_prefix(',').unwrap_or(rest));
                }
            } else {
                id.push(c);
            }
        }
        (id, "")
    } else {
        match line.split_once(',') {
            Some((id, rest)) => (id.to_string(), rest),
            None => (line.to_string(), ""),
        }
    }
}

pub fn cmd_correlate(args: &CorrelateArgs) -> Result<CorrelationReport> {
    let scores = read_scores(&args.scores)?;
    let annotations = load_annotations(&args.annotations)?;
    let human: HashMap<&str, f64> = annotations.iter().map(|a| (a.pair.id.as_str(), a.mean_score)).collect();
    let scored: HashSet<&str> = scores.rows.iter().map(|(id, _)| id.as_str()).collect();

    if let Some(missing) = annotations.iter().find(|a| !scored.contains(a.pair.id.as_str())) {
        return Err(Error::validation(
            args.scores.display().to_string(),
            format!("no scores for annotated id `{}`", missing.pair.id),
        ));
    }
    if let Some((missing, _)) = scores.rows.iter().find(|(id, _)| !human.contains_key(id.as_str())) {
        return Err(Error::validation(
            args.annotations.display().to_string(),
            format!("no annotation for scored id `{missing}`"),
        ));
    }

    let rows = scores
        .columns
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let negate = !args.raw_orientation
                && name.parse::<MetricId>().is_ok_and(|m| !m.higher_is_better());
            let sign = if negate { -1.0 } else { 1.0 };
            let (xs, ys): (Vec<f64>, Vec<f64>) = scores
                .rows
                .iter()
                .filter_map(|(id, values)| values[c].map(|v| (sign * v, human[id.as_str()])))
                .unzip();
            (name.clone(), spearman(&xs, &ys).ok())
        })
        .collect();
    Ok(CorrelationReport { rows })
}

/// Retrieved predictions and the per-language report.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineOutput {
    pub pairs: Vec<EvalPair>,
    pub report: LanguageReport,
}

pub fn cmd_baseline(args: &BaselineArgs) -> Result<BaselineOutput> {
    let train = load_commit_corpus(&args.train)?;
    if train.is_empty() {
        return Err(Error::validation(
            args.train.display().to_string(),
            "training corpus has no records",
        ));
    }
    let test = load_commit_corpus(&args.test)?;
    let lexicon = args.common.lexicon()?;
    let params = args.common.metric_params()?;
    with_jobs(args.common.jobs, || {
        let index = RetrievalIndex::build(train);
        let generated = generate_pairs(&test, &index, args.k)?;
        let report = language_report(&args.model_name, &generated, &lexicon, &params);
        Ok(BaselineOutput {
            pairs: generated.into_iter().map(|(p, _)| p).collect(),
            report,
        })
    })?
}

/// Mean Log-MNEXT percentage per language.
pub fn language_report(
    model: &str,
    pairs: &[(EvalPair, Lang)],
    lexicon: &SynonymLexicon,
    params: &MetricParams,
) -> LanguageReport {
    let factors = FactorSet::default_for(MetricId::LogMnext);
    let scores: Vec<(Lang, Option<f64>)> = pairs
        .par_iter()
        .map(|(p, lang)| {
            let s = score_with_factors(&p.prediction, &p.reference, MetricId::LogMnext, &factors, lexicon, params).ok();
            (*lang, s)
        })
        .collect();
    let per_lang = Lang::REPORTED.map(|lang| {
        let values: Vec<f64> = scores.iter().filter(|(l, _)| *l == lang).filter_map(|(_, s)| *s).collect();
        corpus_mean(&values).ok()
    });
    LanguageReport {
        metric: MetricId::LogMnext.name().to_string(),
        rows: vec![LanguageRow::new(model, per_lang)],
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Score(args) => emit(&cmd_score(args)?.render(args.common.format), args.common.out.as_deref()),
        Command::Ablate(args) => emit(&cmd_ablate(args)?.render(args.common.format), args.common.out.as_deref()),
        Command::Correlate(args) => {
            emit(&cmd_correlate(args)?.render(args.common.format), args.common.out.as_deref())
        }
        Command::Baseline(args) => {
            let output = cmd_baseline(args)?;
            match &args.common.out {
                Some(path) => write_jsonl(&output.pairs, path)?,
                None => emit(&jsonl(&output.pairs), None)?,
            }
            if let Some(path) = &args.report {
                emit(&output.report.render(args.common.format), Some(path))?;
            }
            Ok(())
        }
    }
}

/// Parses arguments and runs, mapping failures to the documented exit codes.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
