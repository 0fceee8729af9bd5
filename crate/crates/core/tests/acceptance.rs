//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on any failure.

mod common;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cmg_eval::ablation::{Factor, FactorSet, MetricId, MetricParams, score_with_factors};
use cmg_eval::cli::{cmd_ablate, cmd_baseline, cmd_score, language_report, score_pairs, AblateArgs, BaselineArgs, CommonArgs, ScoreArgs};
use cmg_eval::corpus::{load_commit_corpus, write_jsonl, CommitRecord};
use cmg_eval::edit::{edit_summary, ter};
use cmg_eval::meteor::{align, log_mnext, match_unigrams, meteor, meteor_next, MeteorParams};
use cmg_eval::ngram::{bleu4, lcs_len, rouge_l, rouge_n, BleuConfig, Smoothing};
use cmg_eval::nngen::{generate, RetrievalIndex};
use cmg_eval::report::{fmt_percent, Report, ReportFormat};
use cmg_eval::stats::spearman;
use cmg_eval::text::{preprocess, PrepConfig, SynonymLexicon, TokenSeq};
use common::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn within(elapsed: Duration, limit_secs: u64) -> Outcome {
    if elapsed > Duration::from_secs(limit_secs) {
        Err(format!("took {elapsed:?}, limit {limit_secs}s"))
    } else {
        Ok(String::new())
    }
}

fn common_args() -> CommonArgs {
    CommonArgs {
        synonyms: None,
        params: None,
        out: None,
        format: ReportFormat::Table,
        jobs: None,
    }
}

fn zero_scores() -> Outcome {
    let raw = |s| preprocess(s, PrepConfig::RAW);
    let bleu = bleu4(
        &raw("added chain diagram"),
        &raw("added chain of responsibility class diagram"),
        &BleuConfig::with_smoothing(Smoothing::None),
    )
    .map_err(|e| e.to_string())?;
    ensure!(bleu == 0.0, "BLEU4 = {bleu}");

    let (pred, reference) = (raw("Update change"), raw("Updated changes"));
    let rouge = rouge_n(&pred, &reference, 1).map_err(|e| e.to_string())?;
    ensure!(rouge == 0.0, "ROUGE-1 = {rouge}");
    let m = meteor(&pred, &reference, &MeteorParams::classic(), &SynonymLexicon::bundled());
    ensure!(m.score > 0.0, "METEOR = {}", m.score);
    Ok(format!("BLEU4 0, ROUGE-1 0, METEOR {:.4}", m.score))
}

fn identity_branch() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(5);
    let params = MeteorParams::log_mnext();
    let lex = SynonymLexicon::bundled();
    let mut multi = 0;
    for _ in 0..1000 {
        let s = random_message(&mut rng, 12);
        let log = log_mnext(&s, &s, &params, &lex).score;
        ensure!(log == 1.0, "log_mnext({s:?}, same) = {log}");
        let toks = preprocess(&s, PrepConfig::CLEAN);
        if toks.len() >= 2 {
            multi += 1;
            let next = meteor_next(&toks, &toks, &params, &lex).score;
            ensure!(next < 1.0, "meteor_next({s:?}, same) = {next}");
        }
    }
    within(start.elapsed(), 5)?;
    Ok(format!("1000 strings, {multi} with >= 2 tokens"))
}

fn oracle_suites() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(11);
    let letters = ["a", "b", "c", "d"];

    for _ in 0..1000 {
        let a = random_words(&mut rng, 8, &letters);
        let mut b = random_words(&mut rng, 8, &letters);
        if b.is_empty() {
            b.push("a");
        }
        let (ta, tb) = (TokenSeq::from_words(&a), TokenSeq::from_words(&b));
        let expected = lcs_oracle(&a, &b);
        ensure!(lcs_len(&ta, &tb) == expected, "LCS {a:?} {b:?}");
        let r = rouge_l(&ta, &tb).map_err(|e| e.to_string())?;
        ensure!(r == expected as f64 / b.len() as f64, "ROUGE-L {a:?} {b:?} = {r}");
    }

    for _ in 0..1000 {
        let a = random_words(&mut rng, 6, &letters);
        let b = random_words(&mut rng, 6, &letters);
        let (ta, tb) = (TokenSeq::from_words(&a), TokenSeq::from_words(&b));
        let expected = edit_distance_oracle(&a, &b);
        ensure!(edit_summary(&ta, &tb).total() == expected, "edits {a:?} {b:?}");
        if !b.is_empty() {
            let t = ter(&ta, &tb).map_err(|e| e.to_string())?;
            ensure!(t == expected as f64 / b.len() as f64, "TER {a:?} {b:?} = {t}");
        }
    }

    let words = ["fix", "fixed", "repair", "bug", "bugs", "the", "a", "remove", "delete", "test"];
    let params = MeteorParams::classic();
    let lex = SynonymLexicon::bundled();
    for _ in 0..500 {
        let a = random_words(&mut rng, 7, &words);
        let b = random_words(&mut rng, 7, &words);
        let (ta, tb) = (TokenSeq::from_words(&a), TokenSeq::from_words(&b));
        let ms = match_unigrams(&ta, &tb, &params, &lex);
        let got = align(&ms, ta.len(), tb.len());
        let (best_matches, best_chunks) = exhaustive_alignment(&ms, ta.len());
        ensure!(
            (got.matched(), got.chunk_count) == (best_matches, best_chunks),
            "alignment {a:?} {b:?}: got ({}, {}), oracle ({best_matches}, {best_chunks})",
            got.matched(),
            got.chunk_count
        );
    }
    within(start.elapsed(), 60)?;
    Ok("LCS 1000, TER 1000, alignment 500".into())
}

fn spearman_checks() -> Outcome {
    let mut rng = StdRng::seed_from_u64(17);
    let rho = |x: &[f64], y: &[f64]| spearman(x, y).map(|r| r.rho).map_err(|e| e.to_string());
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(3..=50);
        let mut xs: Vec<f64> = (0..n).map(|i| i as f64 + rng.gen::<f64>() * 0.5).collect();
        let mut ys = xs.clone();
        xs.shuffle(&mut rng);
        ys.shuffle(&mut rng);
        let got = rho(&xs, &ys)?;
        let expected = spearman_closed_form(&xs, &ys);
        worst = worst.max((got - expected).abs());
        ensure!((got - expected).abs() <= 1e-12, "closed form {got} vs {expected}");

        // Includes tied values: a monotone map must not move the result at all.
        let zs: Vec<f64> = (0..n).map(|_| rng.gen_range(0..6) as f64).collect();
        if let Ok(base) = rho(&zs, &ys) {
            let mapped: Vec<f64> = zs.iter().map(|z| z.exp() * 3.0 + z.powi(3)).collect();
            ensure!(rho(&mapped, &ys)? == base, "monotone transform changed rho");
        }
        let mapped: Vec<f64> = xs.iter().map(|x| 2.0 * x + 7.0).collect();
        ensure!(rho(&mapped, &ys)? == got, "affine transform changed rho");
    }
    let half = rho(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0])?;
    ensure!(half == 0.5, "[1,2,3] vs [1,3,2] = {half}");
    Ok(format!("max closed-form error {worst:.1e}"))
}

fn ablation_contract() -> Outcome {
    let annotations = data_path("annotations_synthetic.jsonl");
    let run = |jobs| {
        cmd_ablate(&AblateArgs {
            annotations: annotations.clone(),
            metrics: vec![],
            common: CommonArgs { jobs, ..common_args() },
        })
        .map_err(|e| e.to_string())
    };
    let grid = run(None)?;
    ensure!(grid.rows.len() == 9, "{} metric rows", grid.rows.len());
    let mut no_change = 0;
    for row in &grid.rows {
        let factors: Vec<Factor> = row.cells.iter().map(|c| c.factor).collect();
        ensure!(factors == Factor::ALL, "{} has factors {factors:?}", row.metric.name());
        for cell in &row.cells {
            let two = row.metric == MetricId::Bleu4 && cell.factor == Factor::Smoothing;
            ensure!(cell.with_values.len() == if two { 2 } else { 1 }, "{:?}", cell);
            if !row.metric.honours(cell.factor) {
                no_change += 1;
                ensure!(cell.with_values[0] == cell.without_value, "no-change cell differs: {:?}", cell);
            }
        }
    }
    let table = grid.table();
    ensure!(table.starts_with("metric,factor,without,with,clean\n"), "header");
    ensure!(table.lines().skip(1).all(|l| l.split(',').count() == 5), "every line has a clean column");
    for jobs in [None, Some(1), Some(3), Some(8)] {
        let again = run(jobs)?;
        ensure!(again.table() == table && again.structured() == grid.structured(), "output differs with --jobs {jobs:?}");
    }
    Ok(format!("9x6 grid, {no_change} no-change cells, identical across runs and --jobs"))
}

fn end_to_end_report() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let output = cmd_baseline(&BaselineArgs {
        train: data_path("commits_train.jsonl"),
        test: data_path("commits_test.jsonl"),
        k: 5,
        report: None,
        model_name: "NNGen".into(),
        common: common_args(),
    })
    .map_err(|e| e.to_string())?;
    let pairs_path: PathBuf = dir.path().join("pairs.jsonl");
    write_jsonl(&output.pairs, &pairs_path).map_err(|e| e.to_string())?;
    let scores = cmd_score(&ScoreArgs {
        pairs: pairs_path,
        metrics: vec!["LOG_MNEXT".into()],
        factors: None,
        common: common_args(),
    })
    .map_err(|e| e.to_string())?;

    let table = output.report.table();
    let mut lines = table.lines();
    ensure!(lines.next() == Some("model,C++,C#,Java,JS,Py,Avg"), "header: {table}");
    let row: Vec<&str> = lines.next().ok_or("no model row")?.split(',').collect();
    ensure!(row.len() == 7 && row[1..].iter().all(|v| v.parse::<f64>().is_ok()), "row {row:?}");
    ensure!(scores.rows.len() == 40 && scores.means[0].is_some(), "score report");
    within(start.elapsed(), 30)?;
    Ok(format!("200 commits, avg {} / overall {}", row[6], fmt_percent(scores.means[0])))
}

fn retrieval_sanity() -> Outcome {
    let train = load_commit_corpus(data_path("commits_train.jsonl")).map_err(|e| e.to_string())?;
    let lex = SynonymLexicon::bundled();
    let params = MetricParams::default();

    let index = RetrievalIndex::build(train.clone());
    let subset: Vec<CommitRecord> = train.iter().step_by(4).cloned().collect();
    let generated = cmg_eval::nngen::generate_pairs(&subset, &index, 5).map_err(|e| e.to_string())?;
    let pairs: Vec<_> = generated.iter().map(|(p, _)| p.clone()).collect();
    let report = score_pairs(&pairs, &[MetricId::LogMnext], None, &lex, &params).map_err(|e| e.to_string())?;
    ensure!(fmt_percent(report.means[0]) == "100.00", "test ⊆ train mean {:?}", report.means[0]);
    let per_lang = language_report("NNGen", &generated, &lex, &params);
    ensure!(per_lang.rows[0].average == Some(100.0), "per-language average {:?}", per_lang.rows[0].average);

    // k = |index|: the choice must be the best BLEU over everything, ties
    // going to the higher cosine and then the earlier record.
    let small: Vec<CommitRecord> = train.iter().take(100).cloned().collect();
    let index = RetrievalIndex::build(small.clone());
    let prep = PrepConfig { lowercase: true, strip_punctuation: false };
    let cfg = BleuConfig::with_smoothing(Smoothing::Norm);
    let tokens: Vec<TokenSeq> = small.iter().map(|r| preprocess(&r.diff, prep)).collect();
    let words = |t: &TokenSeq| t.surfaces().map(str::to_string).collect::<Vec<_>>();
    let bags: Vec<Vec<String>> = tokens.iter().map(words).collect();
    let queries = load_commit_corpus(data_path("commits_test.jsonl")).map_err(|e| e.to_string())?;
    for q in &queries {
        let qt = preprocess(&q.diff, prep);
        let qwords = words(&qt);
        let qbag = term_counts(&qwords);
        let candidates: Vec<(f64, f64, usize)> = (0..small.len())
            .map(|i| {
                let cos = cosine_oracle(&term_counts(&bags[i]), &qbag);
                let b = bleu4(&tokens[i], &qt, &cfg).unwrap_or(0.0);
                (b, cos, i)
            })
            .collect();
        let best_bleu = candidates.iter().map(|c| c.0).fold(f64::MIN, f64::max);
        let top: Vec<_> = candidates.iter().filter(|c| best_bleu - c.0 < 1e-12).collect();
        let best_cos = top.iter().map(|c| c.1).fold(f64::MIN, f64::max);
        let expected = top.iter().find(|c| best_cos - c.1 < 1e-12).unwrap().2;
        let got = generate(&q.diff, &index, index.len()).map_err(|e| e.to_string())?;
        ensure!(got.provenance == small[expected].id, "{}: got {}, oracle {}", q.id, got.provenance, small[expected].id);
    }
    Ok(format!("subset mean 100.00, {} exhaustive queries agree", queries.len()))
}

fn range_invariants() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(23);
    let lex = SynonymLexicon::bundled();
    let params = MetricParams::default();
    let defaults: Vec<(MetricId, FactorSet)> = MetricId::ALL.iter().map(|&m| (m, FactorSet::default_for(m))).collect();
    for _ in 0..10_000 {
        let reference = random_message(&mut rng, 10);
        let pred = if rng.gen_bool(0.05) { String::new() } else { random_message(&mut rng, 10) };
        for (metric, factors) in &defaults {
            let Ok(v) = score_with_factors(&pred, &reference, *metric, factors, &lex, &params) else {
                continue;
            };
            if *metric == MetricId::Ter {
                ensure!(v >= 0.0, "TER {v} for {pred:?} / {reference:?}");
            } else {
                ensure!((0.0..=1.0).contains(&v), "{} = {v} for {pred:?} / {reference:?}", metric.name());
            }
            if *metric == MetricId::BleuNorm && !preprocess(&pred, factors.prep()).is_empty() {
                ensure!(v > 0.0, "BLEUNorm 0 for {pred:?} / {reference:?}");
            }
        }
        let (p, r) = (preprocess(&pred, PrepConfig::RAW), preprocess(&reference, PrepConfig::RAW));
        for smoothing in [Smoothing::None, Smoothing::Norm, Smoothing::Cc] {
            let on = BleuConfig::with_smoothing(smoothing);
            let off = BleuConfig { use_brevity_penalty: false, ..on };
            if let (Ok(a), Ok(b)) = (bleu4(&p, &r, &off), bleu4(&p, &r, &on)) {
                ensure!(a >= b, "BP-off {a} < BP-on {b} for {pred:?} / {reference:?}");
            }
        }
    }
    within(start.elapsed(), 30)?;
    Ok("10000 pairs".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("zero-score reproduction", zero_scores),
        ("identity branch of Log-MNEXT", identity_branch),
        ("oracle equivalence suites", oracle_suites),
        ("Spearman correctness", spearman_checks),
        ("ablation grid contract", ablation_contract),
        ("end-to-end per-language report", end_to_end_report),
        ("retrieval baseline sanity", retrieval_sanity),
        ("metric range invariants", range_invariants),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {}: {name} ({detail}; {ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
