//! Nearest-neighbour retrieval baseline on the bundled toy corpus and the
//! per-language Log-MNEXT report.
//!
//! cargo run --example nngen_baseline [-- train.jsonl test.jsonl]

use cmg_eval::ablation::MetricParams;
use cmg_eval::cli::language_report;
use cmg_eval::corpus::load_commit_corpus;
use cmg_eval::nngen::{generate, generate_pairs, RetrievalIndex, DEFAULT_K};
use cmg_eval::report::Report;
use cmg_eval::text::SynonymLexicon;

fn main() -> cmg_eval::Result<()> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let mut args = std::env::args().skip(1);
    let train = args.next().unwrap_or_else(|| format!("{data}/commits_train.jsonl"));
    let test = args.next().unwrap_or_else(|| format!("{data}/commits_test.jsonl"));

    let index = RetrievalIndex::build(load_commit_corpus(train)?);
    let test = load_commit_corpus(test)?;

    let g = generate(&test[0].diff, &index, DEFAULT_K)?;
    println!(
        "{}: retrieved {:?} from {} (cosine {:.3}, bleu {:.3})",
        test[0].id, g.message, g.provenance, g.similarity, g.bleu
    );

    let pairs = generate_pairs(&test, &index, DEFAULT_K)?;
    let report = language_report("NNGen", &pairs, &SynonymLexicon::bundled(), &MetricParams::default());
    print!("{}", report.table());
    Ok(())
}
