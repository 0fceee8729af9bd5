//! Scoring a pairs file with every metric at its default factors, the same
//! table the `score` subcommand prints.

use cmg_eval::ablation::{MetricId, MetricParams};
use cmg_eval::cli::score_pairs;
use cmg_eval::corpus::load_pairs;
use cmg_eval::report::Report;
use cmg_eval::text::SynonymLexicon;

fn main() -> cmg_eval::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/annotations_synthetic.jsonl").into());
    let pairs = load_pairs(path)?;
    let report = score_pairs(&pairs, &MetricId::ALL, None, &SynonymLexicon::bundled(), &MetricParams::default())?;
    print!("{}", report.table());
    Ok(())
}
