//! Correlation of each metric with human judgements, each factor off and on.
//!
//! cargo run --example factor_ablation [-- annotations.jsonl]

use cmg_eval::ablation::{ablation_table, MetricId, MetricParams};
use cmg_eval::corpus::load_annotations;
use cmg_eval::report::Report;
use cmg_eval::text::SynonymLexicon;

fn main() -> cmg_eval::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/annotations_synthetic.jsonl").into());
    let pairs = load_annotations(path)?;
    let grid = ablation_table(&pairs, &MetricId::STANDARD, &SynonymLexicon::bundled(), &MetricParams::default())?;
    print!("{}", grid.table());
    Ok(())
}
