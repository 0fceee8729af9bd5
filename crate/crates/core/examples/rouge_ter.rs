//! ROUGE-1/2/L recall and shift-free TER with its edit breakdown.

use cmg_eval::edit::{edit_summary, ter};
use cmg_eval::ngram::{lcs_len, rouge_l, rouge_l_with, rouge_n, RougeLMode};
use cmg_eval::text::{preprocess, PrepConfig};

fn main() {
    let pred = preprocess("add retry to http client", PrepConfig::CLEAN);
    let reference = preprocess("Add retry logic to the HTTP client", PrepConfig::CLEAN);

    println!("ROUGE-1    {:.4}", rouge_n(&pred, &reference, 1).unwrap());
    println!("ROUGE-2    {:.4}", rouge_n(&pred, &reference, 2).unwrap());
    println!("LCS        {}", lcs_len(&pred, &reference));
    println!("ROUGE-L    {:.4}", rouge_l(&pred, &reference).unwrap());
    println!("ROUGE-L F1 {:.4}", rouge_l_with(&pred, &reference, RougeLMode::F1).unwrap());

    let edits = edit_summary(&pred, &reference);
    println!(
        "TER        {:.4}  (sub {}, del {}, ins {})",
        ter(&pred, &reference).unwrap(),
        edits.substitutions,
        edits.deletions,
        edits.insertions
    );
}
