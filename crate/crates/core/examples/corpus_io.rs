//! Loading and writing the JSONL formats: prediction/reference pairs,
//! annotated pairs and commit records.

use cmg_eval::corpus::{load_annotations, load_commit_corpus, load_pairs, write_jsonl, Lang};

fn main() -> cmg_eval::Result<()> {
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/data");
    let annotated = load_annotations(format!("{data}/annotations_synthetic.jsonl"))?;
    println!("{} annotated pairs, first mean {:.3}", annotated.len(), annotated[0].mean_score);

    let commits = load_commit_corpus(format!("{data}/commits_train.jsonl"))?;
    for lang in Lang::REPORTED {
        let n = commits.iter().filter(|c| c.lang == lang).count();
        println!("{:<5} {n} commits", lang.label());
    }

    let pairs: Vec<_> = annotated.into_iter().map(|a| a.pair).collect();
    let out = std::env::temp_dir().join("cmg_eval_pairs.jsonl");
    write_jsonl(&pairs, &out)?;
    assert_eq!(load_pairs(&out)?, pairs);
    println!("round-tripped {} pairs through {}", pairs.len(), out.display());
    Ok(())
}
