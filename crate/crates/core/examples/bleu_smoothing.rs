//! BLEU4 without smoothing, with `+1` smoothing and with neighbour averaging.
//!
//! Short commit messages rarely share a 4-gram, so unsmoothed BLEU4 is
//! usually 0 even for near-paraphrases.

use cmg_eval::ngram::{bleu4, BleuConfig, Smoothing};
use cmg_eval::text::{preprocess, PrepConfig};

fn main() {
    let cases = [
        ("fix npe in parser", "fix null pointer exception in parser"),
        ("update version to 2.1.0", "bump version to 2.1.0"),
        ("the cat sat on the mat", "the cat sat on the mat"),
    ];
    println!("{:<28} {:>8} {:>8} {:>8}", "prediction", "none", "norm", "cc");
    for (pred, reference) in cases {
        let p = preprocess(pred, PrepConfig::RAW);
        let r = preprocess(reference, PrepConfig::RAW);
        let score = |s| bleu4(&p, &r, &BleuConfig::with_smoothing(s)).unwrap();
        println!(
            "{pred:<28} {:>8.4} {:>8.4} {:>8.4}",
            score(Smoothing::None),
            score(Smoothing::Norm),
            score(Smoothing::Cc)
        );
    }
}
