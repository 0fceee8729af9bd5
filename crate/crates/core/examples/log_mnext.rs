//! Log-MNEXT versus METEOR-NEXT. Log-MNEXT folds case, drops punctuation and
//! gives identical messages a perfect score.
//!
//! Pass a parameter file to try tuned values:
//! cargo run --example log_mnext -- params.conf

use cmg_eval::meteor::{log_mnext, meteor_next, MeteorParams};
use cmg_eval::text::{preprocess, PrepConfig, SynonymLexicon};

fn main() -> cmg_eval::Result<()> {
    let params = match std::env::args().nth(1) {
        Some(path) => MeteorParams::load(path)?,
        None => MeteorParams::log_mnext(),
    };
    let lex = SynonymLexicon::bundled();
    let cases = [
        ("Fix typo in README.", "fix typo in readme"),
        ("the cat sat on the mat", "the cat sat on the mat"),
        ("remove unused imports", "delete unused imports"),
        ("Refactor config loading", "update readme"),
    ];
    println!("{:<26} {:<26} {:>8} {:>8}", "prediction", "reference", "MNEXT", "Log-MN");
    for (pred, reference) in cases {
        let next = meteor_next(
            &preprocess(pred, PrepConfig::RAW),
            &preprocess(reference, PrepConfig::RAW),
            &params,
            &lex,
        );
        let log = log_mnext(pred, reference, &params, &lex);
        println!("{pred:<26} {reference:<26} {:>8.4} {:>8.4}", next.score, log.score);
    }
    Ok(())
}
