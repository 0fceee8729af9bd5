//! The METEOR matcher cascade and alignment: which tokens match, through
//! which module, and how many chunks the alignment forms.

use cmg_eval::meteor::{align, match_unigrams, meteor, MeteorParams};
use cmg_eval::text::{preprocess, PrepConfig, SynonymLexicon};

fn main() {
    let lex = SynonymLexicon::bundled();
    let params = MeteorParams::classic();
    let pred = preprocess("repair crashes when removing cached entries", PrepConfig::CLEAN);
    let reference = preprocess("fix crash when deleting cache entries", PrepConfig::CLEAN);

    let candidates = match_unigrams(&pred, &reference, &params, &lex);
    let alignment = align(&candidates, pred.len(), reference.len());
    for m in &alignment.matches {
        println!(
            "{:>10} -> {:<10} {:?}",
            pred.tokens[m.pred].surface, reference.tokens[m.reference].surface, m.matcher
        );
    }

    let s = meteor(&pred, &reference, &params, &lex);
    println!(
        "matches {} chunks {}  P {:.4} R {:.4} F {:.4} penalty {:.4}  METEOR {:.4}",
        s.matches, s.chunks, s.precision, s.recall, s.f_score, s.penalty, s.score
    );
}
