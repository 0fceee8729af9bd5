//! Tokenisation, case folding, punctuation stripping, stemming and synonyms.
//!
//! cargo run --example text_prep -- "Fixed NPE in Parser.parse()"

use cmg_eval::text::{preprocess, stem, tokenize, PrepConfig, SynonymLexicon};

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "Fixed NPE in Parser.parse(); removing casts".into());

    println!("raw:     {:?}", tokenize(&text).surfaces().collect::<Vec<_>>());
    println!("clean:   {:?}", preprocess(&text, PrepConfig::CLEAN).surfaces().collect::<Vec<_>>());
    let stems: Vec<String> = preprocess(&text, PrepConfig::CLEAN).tokens.iter().map(|t| t.stem.clone()).collect();
    println!("stems:   {stems:?}");

    for word in ["connection", "generalizations", "hopping", "relational"] {
        println!("stem({word}) = {}", stem(word));
    }

    let lex = SynonymLexicon::bundled();
    for (a, b) in [("fix", "repair"), ("remove", "delete"), ("fix", "delete")] {
        println!("synonyms({a}, {b}) = {}", lex.are_synonyms(a, b));
    }
}
