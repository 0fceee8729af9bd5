//! Evaluation metrics for commit message generation.
//!
//! Sentence-level BLEU4 (plain, `+1` smoothed, neighbour averaged),
//! ROUGE-1/2/L, shift-free TER, METEOR, METEOR-NEXT and Log-MNEXT, together
//! with factor ablation against human judgements, Spearman correlation and
//! a bag-of-words nearest-neighbour retrieval baseline.
//!
//! ```
//! use cmg_eval::meteor::{log_mnext, MeteorParams};
//! use cmg_eval::text::SynonymLexicon;
//!
//! let lex = SynonymLexicon::bundled();
//! let s = log_mnext("Fix NPE.", "fix npe", &MeteorParams::log_mnext(), &lex);
//! assert_eq!(s.score, 1.0);
//! ```

pub mod ablation;
pub mod cli;
pub mod corpus;
pub mod edit;
pub mod error;
pub mod meteor;
pub mod ngram;
pub mod nngen;
pub mod report;
pub mod stats;
pub mod text;

pub use error::{Error, Result};
