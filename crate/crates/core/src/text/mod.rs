//! Tokenization, case folding, punctuation removal and stemming.
//!
//! Every metric in this crate consumes a [`TokenSeq`]. Tokens carry the
//! form used for exact matching (`surface`), its ASCII lower-case fold and
//! its Porter stem.

mod porter;
mod synonyms;

pub use porter::stem;
pub use synonyms::SynonymLexicon;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    /// Form compared by exact matchers. Lower-cased when preprocessing folds case.
    pub surface: String,
    pub folded: String,
    pub stem: String,
}

impl Token {
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        let folded = surface.to_ascii_lowercase();
        let stem = stem(&folded);
        Token {
            surface,
            folded,
            stem,
        }
    }

    /// True if the token consists solely of ASCII punctuation.
    pub fn is_punctuation(&self) -> bool {
        is_punctuation_word(&self.surface)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSeq {
    pub tokens: Vec<Token>,
    pub source: String,
}

impl TokenSeq {
    /// Builds a sequence from pre-split words, without any transformation.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Self {
        let tokens: Vec<Token> = words.iter().map(|w| Token::new(w.as_ref())).collect();
        let source = words
            .iter()
            .map(AsRef::as_ref)
            .collect::<Vec<_>>()
            .join(" ");
        TokenSeq { tokens, source }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> + '_ {
        self.tokens.iter().map(|t| t.surface.as_str())
    }

    /// True if both sequences have the same surface forms in the same order.
    pub fn same_surfaces(&self, other: &TokenSeq) -> bool {
        self.len() == other.len() && self.surfaces().eq(other.surfaces())
    }
}

/// Preprocessing switches. All four combinations are valid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PrepConfig {
    pub lowercase: bool,
    pub strip_punctuation: bool,
}

impl PrepConfig {
    pub const RAW: PrepConfig = PrepConfig {
        lowercase: false,
        strip_punctuation: false,
    };
    pub const CLEAN: PrepConfig = PrepConfig {
        lowercase: true,
        strip_punctuation: true,
    };
}

fn is_punctuation_word(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_punctuation())
}

/// Splits on whitespace and detaches leading and trailing ASCII punctuation,
/// one token per punctuation character. Inner punctuation (`v1.2`,
/// `user_id`) stays attached.
pub fn tokenize(text: &str) -> TokenSeq {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let lead = chunk
            .bytes()
            .take_while(u8::is_ascii_punctuation)
            .count();
        let rest = &chunk[lead..];
        let trail = rest
            .bytes()
            .rev()
            .take_while(u8::is_ascii_punctuation)
            .count();
        let core = &rest[..rest.len() - trail];

        // ASCII punctuation is single-byte, so every index here is a char boundary.
        for i in 0..lead {
            tokens.push(Token::new(&chunk[i..i + 1]));
        }
        if !core.is_empty() {
            tokens.push(Token::new(core));
        }
        let tail = &rest[core.len()..];
        for i in 0..tail.len() {
            tokens.push(Token::new(&tail[i..i + 1]));
        }
    }
    TokenSeq {
        tokens,
        source: text.to_string(),
    }
}

/// Tokenizes, then optionally folds case and drops all-punctuation tokens.
pub fn preprocess(text: &str, cfg: PrepConfig) -> TokenSeq {
    let mut seq = tokenize(text);
    if cfg.lowercase {
        for token in &mut seq.tokens {
            if token.surface != token.folded {
                token.surface = token.folded.clone();
            }
        }
    }
    if cfg.strip_punctuation {
        seq.tokens.retain(|t| !t.is_punctuation());
    }
    seq
}
