use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../../data/synonyms.txt");

/// Word-level synonymy from a synset file: one synset per line, words
/// separated by whitespace, the 1-based line number is the synset id.
/// Lines starting with `#` are skipped but still consume an id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    synset_ids: HashMap<String, BTreeSet<usize>>,
}

impl SynonymLexicon {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The small commit-domain synset list shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn parse(text: &str) -> Self {
        let mut synset_ids: HashMap<String, BTreeSet<usize>> = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim_start().starts_with('#') {
                continue;
            }
            for word in line.split_whitespace() {
                synset_ids
                    .entry(word.to_ascii_lowercase())
                    .or_default()
                    .insert(idx + 1);
            }
        }
        SynonymLexicon { synset_ids }
    }

    pub fn is_empty(&self) -> bool {
        self.synset_ids.is_empty()
    }

    pub fn synsets(&self, word: &str) -> Option<&BTreeSet<usize>> {
        self.synset_ids.get(word)
    }

    /// Identical words are always synonyms; otherwise their synsets must intersect.
    pub fn are_synonyms(&self, a: &str, b: &str) -> bool {
        if a == b {
            return true;
        }
        match (self.synset_ids.get(a), self.synset_ids.get(b)) {
            (Some(x), Some(y)) => !x.is_disjoint(y),
            _ => false,
        }
    }
}
