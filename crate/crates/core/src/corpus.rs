//! Line-delimited JSON records: evaluation pairs, human annotations and
//! commit corpora.
//!
//! ```text
//! pairs        {"id": "1", "reference": "...", "prediction": "..."}
//! annotations  {"id": "1", "reference": "...", "prediction": "...", "scores": [2, 3, 4]}
//! corpus       {"id": "1", "diff": "...", "message": "...", "lang": "java"}
//! ```

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::average_human;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPair {
    pub id: String,
    pub reference: String,
    pub prediction: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnotatedPair {
    #[serde(flatten)]
    pub pair: EvalPair,
    #[serde(rename = "scores")]
    pub annotator_scores: Vec<u8>,
    #[serde(skip)]
    pub mean_score: f64,
}

impl AnnotatedPair {
    pub fn new(pair: EvalPair, annotator_scores: Vec<u8>) -> Result<Self> {
        let mean_score = average_human(&annotator_scores)
            .map_err(|e| Error::validation(format!("record `{}`", pair.id), e.to_string()))?;
        Ok(AnnotatedPair {
            pair,
            annotator_scores,
            mean_score,
        })
    }
}

/// Programming language of a commit, as split in multi-language corpora.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lang {
    Cpp,
    CSharp,
    Java,
    JavaScript,
    Python,
    Other,
}

impl Lang {
    /// The five report columns, in order.
    pub const REPORTED: [Lang; 5] = [Lang::Cpp, Lang::CSharp, Lang::Java, Lang::JavaScript, Lang::Python];

    /// Parses a language tag; unknown tags map to `None`.
    pub fn from_tag(tag: &str) -> Option<Lang> {
        Some(match tag.trim().to_ascii_lowercase().as_str() {
            "cpp" | "c++" => Lang::Cpp,
            "csharp" | "c#" | "cs" => Lang::CSharp,
            "java" => Lang::Java,
            "javascript" | "js" => Lang::JavaScript,
            "python" | "py" => Lang::Python,
            "other" => Lang::Other,
            _ => return None,
        })
    }

    pub fn tag(self) -> &'static str {
        match self {
            Lang::Cpp => "cpp",
            Lang::CSharp => "csharp",
            Lang::Java => "java",
            Lang::JavaScript => "javascript",
            Lang::Python => "python",
            Lang::Other => "other",
        }
    }

    /// Column header used in per-language reports.
    pub fn label(self) -> &'static str {
        match self {
            Lang::Cpp => "C++",
            Lang::CSharp => "C#",
            Lang::Java => "Java",
            Lang::JavaScript => "JS",
            Lang::Python => "Py",
            Lang::Other => "Other",
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl Serialize for Lang {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommitRecord {
    pub id: String,
    pub diff: String,
    pub message: String,
    pub lang: Lang,
}

#[derive(Deserialize)]
struct RawAnnotation {
    id: String,
    reference: String,
    prediction: String,
    scores: Vec<i64>,
}

#[derive(Deserialize)]
struct RawCommit {
    id: String,
    diff: String,
    message: String,
    lang: String,
}

/// Parses one JSON object per non-blank line.
fn read_records<T: DeserializeOwned>(path: &Path) -> Result<Vec<(usize, T)>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line)
            .map_err(|e| Error::validation(format!("{}: line {}", path.display(), idx + 1), e.to_string()))?;
        records.push((idx + 1, record));
    }
    if records.is_empty() {
        log::warn!("{} contains no records", path.display());
    }
    Ok(records)
}

fn check_unique<'a>(seen: &mut HashSet<String>, id: &'a str, path: &Path, line: usize) -> Result<&'a str> {
    if !seen.insert(id.to_string()) {
        return Err(Error::validation(
            format!("{}: line {line}", path.display()),
            format!("duplicate id `{id}`"),
        ));
    }
    Ok(id)
}

fn check_pair(pair: &EvalPair, path: &Path, line: usize) -> Result<()> {
    if pair.reference.trim().is_empty() {
        return Err(Error::validation(
            format!("{}: line {line}", path.display()),
            format!("record `{}` has an empty reference", pair.id),
        ));
    }
    Ok(())
}

pub fn load_pairs(path: impl AsRef<Path>) -> Result<Vec<EvalPair>> {
    let path = path.as_ref();
    let mut seen = HashSet::new();
    read_records::<EvalPair>(path)?
        .into_iter()
        .map(|(line, pair)| {
            check_unique(&mut seen, &pair.id, path, line)?;
            check_pair(&pair, path, line)?;
            Ok(pair)
        })
        .collect()
}

pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<AnnotatedPair>> {
    let path = path.as_ref();
    let mut seen = HashSet::new();
    read_records::<RawAnnotation>(path)?
        .into_iter()
        .map(|(line, raw)| {
            check_unique(&mut seen, &raw.id, path, line)?;
            let pair = EvalPair {
                id: raw.id,
                reference: raw.reference,
                prediction: raw.prediction,
            };
            check_pair(&pair, path, line)?;
            let location = || format!("{}: line {line}: record `{}`", path.display(), pair.id);
            if raw.scores.is_empty() {
                return Err(Error::validation(location(), "no annotator scores"));
            }
            let scores = raw
                .scores
                .iter()
                .map(|&s| {
                    u8::try_from(s)
                        .ok()
                        .filter(|&v| v <= crate::stats::MAX_HUMAN_SCORE)
                        .ok_or_else(|| Error::validation(location(), format!("score {s} outside 0..=4")))
                })
                .collect::<Result<Vec<u8>>>()?;
            AnnotatedPair::new(pair, scores)
        })
        .collect()
}

pub fn load_commit_corpus(path: impl AsRef<Path>) -> Result<Vec<CommitRecord>> {
    let path = path.as_ref();
    let mut seen = HashSet::new();
    read_records::<RawCommit>(path)?
        .into_iter()
        .map(|(line, raw)| {
            check_unique(&mut seen, &raw.id, path, line)?;
            let location = || format!("{}: line {line}: record `{}`", path.display(), raw.id);
            if raw.diff.trim().is_empty() {
                return Err(Error::validation(location(), "empty diff"));
            }
            if raw.message.trim().is_empty() {
                return Err(Error::validation(location(), "empty message"));
            }
            let lang = Lang::from_tag(&raw.lang).unwrap_or_else(|| {
                log::warn!("{}: unknown language `{}`, using `other`", location(), raw.lang);
                Lang::Other
            });
            Ok(CommitRecord {
                id: raw.id,
                diff: raw.diff,
                message: raw.message,
                lang,
            })
        })
        .collect()
}

/// Writes records as one JSON object per line.
pub fn write_jsonl<T: Serialize>(records: &[T], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(record).expect("records serialize");
        writeln!(out, "{line}").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}
