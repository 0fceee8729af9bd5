use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Matcher;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FragMode {
    /// Penalty applied to every pair.
    #[default]
    MeteorClassic,
    /// No penalty when prediction and reference are identical.
    LogMnext,
}

impl FromStr for FragMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "meteor" | "meteor_classic" | "classic" => Ok(FragMode::MeteorClassic),
            "log_mnext" | "logmnext" => Ok(FragMode::LogMnext),
            other => Err(format!("unknown frag_mode `{other}`")),
        }
    }
}

impl fmt::Display for FragMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FragMode::MeteorClassic => "meteor_classic",
            FragMode::LogMnext => "log_mnext",
        })
    }
}

/// How word order enters the fragmentation penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordOrder {
    /// Chunks counted on the alignment.
    #[default]
    Aligned,
    /// Order ignored: the chunk count is fixed at 1.
    SingleChunk,
    /// Order ignored: no penalty at all.
    NoPenalty,
}

/// Optional matchers. Exact matching is always on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matchers {
    pub stem: bool,
    pub synonym: bool,
}

impl Matchers {
    pub const ALL: Matchers = Matchers {
        stem: true,
        synonym: true,
    };
    pub const EXACT_ONLY: Matchers = Matchers {
        stem: false,
        synonym: false,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatcherWeights {
    pub exact: f64,
    pub stem: f64,
    pub synonym: f64,
}

impl MatcherWeights {
    pub fn of(&self, matcher: Matcher) -> f64 {
        match matcher {
            Matcher::Exact => self.exact,
            Matcher::Stem => self.stem,
            Matcher::Synonym => self.synonym,
        }
    }
}

impl Default for MatcherWeights {
    fn default() -> Self {
        MatcherWeights {
            exact: 1.0,
            stem: 1.0,
            synonym: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeteorParams {
    /// Precision weight in `PR / (alpha P + (1 - alpha) R)`, in (0, 1).
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub weights: MatcherWeights,
    pub matchers: Matchers,
    pub frag_mode: FragMode,
    pub word_order: WordOrder,
}

impl MeteorParams {
    /// Recall-heavy F-mean with `0.5 * (chunks / matched)^3`.
    pub fn classic() -> Self {
        MeteorParams {
            alpha: 0.9,
            beta: 0.5,
            gamma: 3.0,
            weights: MatcherWeights::default(),
            matchers: Matchers::ALL,
            frag_mode: FragMode::MeteorClassic,
            word_order: WordOrder::Aligned,
        }
    }

    /// Shipping defaults for METEOR-NEXT. Tuned values belong in a params file.
    pub fn next() -> Self {
        Self::classic()
    }

    pub fn log_mnext() -> Self {
        MeteorParams {
            frag_mode: FragMode::LogMnext,
            ..Self::next()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidInput(what.to_string()))
            }
        };
        check(self.alpha > 0.0 && self.alpha < 1.0, "alpha must lie in (0, 1)")?;
        check(self.beta >= 0.0, "beta must be non-negative")?;
        check(self.gamma >= 0.0, "gamma must be non-negative")?;
        for w in [self.weights.exact, self.weights.stem, self.weights.synonym] {
            check((0.0..=1.0).contains(&w), "matcher weights must lie in [0, 1]")?;
        }
        Ok(())
    }

    /// Reads `key = value` lines over [`MeteorParams::next`].
    ///
    /// Keys: `alpha`, `beta`, `gamma`, `w_exact`, `w_stem`, `w_syn`,
    /// `frag_mode` (`meteor_classic` | `log_mnext`), `matchers` (comma list
    /// of `exact`, `stem`, `synonym`). `#` starts a comment.
    pub fn parse_config(text: &str) -> Result<Self> {
        let mut params = Self::next();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let location = format!("line {}", idx + 1);
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| Error::validation(&location, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim().trim_matches('"'));
            let number = || {
                value
                    .parse::<f64>()
                    .map_err(|_| Error::validation(&location, format!("`{key}` needs a number, got `{value}`")))
            };
            match key {
                "alpha" => params.alpha = number()?,
                "beta" => params.beta = number()?,
                "gamma" => params.gamma = number()?,
                "w_exact" => params.weights.exact = number()?,
                "w_stem" => params.weights.stem = number()?,
                "w_syn" | "w_synonym" => params.weights.synonym = number()?,
                "frag_mode" => {
                    params.frag_mode = value.parse().map_err(|e: String| Error::validation(&location, e))?
                }
                "matchers" => {
                    let mut matchers = Matchers::EXACT_ONLY;
                    for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        match name {
                            "exact" => {}
                            "stem" => matchers.stem = true,
                            "synonym" | "syn" => matchers.synonym = true,
                            other => {
                                return Err(Error::validation(&location, format!("unknown matcher `{other}`")))
                            }
                        }
                    }
                    params.matchers = matchers;
                }
                other => return Err(Error::validation(&location, format!("unknown key `{other}`"))),
            }
        }
        params.validate()?;
        Ok(params)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_config(&text).map_err(|e| match e {
            Error::Validation { location, message } => Error::Validation {
                location: format!("{}: {location}", path.display()),
                message,
            },
            other => other,
        })
    }
}

impl Default for MeteorParams {
    fn default() -> Self {
        Self::classic()
    }
}
