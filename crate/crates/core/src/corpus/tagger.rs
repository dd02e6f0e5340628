//! Lexicon + suffix heuristic part-of-speech tagging and rule-based
//! singularization.
//!
//! Roles are assigned in three passes: the closed-class lexicon (looked up by
//! surface, then by lemma), suffix heuristics, and finally a noun default.

use std::collections::HashMap;
use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DEFAULT_LEXICON: &str = include_str!("../../data/lexicon.txt");

/// Invariant plurals and irregular forms. Every value is a fixed point of
/// [`lemmatize`].
const LEMMA_EXCEPTIONS: &[(&str, &str)] = &[
    ("series", "series"),
    ("species", "species"),
    ("means", "means"),
    ("news", "news"),
    ("physics", "physics"),
    ("gases", "gas"),
    ("buses", "bus"),
    ("lenses", "lens"),
    ("lens", "lens"),
    ("data", "data"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Noun,
    Adjective,
    Verb,
    Determiner,
    Conjunction,
    Preposition,
    Other,
}

impl Role {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "noun" => Role::Noun,
            "adjective" => Role::Adjective,
            "verb" => Role::Verb,
            "determiner" => Role::Determiner,
            "conjunction" => Role::Conjunction,
            "preposition" => Role::Preposition,
            "other" => Role::Other,
            _ => return None,
        })
    }

    /// Closed-class roles carry no topical content.
    pub fn is_function_word(self) -> bool {
        matches!(
            self,
            Role::Determiner | Role::Conjunction | Role::Preposition
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub role: Role,
}

impl Token {
    pub fn is_word(&self) -> bool {
        self.surface.chars().next().is_some_and(char::is_alphanumeric)
    }
}

/// Closed-class lexicon: word → role overrides.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, Role>,
}

impl Lexicon {
    /// Parses `word<TAB>role` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let (Some(word), Some(role), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: "expected word<TAB>role".into(),
                });
            };
            let role = Role::parse(role.trim()).ok_or_else(|| Error::Parse {
                line: i + 1,
                reason: format!("unknown role {role:?}"),
            })?;
            entries.insert(word.trim().to_lowercase(), role);
        }
        Ok(Self { entries })
    }

    pub fn builtin() -> &'static Lexicon {
        static LEXICON: LazyLock<Lexicon> =
            LazyLock::new(|| Lexicon::parse(DEFAULT_LEXICON).expect("bundled lexicon parses"));
        &LEXICON
    }

    pub fn get(&self, word: &str) -> Option<Role> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Rule-based singularization.
///
/// `-ies` → `-y`, `-sses` → `-ss`, otherwise a trailing `s` is dropped for
/// words longer than three characters unless the word ends in `ss`, `us` or
/// `is`. The output is always a fixed point.
pub fn lemmatize(word: &str) -> String {
    let w = word.to_lowercase();
    if let Some((_, lemma)) = LEMMA_EXCEPTIONS.iter().find(|(k, _)| *k == w) {
        return (*lemma).to_string();
    }
    let n = w.chars().count();
    if n > 4 && w.ends_with("ies") {
        return format!("{}y", &w[..w.len() - 3]);
    }
    if n > 4 && w.ends_with("sses") {
        return w[..w.len() - 2].to_string();
    }
    if n > 3
        && w.ends_with('s')
        && !(w.ends_with("ss") || w.ends_with("us") || w.ends_with("is"))
    {
        return w[..w.len() - 1].to_string();
    }
    w
}

/// Splits lowercased text into word and punctuation tokens.
///
/// Word tokens are alphanumeric runs; `-`, `'` and `.` are kept when they sit
/// between two alphanumerics (`heat-recovery`, `3.5`, `e.g`). Every other
/// non-space character becomes a one-character token.
pub fn split_tokens(text: &str) -> Vec<String> {
    let lower = text.to_lowercase();
    let chars: Vec<char> = lower.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() {
            let start = i;
            i += 1;
            while i < chars.len() {
                let c = chars[i];
                let joiner = matches!(c, '-' | '\'' | '.')
                    && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
                if c.is_alphanumeric() || joiner {
                    i += 1;
                } else {
                    break;
                }
            }
            out.push(chars[start..i].iter().collect());
        } else {
            out.push(c.to_string());
            i += 1;
        }
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct Tagger<'a> {
    lexicon: &'a Lexicon,
}

impl Default for Tagger<'static> {
    fn default() -> Self {
        Self {
            lexicon: Lexicon::builtin(),
        }
    }
}

impl<'a> Tagger<'a> {
    pub fn new(lexicon: &'a Lexicon) -> Self {
        Self { lexicon }
    }

    pub fn tag(&self, text: &str) -> Vec<Token> {
        split_tokens(text)
            .into_iter()
            .map(|surface| {
                let lemma = lemmatize(&surface);
                let role = self.role_of(&surface, &lemma);
                Token {
                    surface,
                    lemma,
                    role,
                }
            })
            .collect()
    }

    fn role_of(&self, surface: &str, lemma: &str) -> Role {
        let first = surface.chars().next().unwrap_or(' ');
        if !first.is_alphanumeric() || surface.chars().all(|c| c.is_ascii_digit() || c == '.') {
            return Role::Other;
        }
        if let Some(role) = self.lexicon.get(surface).or_else(|| self.lexicon.get(lemma)) {
            return role;
        }
        let n = surface.chars().count();
        if n >= 5 && (surface.ends_with("ing") || surface.ends_with("ed")) {
            return Role::Verb;
        }
        if n >= 5
            && ["al", "ive", "ous", "ic"]
                .iter()
                .any(|suffix| surface.ends_with(suffix))
        {
            return Role::Adjective;
        }
        if n >= 5 && surface.ends_with("ly") {
            return Role::Other;
        }
        Role::Noun
    }
}

/// Tags `text` with the bundled lexicon.
pub fn tokenize_and_tag(text: &str) -> Vec<Token> {
    Tagger::default().tag(text)
}
