use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::lemmatize;
use crate::error::{Error, Result};

/// Hypernym key terms that mark a technology.
pub const BASE_KEY_TERMS: [&str; 9] = [
    "technology",
    "machine",
    "device",
    "apparatus",
    "mechanism",
    "sensor",
    "network",
    "system",
    "unit",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyTermSet {
    pub base_terms: BTreeSet<String>,
    /// synonym lemma → base term it was derived from
    pub synonym_expansions: BTreeMap<String, String>,
}

impl Default for KeyTermSet {
    fn default() -> Self {
        Self {
            base_terms: BASE_KEY_TERMS.iter().map(|s| s.to_string()).collect(),
            synonym_expansions: BTreeMap::new(),
        }
    }
}

/// A lexicon line that was skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedSynonym {
    pub line: usize,
    pub synonym: String,
    pub base: String,
    pub reason: String,
}

impl KeyTermSet {
    pub fn contains(&self, lemma: &str) -> bool {
        self.base_terms.contains(lemma) || self.synonym_expansions.contains_key(lemma)
    }

    pub fn len(&self) -> usize {
        self.base_terms.len() + self.synonym_expansions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds `synonym<TAB>base` entries whose base is a known base term.
    /// Lines pointing at unknown bases, or re-declaring a base term, are
    /// skipped with a warning and reported back.
    pub fn expand(&self, lexicon: &str) -> Result<(KeyTermSet, Vec<RejectedSynonym>)> {
        let mut out = self.clone();
        let mut rejected = Vec::new();
        for (i, raw) in lexicon.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [synonym, base] = fields.as_slice() else {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: "expected synonym<TAB>base".into(),
                });
            };
            if synonym.is_empty() || base.is_empty() {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: "empty synonym or base".into(),
                });
            }
            let synonym = lemmatize(synonym);
            let base = lemmatize(base);
            let reason = if !self.base_terms.contains(&base) {
                Some(format!("base term {base:?} is not a key term"))
            } else if self.base_terms.contains(&synonym) {
                Some(format!("{synonym:?} is already a base term"))
            } else {
                None
            };
            match reason {
                Some(reason) => {
                    log::warn!("synonym lexicon line {}: {reason}", i + 1);
                    rejected.push(RejectedSynonym {
                        line: i + 1,
                        synonym,
                        base,
                        reason,
                    });
                }
                None => {
                    out.synonym_expansions.insert(synonym, base);
                }
            }
        }
        Ok((out, rejected))
    }
}

/// [`KeyTermSet::expand`] as a free function.
pub fn expand_key_terms(base: &KeyTermSet, lexicon: &str) -> Result<(KeyTermSet, Vec<RejectedSynonym>)> {
    base.expand(lexicon)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synonym_of_known_base() {
        let (k, rejected) = KeyTermSet::default().expand("appliance\tdevice\n").unwrap();
        assert_eq!(k.synonym_expansions["appliance"], "device");
        assert!(k.contains("appliance"));
        assert!(rejected.is_empty());
    }

    #[test]
    fn unknown_base_is_rejected() {
        let (k, rejected) = KeyTermSet::default().expand("gizmo\tcontraption\n").unwrap();
        assert_eq!(k, KeyTermSet::default());
        assert_eq!(rejected.len(), 1);
        assert_eq!(rejected[0].synonym, "gizmo");
    }

    #[test]
    fn empty_lexicon_is_identity() {
        let (k, _) = KeyTermSet::default().expand("").unwrap();
        assert_eq!(k, KeyTermSet::default());
    }

    #[test]
    fn malformed_line() {
        assert!(matches!(
            KeyTermSet::default().expand("ok\tdevice\njust-one-field\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn expansions_stay_disjoint_from_base() {
        let (k, rejected) = KeyTermSet::default().expand("sensor\tdevice\nplants\tsystem\n").unwrap();
        assert!(!k.synonym_expansions.contains_key("sensor"));
        assert_eq!(k.synonym_expansions["plant"], "system");
        assert_eq!(rejected.len(), 1);
    }
}
