//! Hearst-pattern hyponym extraction over adjective/noun chunks.
//!
//! Supported patterns, with `NP_h` the hypernym phrase and `LIST` a
//! coordinated run `NP (, NP)* ((,)? (and|or) NP)?`:
//!
//! | id            | shape                                   |
//! |---------------|-----------------------------------------|
//! | `such_as`     | `NP_h (,)? such as LIST`                |
//! | `such_np_as`  | `such NP_h as LIST`                     |
//! | `and_other`   | `NP (, NP)* (,)? (and|or) other NP_h`    |
//! | `including`   | `NP_h (,)? including LIST`              |
//! | `especially`  | `NP_h (,)? especially LIST`             |
//!
//! A match is kept only when the head noun of `NP_h` (its last noun token)
//! is a key term. An article directly before a list item is skipped.

use serde::{Deserialize, Serialize};

use super::KeyTermSet;
use crate::corpus::{Role, Section, Sentence, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternId {
    SuchAs,
    SuchNpAs,
    AndOther,
    Including,
    Especially,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MentionLocation {
    pub doc_id: String,
    pub section: Section,
    pub sentence_index: usize,
    /// Half-open token range of the hyponym phrase.
    pub span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TechnologyMention {
    pub surface: String,
    pub lemma: String,
    pub hypernym_lemma: String,
    pub pattern_id: PatternId,
    pub location: MentionLocation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Elem {
    Np(usize, usize),
    Tok(usize),
}

struct Chunked<'a> {
    tokens: &'a [Token],
    elems: Vec<Elem>,
}

impl<'a> Chunked<'a> {
    fn new(tokens: &'a [Token]) -> Self {
        let in_np = |t: &Token| t.is_word() && matches!(t.role, Role::Noun | Role::Adjective);
        let mut elems = Vec::new();
        let mut i = 0;
        while i < tokens.len() {
            if in_np(&tokens[i]) {
                let start = i;
                while i < tokens.len() && in_np(&tokens[i]) {
                    i += 1;
                }
                elems.push(Elem::Np(start, i));
            } else {
                elems.push(Elem::Tok(i));
                i += 1;
            }
        }
        Self { tokens, elems }
    }

    fn np(&self, at: usize) -> Option<(usize, usize)> {
        match self.elems.get(at)? {
            Elem::Np(s, e) => Some((*s, *e)),
            Elem::Tok(_) => None,
        }
    }

    fn is_word(&self, at: usize, words: &[&str]) -> bool {
        matches!(self.elems.get(at), Some(Elem::Tok(i)) if words.contains(&self.tokens[*i].surface.as_str()))
    }

    fn is_article(&self, at: usize) -> bool {
        self.is_word(at, &["a", "an", "the"])
    }

    /// An NP at `at`, optionally preceded by an article. Returns the span
    /// and the index after it.
    fn list_item(&self, at: usize) -> Option<((usize, usize), usize)> {
        if let Some(span) = self.np(at) {
            return Some((span, at + 1));
        }
        if self.is_article(at) {
            return self.np(at + 1).map(|span| (span, at + 2));
        }
        None
    }

    /// `NP (, NP)* ((,)? (and|or) NP)?` starting at `at`.
    fn forward_list(&self, at: usize) -> Vec<(usize, usize)> {
        let Some((first, mut next)) = self.list_item(at) else {
            return Vec::new();
        };
        let mut items = vec![first];
        loop {
            if self.is_word(next, &[","]) {
                if let Some((span, after)) = self.list_item(next + 1) {
                    items.push(span);
                    next = after;
                    continue;
                }
                if self.is_word(next + 1, &["and", "or"]) {
                    if let Some((span, _)) = self.list_item(next + 2) {
                        items.push(span);
                    }
                }
                break;
            }
            if self.is_word(next, &["and", "or"]) {
                if let Some((span, _)) = self.list_item(next + 1) {
                    items.push(span);
                }
            }
            break;
        }
        items
    }

    /// `NP (, NP)* (,)?` ending just before the conjunction at `conj`.
    fn backward_list(&self, conj: usize) -> Vec<(usize, usize)> {
        let mut at = conj;
        if at > 0 && self.is_word(at - 1, &[","]) {
            at -= 1;
        }
        let mut items = Vec::new();
        let item_ending_at = |end: usize| -> Option<((usize, usize), usize)> {
            let idx = end.checked_sub(1)?;
            let span = self.np(idx)?;
            let start = if idx > 0 && self.is_article(idx - 1) { idx - 1 } else { idx };
            Some((span, start))
        };
        let Some((last, mut start)) = item_ending_at(at) else {
            return items;
        };
        items.push(last);
        while start >= 2 && self.is_word(start - 1, &[","]) {
            match item_ending_at(start - 1) {
                Some((span, s)) => {
                    items.push(span);
                    start = s;
                }
                None => break,
            }
        }
        items.reverse();
        items
    }

    fn head_lemma(&self, (s, e): (usize, usize)) -> Option<&str> {
        self.tokens[s..e]
            .iter()
            .rev()
            .find(|t| t.role == Role::Noun)
            .map(|t| t.lemma.as_str())
    }
}

type Span = (usize, usize);

/// Extracts technology mentions from one tagged sentence.
pub fn extract_mentions(sentence: &Sentence, key_terms: &KeyTermSet) -> Vec<TechnologyMention> {
    let c = Chunked::new(&sentence.tokens);
    let mut found: Vec<(PatternId, Span, Vec<Span>)> = Vec::new();

    for at in 0..c.elems.len() {
        // NP_h such as LIST
        if let Some(h) = c.np(at) {
            let after = if c.is_word(at + 1, &[","]) { at + 2 } else { at + 1 };
            if c.is_word(after, &["such"]) && c.is_word(after + 1, &["as"]) {
                found.push((PatternId::SuchAs, h, c.forward_list(after + 2)));
            }
            if c.is_word(after, &["including"]) {
                found.push((PatternId::Including, h, c.forward_list(after + 1)));
            }
            if c.is_word(after, &["especially"]) {
                found.push((PatternId::Especially, h, c.forward_list(after + 1)));
            }
        }
        // such NP_h as LIST
        if c.is_word(at, &["such"]) {
            if let Some(h) = c.np(at + 1) {
                if c.is_word(at + 2, &["as"]) {
                    found.push((PatternId::SuchNpAs, h, c.forward_list(at + 3)));
                }
            }
        }
        // LIST (and|or) other NP_h
        if c.is_word(at, &["and", "or"]) && c.is_word(at + 1, &["other"]) {
            if let Some(h) = c.np(at + 2) {
                found.push((PatternId::AndOther, h, c.backward_list(at)));
            }
        }
    }

    let mut mentions = Vec::new();
    for (pattern_id, hypernym, hyponyms) in found {
        let Some(head) = c.head_lemma(hypernym) else {
            continue;
        };
        if !key_terms.contains(head) {
            continue;
        }
        for (s, e) in hyponyms {
            let toks = &sentence.tokens[s..e];
            let lemma = toks.iter().map(|t| t.lemma.as_str()).collect::<Vec<_>>().join(" ");
            if lemma.is_empty() {
                continue;
            }
            mentions.push(TechnologyMention {
                surface: toks.iter().map(|t| t.surface.as_str()).collect::<Vec<_>>().join(" "),
                lemma,
                hypernym_lemma: head.to_string(),
                pattern_id,
                location: MentionLocation {
                    doc_id: sentence.doc_id.clone(),
                    section: sentence.section,
                    sentence_index: sentence.index,
                    span: (s, e),
                },
            });
        }
    }
    mentions.sort_by(|a, b| a.location.span.cmp(&b.location.span).then(a.pattern_id.cmp(&b.pattern_id)));
    mentions.dedup_by(|a, b| a.location.span == b.location.span && a.lemma == b.lemma);
    mentions
}
