//! Sentence segmentation.

use std::collections::HashSet;
use std::sync::LazyLock;

use super::tagger::Tagger;
use super::{PatentDocument, Section, Sentence};

const DEFAULT_ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");

/// Abbreviations whose trailing period never ends a sentence.
#[derive(Debug, Clone)]
pub struct AbbreviationGuard {
    entries: HashSet<String>,
}

impl AbbreviationGuard {
    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_string)
            .collect();
        Self { entries }
    }

    pub fn builtin() -> &'static AbbreviationGuard {
        static GUARD: LazyLock<AbbreviationGuard> =
            LazyLock::new(|| AbbreviationGuard::parse(DEFAULT_ABBREVIATIONS));
        &GUARD
    }

    fn guards(&self, word: &str) -> bool {
        self.entries.contains(word)
    }
}

/// Splits running text into sentences.
///
/// A boundary is a `.`, `!` or `?` followed by whitespace and an uppercase
/// letter, or by the end of the text. A period closing a guarded abbreviation
/// is never a boundary.
pub fn split_sentences(text: &str, guard: &AbbreviationGuard) -> Vec<String> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0usize;
    for (pos, &(byte, c)) in chars.iter().enumerate() {
        if !matches!(c, '.' | '!' | '?') {
            continue;
        }
        let end = byte + c.len_utf8();
        let rest = &chars[pos + 1..];
        let at_end = rest.iter().all(|(_, c)| c.is_whitespace());
        let before_capital = {
            let mut it = rest.iter().skip_while(|(_, c)| c.is_whitespace());
            rest.first().is_some_and(|(_, c)| c.is_whitespace())
                && it.next().is_some_and(|(_, c)| c.is_uppercase())
        };
        if !(at_end || before_capital) {
            continue;
        }
        if c == '.' {
            let word_start = text[..byte]
                .rfind(char::is_whitespace)
                .map_or(0, |i| i + 1);
            if guard.guards(&text[word_start..end]) {
                continue;
            }
        }
        push_trimmed(&mut out, &text[start..end]);
        start = end;
    }
    push_trimmed(&mut out, &text[start..]);
    out
}

fn push_trimmed(out: &mut Vec<String>, piece: &str) {
    let normalized = piece.split_whitespace().collect::<Vec<_>>().join(" ");
    if !normalized.is_empty() {
        out.push(normalized);
    }
}

/// Splits a claim text at claim numbers (`1.`, `2.` …) that start a line and
/// strips the numbers.
pub fn split_claim_items(claim: &str) -> Vec<String> {
    let mut items = Vec::new();
    let mut current = String::new();
    for line in claim.lines() {
        let trimmed = line.trim_start();
        let digits = trimmed.chars().take_while(char::is_ascii_digit).count();
        let numbered = digits > 0 && trimmed[digits..].starts_with('.');
        if numbered {
            if !current.trim().is_empty() {
                items.push(std::mem::take(&mut current));
            }
            current.clear();
            current.push_str(&trimmed[digits + 1..]);
        } else {
            if !current.is_empty() {
                current.push('\n');
            }
            current.push_str(line);
        }
    }
    if !current.trim().is_empty() {
        items.push(current);
    }
    items
}

/// Produces every sentence of a document, tagged, in section order
/// title → abstract → claims → description.
pub fn segment_sentences(doc: &PatentDocument) -> Vec<Sentence> {
    segment_with(doc, AbbreviationGuard::builtin(), &Tagger::default())
}

pub fn segment_with(
    doc: &PatentDocument,
    guard: &AbbreviationGuard,
    tagger: &Tagger<'_>,
) -> Vec<Sentence> {
    let mut out = Vec::new();
    let mut emit = |section: Section, texts: Vec<String>| {
        for (index, text) in texts.into_iter().enumerate() {
            let tokens = tagger.tag(&text);
            out.push(Sentence {
                doc_id: doc.doc_id.clone(),
                section,
                index,
                text,
                tokens,
            });
        }
    };
    emit(Section::Title, split_sentences(&doc.title, guard));
    emit(Section::Abstract, split_sentences(&doc.abstract_text, guard));
    let claims: Vec<String> = doc
        .claims
        .iter()
        .flat_map(|c| split_claim_items(c))
        .flat_map(|item| split_sentences(&item, guard))
        .collect();
    emit(Section::Claims, claims);
    if let Some(description) = &doc.description {
        emit(Section::Description, split_sentences(description, guard));
    }
    out
}
