//! Patent-style document corpus: loading, validation, sentence segmentation
//! and token roles.

mod segment;
mod tagger;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use chrono::Datelike;
use serde::{Deserialize, Serialize};

use crate::error::{read_file, Error, Result};

pub use segment::{segment_sentences, segment_with, split_claim_items, split_sentences, AbbreviationGuard};
pub use tagger::{lemmatize, split_tokens, tokenize_and_tag, Lexicon, Role, Tagger, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Section {
    Title,
    Abstract,
    Claims,
    Description,
}

impl Section {
    pub const ALL: [Section; 4] = [
        Section::Title,
        Section::Abstract,
        Section::Claims,
        Section::Description,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatentStatus {
    Pending,
    Granted,
    Lapsed,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatentDocument {
    pub doc_id: String,
    pub family_id: String,
    pub filing_year: i32,
    pub title: String,
    #[serde(rename = "abstract", default)]
    pub abstract_text: String,
    #[serde(default)]
    pub claims: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub cpc_codes: Vec<String>,
    #[serde(default)]
    pub ipc_codes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<PatentStatus>,
}

const KNOWN_FIELDS: &[&str] = &[
    "doc_id",
    "family_id",
    "filing_year",
    "title",
    "abstract",
    "claims",
    "description",
    "cpc_codes",
    "ipc_codes",
    "status",
];

impl PatentDocument {
    pub fn validate(&self, max_year: i32) -> Result<()> {
        let invalid = |reason: String| Error::InvalidDocument {
            doc_id: self.doc_id.clone(),
            reason,
        };
        if self.doc_id.trim().is_empty() {
            return Err(invalid("doc_id is empty".into()));
        }
        if self.family_id.trim().is_empty() {
            return Err(invalid("family_id is empty".into()));
        }
        if self.title.trim().is_empty() {
            return Err(invalid("title is empty".into()));
        }
        if !(1900..=max_year).contains(&self.filing_year) {
            return Err(invalid(format!(
                "filing_year {} out of range 1900..={max_year}",
                self.filing_year
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    pub doc_id: String,
    pub section: Section,
    pub index: usize,
    pub text: String,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn key(&self) -> SentenceRef {
        SentenceRef {
            doc_id: self.doc_id.clone(),
            section: self.section,
            index: self.index,
        }
    }

    /// Lemmas with punctuation kept as separators, used for phrase matching.
    pub fn lemma_sequence(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.lemma.as_str()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SentenceRef {
    pub doc_id: String,
    pub section: Section,
    pub index: usize,
}

/// An immutable, order-preserving collection of documents.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    documents: Vec<PatentDocument>,
    by_id: HashMap<String, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub documents: usize,
    pub families: usize,
}

impl Corpus {
    pub fn from_documents(documents: Vec<PatentDocument>) -> Result<Self> {
        let max_year = chrono::Utc::now().year();
        let mut by_id = HashMap::with_capacity(documents.len());
        for (i, doc) in documents.iter().enumerate() {
            doc.validate(max_year)?;
            if by_id.insert(doc.doc_id.clone(), i).is_some() {
                return Err(Error::DuplicateDocument(doc.doc_id.clone()));
            }
        }
        Ok(Self { documents, by_id })
    }

    pub fn documents(&self) -> &[PatentDocument] {
        &self.documents
    }

    pub fn get(&self, doc_id: &str) -> Option<&PatentDocument> {
        self.by_id.get(doc_id).map(|&i| &self.documents[i])
    }

    pub fn contains(&self, doc_id: &str) -> bool {
        self.by_id.contains_key(doc_id)
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn family_of(&self, doc_id: &str) -> Option<&str> {
        self.get(doc_id).map(|d| d.family_id.as_str())
    }

    /// Earliest filing year of each family across the whole corpus.
    pub fn family_years(&self) -> BTreeMap<&str, i32> {
        let mut years: BTreeMap<&str, i32> = BTreeMap::new();
        for d in &self.documents {
            years
                .entry(d.family_id.as_str())
                .and_modify(|y| *y = (*y).min(d.filing_year))
                .or_insert(d.filing_year);
        }
        years
    }

    pub fn stats(&self) -> CorpusStats {
        let families: BTreeSet<&str> = self.documents.iter().map(|d| d.family_id.as_str()).collect();
        CorpusStats {
            documents: self.documents.len(),
            families: families.len(),
        }
    }

    pub fn sentences(&self) -> Vec<Sentence> {
        self.documents.iter().flat_map(segment_sentences).collect()
    }

    /// Segments and tags every document once.
    pub fn segment(&self) -> SegmentedCorpus<'_> {
        use rayon::prelude::*;
        let sentences = self.documents.par_iter().map(segment_sentences).collect();
        SegmentedCorpus {
            corpus: self,
            sentences,
        }
    }
}

/// A corpus together with the tagged sentences of each document.
#[derive(Debug, Clone)]
pub struct SegmentedCorpus<'a> {
    corpus: &'a Corpus,
    sentences: Vec<Vec<Sentence>>,
}

impl<'a> SegmentedCorpus<'a> {
    pub fn corpus(&self) -> &'a Corpus {
        self.corpus
    }

    pub fn sentences_of(&self, doc_id: &str) -> &[Sentence] {
        self.corpus
            .by_id
            .get(doc_id)
            .map_or(&[], |&i| self.sentences[i].as_slice())
    }

    /// Documents in corpus order with their sentences.
    pub fn iter(&self) -> impl Iterator<Item = (&'a PatentDocument, &[Sentence])> + '_ {
        self.corpus
            .documents
            .iter()
            .zip(self.sentences.iter().map(Vec::as_slice))
    }
}

/// Lemma sequence of a phrase, tokenized exactly like sentence text.
pub fn phrase_lemmas(phrase: &str) -> Vec<String> {
    tokenize_and_tag(phrase).into_iter().map(|t| t.lemma).collect()
}

/// Whether `needle` occurs contiguously in `haystack`. An empty needle never
/// matches.
pub fn contains_sequence<S: AsRef<str>>(haystack: &[&str], needle: &[S]) -> bool {
    !needle.is_empty()
        && needle.len() <= haystack.len()
        && haystack
            .windows(needle.len())
            .any(|w| w.iter().zip(needle).all(|(a, b)| *a == b.as_ref()))
}

/// Parses JSON Lines, one [`PatentDocument`] per line. Blank lines are
/// skipped; unknown fields are ignored with a warning.
pub fn parse_corpus(text: &str) -> Result<Corpus> {
    let mut documents = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = i + 1;
        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: line_no,
            reason: e.to_string(),
        })?;
        if let Some(obj) = value.as_object() {
            for key in obj.keys().filter(|k| !KNOWN_FIELDS.contains(&k.as_str())) {
                log::warn!("line {line_no}: ignoring unknown field {key:?}");
            }
        }
        let doc: PatentDocument = serde_json::from_value(value).map_err(|e| Error::Parse {
            line: line_no,
            reason: e.to_string(),
        })?;
        documents.push(doc);
    }
    Corpus::from_documents(documents)
}

pub fn ingest_corpus(path: &Path) -> Result<Corpus> {
    parse_corpus(&read_file(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(id: &str, family: &str, year: i32) -> String {
        serde_json::json!({
            "doc_id": id, "family_id": family, "filing_year": year,
            "title": "A heat pump", "abstract": "A system. It heats.", "claims": ["1. A pump."]
        })
        .to_string()
    }

    #[test]
    fn empty_file_is_empty_corpus() {
        let c = parse_corpus("").unwrap();
        assert_eq!(c.stats(), CorpusStats { documents: 0, families: 0 });
    }

    #[test]
    fn duplicate_doc_id() {
        let text = format!("{}\n{}\n", line("EP1", "F1", 2010), line("EP1", "F2", 2011));
        match parse_corpus(&text) {
            Err(Error::DuplicateDocument(id)) => assert_eq!(id, "EP1"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn year_out_of_range() {
        assert!(matches!(
            parse_corpus(&line("EP1", "F1", 1850)),
            Err(Error::InvalidDocument { .. })
        ));
    }

    #[test]
    fn parse_error_reports_line() {
        let text = format!("{}\n{{not json\n", line("EP1", "F1", 2010));
        assert!(matches!(parse_corpus(&text), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn unknown_fields_are_ignored() {
        let text = r#"{"doc_id":"A","family_id":"F","filing_year":2001,"title":"T","extra":1}"#;
        assert_eq!(parse_corpus(text).unwrap().len(), 1);
    }

    #[test]
    fn segments_all_sections() {
        let c = parse_corpus(&line("EP1", "F1", 2010)).unwrap();
        let s = segment_sentences(&c.documents()[0]);
        let sections: Vec<_> = s.iter().map(|s| (s.section, s.index)).collect();
        assert_eq!(
            sections,
            vec![
                (Section::Title, 0),
                (Section::Abstract, 0),
                (Section::Abstract, 1),
                (Section::Claims, 0)
            ]
        );
        assert_eq!(s[3].text, "A pump.");
    }

    #[test]
    fn empty_abstract_has_no_sentences() {
        let text = r#"{"doc_id":"A","family_id":"F","filing_year":2001,"title":"T","abstract":""}"#;
        let c = parse_corpus(text).unwrap();
        let s = segment_sentences(&c.documents()[0]);
        assert!(s.iter().all(|s| s.section != Section::Abstract));
    }
}
