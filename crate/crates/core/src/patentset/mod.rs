//! Patent set formation from query ontologies, plus the precision/recall
//! estimators and refinement report that drive query iteration.

mod estimate;
mod query;
mod refine;

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Section, SegmentedCorpus, Sentence};
use crate::error::{Error, Result};

pub use estimate::{estimate_precision, estimate_recall, wilson_interval, PrecisionEstimate, RecallEstimate, Z_95};
pub use query::{compile_query, Expr, QueryOntology};
pub use refine::{refinement_report, RefinementReport, TermScore};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatentSet {
    pub query_name: String,
    pub doc_ids: BTreeSet<String>,
    pub family_ids: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_at: Option<DateTime<Utc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<PrecisionEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recall: Option<RecallEstimate>,
}

impl PatentSet {
    /// Builds a set from document ids, deriving the family image.
    pub fn from_doc_ids(
        query_name: impl Into<String>,
        doc_ids: BTreeSet<String>,
        segmented: &SegmentedCorpus<'_>,
    ) -> Self {
        let corpus = segmented.corpus();
        let family_ids = doc_ids
            .iter()
            .filter_map(|id| corpus.family_of(id))
            .map(str::to_string)
            .collect();
        Self {
            query_name: query_name.into(),
            doc_ids,
            family_ids,
            created_at: None,
            precision: None,
            recall: None,
        }
    }

    pub fn len(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doc_ids.is_empty()
    }

    pub fn contains(&self, doc_id: &str) -> bool {
        self.doc_ids.contains(doc_id)
    }
}

/// Document ids matching `expr` when only `scope` sections are searched.
pub fn execute_expr(
    segmented: &SegmentedCorpus<'_>,
    expr: &Expr,
    scope: &BTreeSet<Section>,
) -> BTreeSet<String> {
    let docs: Vec<_> = segmented.iter().collect();
    docs.par_iter()
        .filter(|(_, sentences)| {
            let in_scope: Vec<&Sentence> = sentences
                .iter()
                .filter(|s| scope.contains(&s.section))
                .collect();
            expr.matches(&in_scope)
        })
        .map(|(doc, _)| doc.doc_id.clone())
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

pub fn execute_query(segmented: &SegmentedCorpus<'_>, query: &QueryOntology) -> PatentSet {
    let doc_ids = execute_expr(segmented, &query.expression, &query.scope);
    PatentSet::from_doc_ids(&query.name, doc_ids, segmented)
}

/// Parses a `doc_id,relevant` CSV (header required). Booleans accept
/// `true/false`, `1/0`, `yes/no`.
pub fn parse_labels(text: &str) -> Result<BTreeMap<String, bool>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut labels = BTreeMap::new();
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let (Some(id), Some(flag)) = (row.get(0), row.get(1)) else {
            return Err(Error::Parse {
                line,
                reason: "expected doc_id,relevant".into(),
            });
        };
        let relevant = match flag.to_ascii_lowercase().as_str() {
            "true" | "1" | "yes" => true,
            "false" | "0" | "no" => false,
            other => {
                return Err(Error::Parse {
                    line,
                    reason: format!("not a boolean: {other:?}"),
                })
            }
        };
        labels.insert(id.to_string(), relevant);
    }
    Ok(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, PatentDocument};

    fn doc(id: &str, family: &str, abstract_text: &str) -> PatentDocument {
        PatentDocument {
            doc_id: id.into(),
            family_id: family.into(),
            filing_year: 2015,
            title: "Title".into(),
            abstract_text: abstract_text.into(),
            claims: vec![],
            description: None,
            cpc_codes: vec![],
            ipc_codes: vec![],
            status: None,
        }
    }

    fn corpus() -> Corpus {
        Corpus::from_documents(vec![
            doc("D1", "F1", "The heat exchangers are cleaned."),
            doc("D2", "F1", "An energy management unit for a vehicle."),
            doc("D3", "F2", "An energy management unit for a building."),
        ])
        .unwrap()
    }

    #[test]
    fn plural_literal_matches_via_lemmas() {
        let c = corpus();
        let seg = c.segment();
        let q = compile_query(r#"{"lit":"heat exchanger"}"#).unwrap();
        let set = execute_query(&seg, &q);
        assert_eq!(set.doc_ids, BTreeSet::from(["D1".to_string()]));
        assert_eq!(set.family_ids, BTreeSet::from(["F1".to_string()]));
    }

    #[test]
    fn contradiction_is_empty() {
        let c = corpus();
        let seg = c.segment();
        let q = compile_query(r#"{"AND":[{"lit":"energy"},{"NOT":{"lit":"energy"}}]}"#).unwrap();
        assert!(execute_query(&seg, &q).is_empty());
    }

    #[test]
    fn not_excludes_and_regex_hits_raw_text() {
        let c = corpus();
        let seg = c.segment();
        let q = compile_query(
            r#"{"AND":[{"re":"[Ee]nergy management"},{"NOT":{"lit":"vehicle"}}]}"#,
        )
        .unwrap();
        assert_eq!(
            execute_query(&seg, &q).doc_ids,
            BTreeSet::from(["D3".to_string()])
        );
    }

    #[test]
    fn scope_restricts_sections() {
        let c = corpus();
        let seg = c.segment();
        let q = compile_query(r#"{"name":"t","scope":["title"],"expression":{"lit":"heat"}}"#)
            .unwrap();
        assert!(execute_query(&seg, &q).is_empty());
    }

    #[test]
    fn labels_csv() {
        let labels = parse_labels("doc_id,relevant\nD1,true\nD2, 0\nD3,yes\n").unwrap();
        assert!(labels["D1"]);
        assert!(!labels["D2"]);
        assert!(labels["D3"]);
        assert!(matches!(
            parse_labels("doc_id,relevant\nD1,maybe\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
