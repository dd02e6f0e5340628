use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::PatentSet;
use crate::corpus::{Role, SegmentedCorpus};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermScore {
    pub lemma: String,
    /// Smoothed log-odds ratio, false positives over true positives.
    pub log_odds: f64,
    pub false_positive_docs: usize,
    pub true_positive_docs: usize,
}

/// Lemmas that separate false from true positives, for a human to fold back
/// into the query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub query_name: String,
    pub true_positives: usize,
    pub false_positives: usize,
    /// Lemmas over-represented in false positives: `NOT` candidates.
    pub exclude_candidates: Vec<TermScore>,
    /// Lemmas over-represented in true positives: `AND`/`OR` candidates.
    pub include_candidates: Vec<TermScore>,
}

pub fn refinement_report(
    set: &PatentSet,
    labels: &BTreeMap<String, bool>,
    segmented: &SegmentedCorpus<'_>,
    top_n: usize,
) -> Result<RefinementReport> {
    let mut tp_docs = Vec::new();
    let mut fp_docs = Vec::new();
    for id in &set.doc_ids {
        match labels.get(id) {
            Some(true) => tp_docs.push(id),
            Some(false) => fp_docs.push(id),
            None => {}
        }
    }
    if tp_docs.is_empty() || fp_docs.is_empty() {
        return Err(Error::InsufficientLabels);
    }

    let doc_lemmas = |id: &str| -> BTreeSet<String> {
        segmented
            .sentences_of(id)
            .iter()
            .flat_map(|s| s.tokens.iter())
            .filter(|t| t.is_word() && !t.role.is_function_word() && t.role != Role::Other)
            .map(|t| t.lemma.clone())
            .collect()
    };
    let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for id in &fp_docs {
        for lemma in doc_lemmas(id) {
            counts.entry(lemma).or_default().0 += 1;
        }
    }
    for id in &tp_docs {
        for lemma in doc_lemmas(id) {
            counts.entry(lemma).or_default().1 += 1;
        }
    }

    let (n_fp, n_tp) = (fp_docs.len() as f64, tp_docs.len() as f64);
    let scores: Vec<TermScore> = counts
        .into_iter()
        .map(|(lemma, (fp, tp))| {
            let (fp_f, tp_f) = (fp as f64, tp as f64);
            let log_odds = ((fp_f + 1.0) / (n_fp - fp_f + 1.0)).ln()
                - ((tp_f + 1.0) / (n_tp - tp_f + 1.0)).ln();
            TermScore {
                lemma,
                log_odds,
                false_positive_docs: fp,
                true_positive_docs: tp,
            }
        })
        .collect();

    let mut exclude: Vec<TermScore> = scores.iter().filter(|s| s.log_odds > 0.0).cloned().collect();
    exclude.sort_by(|a, b| b.log_odds.total_cmp(&a.log_odds).then_with(|| a.lemma.cmp(&b.lemma)));
    exclude.truncate(top_n);
    let mut include: Vec<TermScore> = scores.into_iter().filter(|s| s.log_odds < 0.0).collect();
    include.sort_by(|a, b| a.log_odds.total_cmp(&b.log_odds).then_with(|| a.lemma.cmp(&b.lemma)));
    include.truncate(top_n);

    Ok(RefinementReport {
        query_name: set.query_name.clone(),
        true_positives: tp_docs.len(),
        false_positives: fp_docs.len(),
        exclude_candidates: exclude,
        include_candidates: include,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Corpus, PatentDocument};

    fn doc(id: &str, text: &str) -> PatentDocument {
        PatentDocument {
            doc_id: id.into(),
            family_id: format!("F{id}"),
            filing_year: 2018,
            title: "Energy apparatus".into(),
            abstract_text: text.into(),
            claims: vec![],
            description: None,
            cpc_codes: vec![],
            ipc_codes: vec![],
            status: None,
        }
    }

    /// Six documents: the three false positives mention "vehicle", the true
    /// positives mention "factory"; "controller" appears in two of each.
    fn toy() -> (Corpus, BTreeMap<String, bool>) {
        let corpus = Corpus::from_documents(vec![
            doc("T1", "A factory controller."),
            doc("T2", "A factory controller."),
            doc("T3", "A factory grid."),
            doc("F1", "A vehicle controller."),
            doc("F2", "A vehicle controller."),
            doc("F3", "A vehicle battery."),
        ])
        .unwrap();
        let labels = [("T1", true), ("T2", true), ("T3", true), ("F1", false), ("F2", false), ("F3", false)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        (corpus, labels)
    }

    #[test]
    fn vehicle_is_top_exclusion() {
        let (corpus, labels) = toy();
        let seg = corpus.segment();
        let set = PatentSet::from_doc_ids("q", labels.keys().cloned().collect(), &seg);
        let report = refinement_report(&set, &labels, &seg, 5).unwrap();
        let top = &report.exclude_candidates[0];
        assert_eq!(top.lemma, "vehicle");
        // ln(4/1) - ln(1/4) = ln 16
        assert!((top.log_odds - 16f64.ln()).abs() < 1e-12);
        assert_eq!(report.include_candidates[0].lemma, "factory");
        assert!((report.include_candidates[0].log_odds + 16f64.ln()).abs() < 1e-12);
        // symmetric terms score exactly zero and are never suggested
        for term in report.exclude_candidates.iter().chain(&report.include_candidates) {
            assert_ne!(term.lemma, "controller");
            assert_ne!(term.lemma, "energy");
        }
    }

    #[test]
    fn all_positive_labels_are_insufficient() {
        let (corpus, mut labels) = toy();
        labels.values_mut().for_each(|v| *v = true);
        let seg = corpus.segment();
        let set = PatentSet::from_doc_ids("q", labels.keys().cloned().collect(), &seg);
        assert!(matches!(
            refinement_report(&set, &labels, &seg, 5),
            Err(Error::InsufficientLabels)
        ));
    }
}
