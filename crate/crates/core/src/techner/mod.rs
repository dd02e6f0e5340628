//! Rule-based technology extraction: key-term gated Hearst patterns, lemma
//! clustering and reviewer curation.

mod cluster;
mod curation;
mod hearst;
mod keyterms;

use rayon::prelude::*;

use crate::corpus::Sentence;

pub use cluster::{cluster_id_for, cluster_technologies, Curation, TechnologyCluster};
pub use curation::{apply_curation, parse_curation, CurationAction, CurationDirective};
pub use hearst::{extract_mentions, MentionLocation, PatternId, TechnologyMention};
pub use keyterms::{expand_key_terms, KeyTermSet, RejectedSynonym, BASE_KEY_TERMS};

/// Runs [`extract_mentions`] over many sentences, preserving input order.
pub fn extract_all(sentences: &[&Sentence], key_terms: &KeyTermSet) -> Vec<TechnologyMention> {
    sentences
        .par_iter()
        .map(|s| extract_mentions(s, key_terms))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}
