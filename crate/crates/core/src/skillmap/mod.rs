//! Sentence-to-skill matching by embedding similarity and the curated skill
//! set it yields.

mod embed;
mod taxonomy;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Sentence, SentenceRef};
use crate::error::{Error, Result};

pub use embed::{
    cosine, text_digest, Embedding, EmbeddingProvider, FileProvider, HashedBag, HASHED_BAG_DIM, HASHED_BAG_SEED,
};
pub use taxonomy::{load_skills, parse_skills, SkillCategory, SkillRecord};

pub const DEFAULT_THRESHOLD: f64 = 0.7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Review {
    #[default]
    Auto,
    Approved,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkillMatch {
    pub sentence_ref: SentenceRef,
    pub skill_id: String,
    pub score: f64,
    pub kept: bool,
    #[serde(default)]
    pub review: Review,
}

/// Picks the best-scoring entry; ties at the maximum go to the smallest id.
/// Returns the index, its score and whether it clears `threshold` strictly.
pub fn select_best<S: AsRef<str>>(scores: &[(S, f64)], threshold: f64) -> Option<(usize, f64, bool)> {
    let mut best: Option<usize> = None;
    for (i, (id, score)) in scores.iter().enumerate() {
        best = match best {
            None => Some(i),
            Some(b) => {
                let (bid, bscore) = &scores[b];
                if *score > *bscore || (*score == *bscore && id.as_ref() < bid.as_ref()) {
                    Some(i)
                } else {
                    Some(b)
                }
            }
        };
    }
    best.map(|i| (i, scores[i].1, scores[i].1 > threshold))
}

/// Scores precomputed sentence vectors against precomputed skill vectors.
/// Zero sentence vectors produce no match. Output is sorted by sentence.
pub fn match_vectors(
    sentences: &[(SentenceRef, Embedding)],
    skills: &[(String, Embedding)],
    threshold: f64,
) -> Result<Vec<SkillMatch>> {
    if skills.is_empty() {
        return Err(Error::NoSkills);
    }
    let mut out = sentences
        .par_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(key, v)| -> Result<Option<SkillMatch>> {
            let mut scores = Vec::with_capacity(skills.len());
            for (id, s) in skills {
                scores.push((id.as_str(), cosine(v, s)?));
            }
            Ok(select_best(&scores, threshold).map(|(i, score, kept)| SkillMatch {
                sentence_ref: key.clone(),
                skill_id: scores[i].0.to_string(),
                score,
                kept,
                review: Review::Auto,
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect::<Vec<_>>();
    out.sort_by(|a, b| a.sentence_ref.cmp(&b.sentence_ref));
    Ok(out)
}

/// Text embedded for a skill: its description, or its label when the
/// description is blank.
pub fn skill_text(skill: &SkillRecord) -> &str {
    if skill.description.trim().is_empty() {
        &skill.label
    } else {
        &skill.description
    }
}

/// Embeds hard and digital skills, dropping those whose text embeds to zero.
pub fn embed_skills(skills: &[SkillRecord], provider: &dyn EmbeddingProvider) -> Result<Vec<(String, Embedding)>> {
    let mut out = Vec::new();
    for s in skills.iter().filter(|s| s.is_binary()) {
        let v = provider.embed(skill_text(s))?;
        if v.is_zero() {
            log::warn!("skill {} has no embeddable text", s.skill_id);
            continue;
        }
        out.push((s.skill_id.clone(), v));
    }
    Ok(out)
}

/// One argmax match per embeddable sentence over the hard and digital
/// skills; `kept` iff the best score is strictly above `threshold`.
pub fn match_sentences_to_skills(
    sentences: &[&Sentence],
    skills: &[SkillRecord],
    provider: &dyn EmbeddingProvider,
    threshold: f64,
) -> Result<Vec<SkillMatch>> {
    let skill_vecs = embed_skills(skills, provider)?;
    if skill_vecs.is_empty() {
        return Err(Error::NoSkills);
    }
    let sentence_vecs = sentences
        .par_iter()
        .map(|s| provider.embed(&s.text).map(|v| (s.key(), v)))
        .collect::<Result<Vec<_>>>()?;
    match_vectors(&sentence_vecs, &skill_vecs, threshold)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SkillAction {
    Approve,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkillOverride {
    pub skill_id: String,
    pub action: SkillAction,
}

pub fn parse_skill_overrides(text: &str) -> Result<Vec<SkillOverride>> {
    Ok(serde_json::from_str(text)?)
}

fn override_map<'o>(
    overrides: &'o [SkillOverride],
    skills: &[SkillRecord],
) -> Result<BTreeMap<&'o str, SkillAction>> {
    let known: BTreeSet<&str> = skills.iter().map(|s| s.skill_id.as_str()).collect();
    let mut map = BTreeMap::new();
    for o in overrides {
        if !known.contains(o.skill_id.as_str()) {
            return Err(Error::UnknownSkill(o.skill_id.clone()));
        }
        map.insert(o.skill_id.as_str(), o.action);
    }
    Ok(map)
}

/// Stamps reviewer decisions onto kept matches. Later overrides for the
/// same skill win.
pub fn apply_review(
    mut matches: Vec<SkillMatch>,
    overrides: &[SkillOverride],
    skills: &[SkillRecord],
) -> Result<Vec<SkillMatch>> {
    let map = override_map(overrides, skills)?;
    for m in matches.iter_mut().filter(|m| m.kept) {
        m.review = match map.get(m.skill_id.as_str()) {
            Some(SkillAction::Approve) => Review::Approved,
            Some(SkillAction::Reject) => Review::Rejected,
            None => m.review,
        };
    }
    Ok(matches)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkillEvidence {
    pub skill_id: String,
    pub label: String,
    pub category: SkillCategory,
    pub green: bool,
    /// Number of kept sentences supporting the skill.
    pub evidence: usize,
}

/// Kept, non-rejected matches grouped by skill, most evidence first.
pub fn derive_skill_set(
    matches: &[SkillMatch],
    overrides: &[SkillOverride],
    skills: &[SkillRecord],
) -> Result<Vec<SkillEvidence>> {
    let map = override_map(overrides, skills)?;
    let by_id: BTreeMap<&str, &SkillRecord> = skills.iter().map(|s| (s.skill_id.as_str(), s)).collect();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for m in matches {
        if !m.kept || m.review == Review::Rejected {
            continue;
        }
        if map.get(m.skill_id.as_str()) == Some(&SkillAction::Reject) {
            continue;
        }
        *counts.entry(m.skill_id.as_str()).or_default() += 1;
    }
    let mut out = counts
        .into_iter()
        .map(|(id, evidence)| {
            let s = by_id.get(id).ok_or_else(|| Error::UnknownSkill(id.to_string()))?;
            Ok(SkillEvidence {
                skill_id: id.to_string(),
                label: s.label.clone(),
                category: s.category,
                green: s.green,
                evidence,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by(|a, b| b.evidence.cmp(&a.evidence).then_with(|| a.skill_id.cmp(&b.skill_id)));
    Ok(out)
}

pub fn matches_to_jsonl(matches: &[SkillMatch]) -> Result<String> {
    let mut out = String::new();
    for m in matches {
        out.push_str(&serde_json::to_string(m)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_matches_jsonl(text: &str) -> Result<Vec<SkillMatch>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse { line: i + 1, reason: e.to_string() })
        })
        .collect()
}
