//! Scores a worker's self-assessment against archetype skill sets.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, FieldError, Result};
use crate::profiledb::{jaccard, JobArchetype, ProfileDatabase, MAX_LEVEL};
use crate::skillmap::SkillCategory;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Assessment {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub assessment_id: String,
    pub archetype_id: String,
    #[serde(default)]
    pub selected_binary: BTreeSet<String>,
    /// Kept wide so out-of-range levels surface as field errors.
    #[serde(default)]
    pub soft_levels: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_at: Option<String>,
}

impl Assessment {
    pub fn level(&self, skill_id: &str) -> u8 {
        self.soft_levels
            .get(skill_id)
            .map(|l| (*l).clamp(0, MAX_LEVEL as i64) as u8)
            .unwrap_or(0)
    }

    /// Digest-based id used when the caller supplies none.
    pub fn derived_id(&self, salt: &str) -> Result<String> {
        let mut body = self.clone();
        body.assessment_id.clear();
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(&body)?);
        h.update(salt.as_bytes());
        Ok(format!("a-{}", &hex::encode(h.finalize())[..16]))
    }
}

pub fn parse_assessment(text: &str) -> Result<Assessment> {
    Ok(serde_json::from_str(text)?)
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-' || b == b'_')
}

/// Collects every problem with the assessment, each pinned to a field path.
pub fn validate_assessment(a: &Assessment, db: &ProfileDatabase) -> Result<()> {
    let mut errors = Vec::new();
    if !a.assessment_id.is_empty() && !valid_id(&a.assessment_id) {
        errors.push(FieldError::new("assessment_id", "must be 1-64 characters of [A-Za-z0-9_-]"));
    }
    if db.archetype(&a.archetype_id).is_none() {
        errors.push(FieldError::new("archetype_id", format!("unknown archetype {:?}", a.archetype_id)));
    }
    for id in &a.selected_binary {
        match db.skill(id) {
            None => errors.push(FieldError::new(format!("selected_binary.{id}"), "unknown skill")),
            Some(s) if !s.is_binary() => {
                errors.push(FieldError::new(format!("selected_binary.{id}"), "soft skills are rated in soft_levels"))
            }
            _ => {}
        }
    }
    for (id, level) in &a.soft_levels {
        let field = format!("soft_levels.{id}");
        match db.skill(id) {
            None => errors.push(FieldError::new(field.clone(), "unknown skill")),
            Some(s) if s.category != SkillCategory::Soft => {
                errors.push(FieldError::new(field.clone(), "not a soft skill"))
            }
            _ => {}
        }
        if !(0..=MAX_LEVEL as i64).contains(level) {
            errors.push(FieldError::new(field, format!("level {level} outside 0..={MAX_LEVEL}")));
        }
    }
    if let Some(ts) = &a.created_at {
        if chrono::DateTime::parse_from_rfc3339(ts).is_err() {
            errors.push(FieldError::new("created_at", "expected an RFC 3339 timestamp"));
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidAssessment(errors))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weights {
    pub binary: f64,
    pub soft: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Self { binary: 0.7, soft: 0.3 }
    }
}

impl Weights {
    pub fn new(binary: f64, soft: f64) -> Result<Self> {
        let w = Self { binary, soft };
        w.check()?;
        Ok(w)
    }

    pub fn check(&self) -> Result<()> {
        let ok = self.binary.is_finite()
            && self.soft.is_finite()
            && self.binary >= 0.0
            && self.soft >= 0.0
            && (self.binary + self.soft - 1.0).abs() <= 1e-9;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidWeights { binary: self.binary, soft: self.soft })
        }
    }
}

/// `w_b · (1 − J(selected, ideal)) + w_s · Σ|current − target| / (4·|targets|)`.
pub fn distance(user: &Assessment, candidate: &JobArchetype, weights: &Weights) -> Result<f64> {
    weights.check()?;
    let binary = 1.0 - jaccard(&user.selected_binary, &candidate.binary_skills);
    let soft = if candidate.soft_targets.is_empty() {
        0.0
    } else {
        let total: u32 = candidate
            .soft_targets
            .iter()
            .map(|(id, target)| user.level(id).abs_diff(*target) as u32)
            .sum();
        total as f64 / (MAX_LEVEL as f64 * candidate.soft_targets.len() as f64)
    };
    Ok(weights.binary * binary + weights.soft * soft)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighbor {
    pub archetype_id: String,
    pub title: String,
    pub distance: f64,
}

fn quantize(d: f64) -> i64 {
    (d * 1e9).round() as i64
}

/// The `k` closest archetypes other than the chosen one (unless
/// `include_own`). Distances equal to 1e-9 tie; ties prefer the larger ideal
/// set, then the smaller id.
pub fn nearest_archetypes(
    user: &Assessment,
    db: &ProfileDatabase,
    k: usize,
    weights: &Weights,
    include_own: bool,
) -> Result<Vec<Neighbor>> {
    let mut scored = Vec::new();
    for a in &db.archetypes {
        if !include_own && a.archetype_id == user.archetype_id {
            continue;
        }
        scored.push((distance(user, a, weights)?, a));
    }
    if scored.len() < k {
        return Err(Error::TooFewArchetypes { needed: k, found: scored.len() });
    }
    scored.sort_by(|(da, a), (db_, b)| {
        quantize(*da)
            .cmp(&quantize(*db_))
            .then_with(|| b.binary_skills.len().cmp(&a.binary_skills.len()))
            .then_with(|| a.archetype_id.cmp(&b.archetype_id))
    });
    Ok(scored
        .into_iter()
        .take(k)
        .map(|(d, a)| Neighbor { archetype_id: a.archetype_id.clone(), title: a.title.clone(), distance: d })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Improve,
    Maintain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SoftComparison {
    pub skill_id: String,
    pub label: String,
    pub current: u8,
    pub target: u8,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MissingSkill {
    pub skill_id: String,
    pub label: String,
    pub green: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MissingBinary {
    pub hard: Vec<MissingSkill>,
    pub digital: Vec<MissingSkill>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub missing_binary: MissingBinary,
    pub soft_comparisons: Vec<SoftComparison>,
    pub coverage: f64,
    pub nearest: Vec<Neighbor>,
    pub distance_to_own: f64,
    pub weights: Weights,
}

fn comparisons(user: &Assessment, archetype: &JobArchetype, db: &ProfileDatabase) -> Vec<SoftComparison> {
    archetype
        .soft_targets
        .iter()
        .map(|(id, &target)| {
            let current = user.level(id);
            SoftComparison {
                skill_id: id.clone(),
                label: db.skill(id).map(|s| s.label.clone()).unwrap_or_else(|| id.clone()),
                current,
                target,
                verdict: if current < target { Verdict::Improve } else { Verdict::Maintain },
            }
        })
        .collect()
}

/// Chart rows for the archetype's soft targets, ordered by label.
pub fn soft_comparison_series(user: &Assessment, archetype: &JobArchetype, db: &ProfileDatabase) -> Vec<SoftComparison> {
    let mut rows = comparisons(user, archetype, db);
    rows.sort_by(|a, b| a.label.cmp(&b.label).then_with(|| a.skill_id.cmp(&b.skill_id)));
    rows
}

pub const NEAREST_K: usize = 3;

pub fn compute_gap(user: &Assessment, db: &ProfileDatabase, weights: &Weights) -> Result<GapReport> {
    weights.check()?;
    validate_assessment(user, db)?;
    let own = db
        .archetype(&user.archetype_id)
        .ok_or_else(|| Error::UnknownArchetype(user.archetype_id.clone()))?;

    let mut missing = MissingBinary::default();
    for id in own.binary_skills.difference(&user.selected_binary) {
        let s = db.skill(id).ok_or_else(|| Error::UnknownSkill(id.clone()))?;
        let item = MissingSkill { skill_id: id.clone(), label: s.label.clone(), green: s.green };
        match s.category {
            SkillCategory::Digital => missing.digital.push(item),
            _ => missing.hard.push(item),
        }
    }
    let coverage = if own.binary_skills.is_empty() {
        1.0
    } else {
        own.binary_skills.intersection(&user.selected_binary).count() as f64 / own.binary_skills.len() as f64
    };
    Ok(GapReport {
        missing_binary: missing,
        soft_comparisons: comparisons(user, own, db),
        coverage,
        nearest: nearest_archetypes(user, db, NEAREST_K, weights, false)?,
        distance_to_own: distance(user, own, weights)?,
        weights: *weights,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentResponse {
    pub assessment_id: String,
    pub report: GapReport,
}

/// Canonical JSON shared by offline and served reports.
pub fn render_response(response: &AssessmentResponse) -> Result<String> {
    let mut s = serde_json::to_string_pretty(response)?;
    s.push('\n');
    Ok(s)
}

/// Validates, assigns an id when missing (`salt` varies the derived id)
/// and computes the report.
pub fn assess(user: &Assessment, db: &ProfileDatabase, weights: &Weights, salt: &str) -> Result<AssessmentResponse> {
    let report = compute_gap(user, db, weights)?;
    let assessment_id = if user.assessment_id.is_empty() {
        user.derived_id(salt)?
    } else {
        user.assessment_id.clone()
    };
    Ok(AssessmentResponse { assessment_id, report })
}

/// Orders neighbors the way [`nearest_archetypes`] does; exposed for oracles.
pub fn neighbor_order(a: (f64, usize, &str), b: (f64, usize, &str)) -> Ordering {
    quantize(a.0)
        .cmp(&quantize(b.0))
        .then_with(|| b.1.cmp(&a.1))
        .then_with(|| a.2.cmp(b.2))
}
