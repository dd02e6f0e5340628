//! The Worker Profiler database: job archetypes with ideal skill sets, the
//! skill taxonomy, and bottom-up validation of the macro-classes.

mod cluster;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::skillmap::{SkillCategory, SkillEvidence, SkillRecord};

pub use cluster::{
    agglomerate, cluster_archetypes, jaccard, purity, similarity_matrix, validate_assignment, validate_macroclasses,
    AgreementReport, BottomUpAssignment, Similarity,
};

pub const MAX_LEVEL: u8 = 4;

/// Descriptors of the soft-skill levels 0 to 4.
pub const LEVEL_SCALE: [&str; 5] = ["none", "basic", "intermediate", "advanced", "expert"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MacroClass {
    TechniciansOperators,
    EngineeringProfessionals,
    ManagersConsultants,
}

impl MacroClass {
    pub const ALL: [MacroClass; 3] = [
        MacroClass::TechniciansOperators,
        MacroClass::EngineeringProfessionals,
        MacroClass::ManagersConsultants,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MacroClass::TechniciansOperators => "TechniciansOperators",
            MacroClass::EngineeringProfessionals => "EngineeringProfessionals",
            MacroClass::ManagersConsultants => "ManagersConsultants",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobArchetype {
    pub archetype_id: String,
    pub title: String,
    #[serde(default)]
    pub description: String,
    pub macro_class_topdown: MacroClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub macro_class_bottomup: Option<MacroClass>,
    /// Hard and digital skill ids.
    pub binary_skills: BTreeSet<String>,
    /// Soft skill id → target level 0 to 4.
    #[serde(default)]
    pub soft_targets: BTreeMap<String, u8>,
    /// Binary skills backed by patent-mapping evidence.
    #[serde(default)]
    pub evidence_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub archetypes_sha256: String,
    pub skills_sha256: String,
    pub evidence_sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    pub archetypes: usize,
    pub skills: usize,
    pub orphan_skills: Vec<String>,
    /// Digital skills over all skills.
    pub digital_share_of_skills: f64,
    /// Digital skill references over all archetype-skill references.
    pub digital_share_of_links: f64,
    pub evidenced_skills: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom_up: Option<BottomUpAssignment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agreement: Option<AgreementReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileDatabase {
    pub version: String,
    /// Sorted by archetype_id.
    pub archetypes: Vec<JobArchetype>,
    /// Sorted by skill_id.
    pub skills: Vec<SkillRecord>,
    pub provenance: Provenance,
    pub report: BuildReport,
}

impl ProfileDatabase {
    pub fn archetype(&self, id: &str) -> Option<&JobArchetype> {
        self.archetypes
            .binary_search_by(|a| a.archetype_id.as_str().cmp(id))
            .ok()
            .map(|i| &self.archetypes[i])
    }

    pub fn skill(&self, id: &str) -> Option<&SkillRecord> {
        self.skills
            .binary_search_by(|s| s.skill_id.as_str().cmp(id))
            .ok()
            .map(|i| &self.skills[i])
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Parses a database artifact, restoring the lookup order invariants.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut db: ProfileDatabase = serde_json::from_str(text)?;
        db.archetypes.sort_by(|a, b| a.archetype_id.cmp(&b.archetype_id));
        db.skills.sort_by(|a, b| a.skill_id.cmp(&b.skill_id));
        Ok(db)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&crate::error::read_file(path)?)
    }
}

pub fn parse_archetypes(text: &str) -> Result<Vec<JobArchetype>> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_archetypes(path: &std::path::Path) -> Result<Vec<JobArchetype>> {
    parse_archetypes(&crate::error::read_file(path)?)
}

fn digest_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(hex::encode(Sha256::digest(serde_json::to_vec(value)?)))
}

fn check_archetype(a: &JobArchetype, skills: &BTreeMap<&str, &SkillRecord>) -> Result<()> {
    let invalid = |reason: String| Error::InvalidArchetype { archetype_id: a.archetype_id.clone(), reason };
    if a.archetype_id.trim().is_empty() {
        return Err(invalid("empty archetype_id".into()));
    }
    if a.title.trim().is_empty() {
        return Err(invalid("empty title".into()));
    }
    let dangling = |id: &str| Error::DanglingSkill { archetype_id: a.archetype_id.clone(), skill_id: id.to_string() };
    for id in &a.binary_skills {
        let s = skills.get(id.as_str()).ok_or_else(|| dangling(id))?;
        if !s.is_binary() {
            return Err(invalid(format!("soft skill {id:?} listed in binary_skills")));
        }
    }
    for (id, level) in &a.soft_targets {
        let s = skills.get(id.as_str()).ok_or_else(|| dangling(id))?;
        if s.category != SkillCategory::Soft {
            return Err(invalid(format!("{id:?} in soft_targets is not a soft skill")));
        }
        if a.binary_skills.contains(id) {
            return Err(invalid(format!("{id:?} is both binary and soft")));
        }
        if *level > MAX_LEVEL {
            return Err(invalid(format!("soft target {id:?} level {level} outside 0..={MAX_LEVEL}")));
        }
    }
    Ok(())
}

/// Assembles and validates the database. Bottom-up classes are derived by
/// skill-Jaccard clustering into `k` groups when there are enough archetypes.
pub fn build_profile_db(
    archetypes: Vec<JobArchetype>,
    skills: Vec<SkillRecord>,
    evidence: &[SkillEvidence],
    k: usize,
) -> Result<ProfileDatabase> {
    if archetypes.is_empty() {
        return Err(Error::NoArchetypes);
    }
    let provenance = Provenance {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        archetypes_sha256: digest_json(&archetypes)?,
        skills_sha256: digest_json(&skills)?,
        evidence_sha256: digest_json(&evidence)?,
    };

    let mut skills = skills;
    skills.sort_by(|a, b| a.skill_id.cmp(&b.skill_id));
    if let Some(w) = skills.windows(2).find(|w| w[0].skill_id == w[1].skill_id) {
        return Err(Error::DuplicateSkill(w[0].skill_id.clone()));
    }
    let by_id: BTreeMap<&str, &SkillRecord> = skills.iter().map(|s| (s.skill_id.as_str(), s)).collect();

    let mut archetypes = archetypes;
    archetypes.sort_by(|a, b| a.archetype_id.cmp(&b.archetype_id));
    if let Some(w) = archetypes.windows(2).find(|w| w[0].archetype_id == w[1].archetype_id) {
        return Err(Error::DuplicateArchetype(w[0].archetype_id.clone()));
    }
    for a in &archetypes {
        check_archetype(a, &by_id)?;
    }

    let evidenced: BTreeSet<&str> = evidence.iter().map(|e| e.skill_id.as_str()).collect();
    if let Some(unknown) = evidenced.iter().find(|id| !by_id.contains_key(*id)) {
        return Err(Error::UnknownSkill(unknown.to_string()));
    }
    for a in &mut archetypes {
        a.evidence_count = a.binary_skills.iter().filter(|s| evidenced.contains(s.as_str())).count();
    }

    let referenced: BTreeSet<&str> = archetypes
        .iter()
        .flat_map(|a| a.binary_skills.iter().chain(a.soft_targets.keys()))
        .map(String::as_str)
        .collect();
    let orphan_skills: Vec<String> = skills
        .iter()
        .filter(|s| !referenced.contains(s.skill_id.as_str()))
        .map(|s| s.skill_id.clone())
        .collect();
    let is_digital = |id: &str| by_id.get(id).is_some_and(|s| s.category == SkillCategory::Digital);
    let digital_skills = skills.iter().filter(|s| s.category == SkillCategory::Digital).count();
    let (mut links, mut digital_links) = (0usize, 0usize);
    for a in &archetypes {
        for id in a.binary_skills.iter().chain(a.soft_targets.keys()) {
            links += 1;
            digital_links += usize::from(is_digital(id));
        }
    }
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };

    let (bottom_up, agreement) = if archetypes.len() >= k && k > 0 {
        let assignment = cluster_archetypes(&archetypes, k, &Similarity::SkillJaccard)?;
        for a in &mut archetypes {
            a.macro_class_bottomup = assignment.class_of(&a.archetype_id);
        }
        let agreement = validate_assignment(&archetypes, &assignment);
        (Some(assignment), Some(agreement))
    } else {
        (None, None)
    };

    let report = BuildReport {
        archetypes: archetypes.len(),
        skills: skills.len(),
        orphan_skills,
        digital_share_of_skills: ratio(digital_skills, skills.len()),
        digital_share_of_links: ratio(digital_links, links),
        evidenced_skills: evidenced.len(),
        bottom_up,
        agreement,
    };
    let version = digest_json(&(&archetypes, &skills))?[..16].to_string();
    Ok(ProfileDatabase { version, archetypes, skills, provenance, report })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchetypeSummary {
    pub archetype_id: String,
    pub title: String,
    pub description: String,
    pub macro_class: MacroClass,
}

/// All archetypes ordered by title, then id.
pub fn list_archetypes(db: &ProfileDatabase) -> Vec<ArchetypeSummary> {
    let mut out: Vec<ArchetypeSummary> = db
        .archetypes
        .iter()
        .map(|a| ArchetypeSummary {
            archetype_id: a.archetype_id.clone(),
            title: a.title.clone(),
            description: a.description.clone(),
            macro_class: a.macro_class_topdown,
        })
        .collect();
    out.sort_by(|a, b| a.title.cmp(&b.title).then_with(|| a.archetype_id.cmp(&b.archetype_id)));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistItem {
    pub skill_id: String,
    pub label: String,
    pub green: bool,
    /// Part of the archetype's ideal set.
    pub ideal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checklist {
    pub archetype_id: String,
    pub hard: Vec<ChecklistItem>,
    pub digital: Vec<ChecklistItem>,
    pub soft: Vec<ChecklistItem>,
    pub soft_scale: Vec<String>,
}

/// Every database skill by category, ideal ones first, then by label.
pub fn skill_checklist(db: &ProfileDatabase, archetype_id: &str) -> Result<Checklist> {
    let a = db
        .archetype(archetype_id)
        .ok_or_else(|| Error::UnknownArchetype(archetype_id.to_string()))?;
    let mut lists: BTreeMap<SkillCategory, Vec<ChecklistItem>> = BTreeMap::new();
    for s in &db.skills {
        let target = a.soft_targets.get(&s.skill_id).copied();
        lists.entry(s.category).or_default().push(ChecklistItem {
            skill_id: s.skill_id.clone(),
            label: s.label.clone(),
            green: s.green,
            ideal: a.binary_skills.contains(&s.skill_id) || target.is_some(),
            target,
        });
    }
    for list in lists.values_mut() {
        list.sort_by(|x, y| {
            y.ideal
                .cmp(&x.ideal)
                .then_with(|| x.label.cmp(&y.label))
                .then_with(|| x.skill_id.cmp(&y.skill_id))
        });
    }
    let mut take = |c| lists.remove(&c).unwrap_or_default();
    Ok(Checklist {
        archetype_id: a.archetype_id.clone(),
        hard: take(SkillCategory::Hard),
        digital: take(SkillCategory::Digital),
        soft: take(SkillCategory::Soft),
        soft_scale: LEVEL_SCALE.iter().map(|s| s.to_string()).collect(),
    })
}
