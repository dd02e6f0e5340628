use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SkillCategory {
    Hard,
    Digital,
    Soft,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkillRecord {
    pub skill_id: String,
    pub label: String,
    pub description: String,
    pub category: SkillCategory,
    #[serde(deserialize_with = "flag")]
    pub green: bool,
}

impl SkillRecord {
    /// Hard and digital skills are possessed or not; soft skills are leveled.
    pub fn is_binary(&self) -> bool {
        self.category != SkillCategory::Soft
    }
}

fn flag<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<bool, D::Error> {
    struct Flag;
    impl serde::de::Visitor<'_> for Flag {
        type Value = bool;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("a boolean flag")
        }

        fn visit_bool<E: serde::de::Error>(self, v: bool) -> std::result::Result<bool, E> {
            Ok(v)
        }

        fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<bool, E> {
            match v {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(E::custom(format!("invalid green flag {v}"))),
            }
        }

        fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<bool, E> {
            self.visit_u64(u64::try_from(v).map_err(|_| E::custom(format!("invalid green flag {v}")))?)
        }

        fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<bool, E> {
            match v.trim().to_ascii_lowercase().as_str() {
                "true" | "1" | "yes" | "y" => Ok(true),
                "false" | "0" | "no" | "n" | "" => Ok(false),
                other => Err(E::custom(format!("invalid green flag {other:?}"))),
            }
        }
    }
    d.deserialize_any(Flag)
}

/// Parses a `skill_id,label,description,category,green` CSV.
pub fn parse_skills(text: &str) -> Result<Vec<SkillRecord>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut skills: Vec<SkillRecord> = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, row) in reader.deserialize().enumerate() {
        let skill: SkillRecord = row?;
        if skill.skill_id.is_empty() {
            return Err(Error::Parse { line: i + 2, reason: "empty skill_id".into() });
        }
        if skill.label.is_empty() {
            return Err(Error::Parse {
                line: i + 2,
                reason: format!("skill {:?} has an empty label", skill.skill_id),
            });
        }
        if !seen.insert(skill.skill_id.clone()) {
            return Err(Error::DuplicateSkill(skill.skill_id));
        }
        skills.push(skill);
    }
    Ok(skills)
}

pub fn load_skills(path: &std::path::Path) -> Result<Vec<SkillRecord>> {
    parse_skills(&crate::error::read_file(path)?)
}
