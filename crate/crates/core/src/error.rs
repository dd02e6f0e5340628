use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("duplicate doc_id {0:?}")]
    DuplicateDocument(String),

    #[error("document {doc_id:?}: {reason}")]
    InvalidDocument { doc_id: String, reason: String },

    #[error("query error at {location}: {reason}")]
    Query { location: String, reason: String },

    #[error("query has no positive leaf")]
    NoPositiveLeaf,

    #[error("invalid regex {pattern:?}: {reason}")]
    InvalidRegex { pattern: String, reason: String },

    #[error("sample size {k} exceeds patent set size {size}")]
    SampleTooLarge { k: usize, size: usize },

    #[error("sample size must be at least 1")]
    EmptySample,

    #[error("missing label for sampled document {0:?}")]
    MissingLabel(String),

    #[error("unknown seed document {0:?}")]
    UnknownSeed(String),

    #[error("seed list is empty")]
    EmptySeeds,

    #[error("insufficient labels: need at least one relevant and one non-relevant document")]
    InsufficientLabels,

    #[error("unknown cluster_id {0:?}")]
    UnknownCluster(String),

    #[error("merge cycle involving {0:?}")]
    MergeCycle(String),

    #[error("empty patent set")]
    EmptyPatentSet,

    #[error("embedding not found for text digest {0}")]
    EmbeddingMissing(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("zero vector is not comparable")]
    ZeroVector,

    #[error("skill list is empty")]
    NoSkills,

    #[error("unknown skill_id {0:?}")]
    UnknownSkill(String),

    #[error("duplicate skill_id {0:?}")]
    DuplicateSkill(String),

    #[error("no archetypes")]
    NoArchetypes,

    #[error("duplicate archetype_id {0:?}")]
    DuplicateArchetype(String),

    #[error("archetype {archetype_id:?} references unknown skill {skill_id:?}")]
    DanglingSkill {
        archetype_id: String,
        skill_id: String,
    },

    #[error("archetype {archetype_id:?}: {reason}")]
    InvalidArchetype {
        archetype_id: String,
        reason: String,
    },

    #[error("need at least {needed} archetypes, found {found}")]
    TooFewArchetypes { needed: usize, found: usize },

    #[error("unknown archetype {0:?}")]
    UnknownArchetype(String),

    #[error("invalid weights ({binary}, {soft}): must be non-negative and sum to 1")]
    InvalidWeights { binary: f64, soft: f64 },

    #[error("invalid assessment: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidAssessment(Vec<FieldError>),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// A validation failure pinned to a field path such as `soft_levels.s03`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for FieldError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
