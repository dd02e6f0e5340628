//! Core algorithms of the worker profiler: patent corpus mining, technology
//! extraction and trends, skill mapping, the profile database and the
//! skill-gap engine.

pub mod artifact;
pub mod corpus;
pub mod error;
pub mod gapengine;
pub mod patentset;
pub mod profiledb;
pub mod skillmap;
pub mod techner;
pub mod trends;

pub use error::{Error, FieldError, Result};

pub use artifact::{Artifact, Fingerprint};
pub use corpus::{Corpus, PatentDocument, Section, Sentence, SentenceRef};
pub use gapengine::{Assessment, AssessmentResponse, GapReport, Weights};
pub use patentset::{PatentSet, QueryOntology};
pub use profiledb::{JobArchetype, MacroClass, ProfileDatabase};
pub use skillmap::{EmbeddingProvider, SkillCategory, SkillEvidence, SkillMatch, SkillRecord};
pub use techner::{KeyTermSet, TechnologyCluster, TechnologyMention};
pub use trends::{Maturity, MaturityParams, TrendSeries};
