//! Pipeline stages behind the `wprof` command, usable as a library.

pub mod pipeline;

pub use pipeline::{
    assess_file, build_db, export, extract, ingest, load_database, map_skills, query, run_pipeline, trends,
    Outcome, PipelineConfig, PipelineInputs, QueryInputs, SkillInputs, StageError,
};
