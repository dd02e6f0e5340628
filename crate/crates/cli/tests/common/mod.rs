#![allow(dead_code)]

use std::path::{Path, PathBuf};

use wprof_cli::{PipelineConfig, PipelineInputs, QueryInputs, SkillInputs};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_inputs() -> PipelineInputs {
    let fx = fixtures();
    PipelineInputs {
        corpus: fx.join("corpus.jsonl"),
        query: QueryInputs {
            ontology: fx.join("energy_mgmt.json"),
            labels: Some(fx.join("labels.csv")),
            seeds: Some(fx.join("seeds.txt")),
            sample_size: 20,
            refine_top: 10,
        },
        synonyms: Some(fx.join("synonyms.tsv")),
        curation: Some(fx.join("curation.json")),
        skills: SkillInputs {
            skills: fx.join("skills.csv"),
            overrides: Some(fx.join("skill_overrides.json")),
            embeddings: None,
        },
        archetypes: fx.join("archetypes.json"),
        k: 3,
    }
}

pub fn config(dir: &Path) -> PipelineConfig {
    PipelineConfig::with_output_dir(dir)
}

pub fn golden(name: &str) -> serde_json::Value {
    let text = std::fs::read_to_string(fixtures().join("golden").join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn assessment_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixtures().join("assessments"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}
