use std::hint::black_box;
use std::path::{Path, PathBuf};

use criterion::{criterion_group, criterion_main, Criterion};
use wprof_core::corpus::{ingest_corpus, Sentence};
use wprof_core::gapengine::{compute_gap, parse_assessment, Weights};
use wprof_core::patentset::{compile_query, execute_query};
use wprof_core::profiledb::{build_profile_db, cluster_archetypes, load_archetypes, Similarity};
use wprof_core::skillmap::{load_skills, match_sentences_to_skills, HashedBag};
use wprof_core::techner::{extract_all, KeyTermSet};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn pipeline_stages(c: &mut Criterion) {
    let corpus = ingest_corpus(&fixture("corpus.jsonl")).unwrap();
    let segmented = corpus.segment();
    let query = compile_query(&std::fs::read_to_string(fixture("energy_mgmt.json")).unwrap()).unwrap();
    let sentences: Vec<&Sentence> = segmented.iter().flat_map(|(_, s)| s).collect();
    let key_terms = KeyTermSet::default();
    let skills = load_skills(&fixture("skills.csv")).unwrap();
    let provider = HashedBag::default();

    c.bench_function("segment corpus", |b| b.iter(|| black_box(corpus.segment())));
    c.bench_function("execute query", |b| b.iter(|| black_box(execute_query(&segmented, &query))));
    c.bench_function("hearst extraction", |b| b.iter(|| black_box(extract_all(&sentences, &key_terms))));
    c.bench_function("skill matching", |b| {
        b.iter(|| black_box(match_sentences_to_skills(&sentences, &skills, &provider, 0.7).unwrap()))
    });
}

fn profiles(c: &mut Criterion) {
    let archetypes = load_archetypes(&fixture("archetypes.json")).unwrap();
    let skills = load_skills(&fixture("skills.csv")).unwrap();
    let db = build_profile_db(archetypes.clone(), skills, &[], 3).unwrap();
    let user = parse_assessment(&std::fs::read_to_string(fixture("assessments/asm-03.json")).unwrap()).unwrap();
    let weights = Weights::default();

    c.bench_function("cluster archetypes", |b| {
        b.iter(|| black_box(cluster_archetypes(&archetypes, 3, &Similarity::SkillJaccard).unwrap()))
    });
    c.bench_function("gap report", |b| b.iter(|| black_box(compute_gap(&user, &db, &weights).unwrap())));
}

criterion_group!(benches, pipeline_stages, profiles);
criterion_main!(benches);
