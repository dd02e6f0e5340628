//! File-based pipeline stages. Each stage reads its predecessors' artifacts
//! from the output directory and writes its own, stamped with a
//! [`Fingerprint`]. A stage whose fingerprint is unchanged is skipped.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use wprof_core::artifact::{read_fingerprint, Artifact, Fingerprint};
use wprof_core::corpus::{parse_corpus, Corpus, CorpusStats, PatentDocument, SegmentedCorpus, Sentence};
use wprof_core::gapengine::{assess, parse_assessment, render_response, Weights};
use wprof_core::patentset::{
    compile_query, estimate_precision, estimate_recall, execute_query, parse_labels, refinement_report, PatentSet,
    QueryOntology, RefinementReport,
};
use wprof_core::profiledb::{
    build_profile_db, list_archetypes, parse_archetypes, skill_checklist, ArchetypeSummary, Checklist,
    ProfileDatabase, LEVEL_SCALE,
};
use wprof_core::skillmap::{
    apply_review, derive_skill_set, match_sentences_to_skills, matches_to_jsonl, parse_skill_overrides, parse_skills,
    EmbeddingProvider, FileProvider, HashedBag, SkillEvidence, SkillOverride, SkillRecord, DEFAULT_THRESHOLD,
};
use wprof_core::techner::{
    apply_curation, cluster_technologies, extract_all, parse_curation, KeyTermSet, RejectedSynonym,
    TechnologyCluster, TechnologyMention,
};
use wprof_core::trends::{
    compute_trends, reference_year, shares_csv, technology_shares, trends_csv, CountMode, MaturityParams, ShareRow,
    TrendSeries,
};

pub const CORPUS_FILE: &str = "corpus.json";
pub const PATENTSET_FILE: &str = "patentset.json";
pub const TECHNOLOGIES_FILE: &str = "technologies.json";
pub const TRENDS_FILE: &str = "trends.json";
pub const TRENDS_CSV: &str = "trends.csv";
pub const SHARES_CSV: &str = "shares.csv";
pub const MATCHES_FILE: &str = "skill_matches.jsonl";
pub const SKILLS_FILE: &str = "skills.json";
pub const DB_FILE: &str = "profile_db.json";
pub const BUNDLE_FILE: &str = "ui_bundle.json";

#[derive(Debug, thiserror::Error)]
pub enum StageError {
    #[error("{stage} requires {needs} output: {} not found; run `wprof {needs}` first", path.display())]
    MissingPredecessor {
        stage: &'static str,
        needs: &'static str,
        path: PathBuf,
    },

    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },

    #[error("{}: not a valid artifact: {reason}", path.display())]
    Artifact { path: PathBuf, reason: String },

    #[error("invalid parameter {name}: {reason}")]
    Param { name: &'static str, reason: String },

    #[error("server: {0}")]
    Server(io::Error),

    #[error(transparent)]
    Core(#[from] wprof_core::Error),
}

impl StageError {
    /// Short machine-readable error kind.
    pub fn kind(&self) -> String {
        match self {
            Self::MissingPredecessor { .. } => "missing_predecessor".into(),
            Self::Read { .. } => "read".into(),
            Self::Write { .. } => "write".into(),
            Self::Artifact { .. } => "artifact".into(),
            Self::Param { .. } => "parameter".into(),
            Self::Server(_) => "server".into(),
            Self::Core(e) => core_kind(e),
        }
    }
}

fn core_kind(e: &wprof_core::Error) -> String {
    let debug = format!("{e:?}");
    let name: String = debug.chars().take_while(|c| c.is_ascii_alphanumeric()).collect();
    let mut out = String::new();
    for (i, c) in name.chars().enumerate() {
        if c.is_ascii_uppercase() && i > 0 {
            out.push('_');
        }
        out.push(c.to_ascii_lowercase());
    }
    out
}

pub type Result<T, E = StageError> = std::result::Result<T, E>;

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub output_dir: PathBuf,
    pub seed: u64,
    pub threshold: f64,
    pub weights: Weights,
    pub maturity: MaturityParams,
    pub count_mode: CountMode,
    /// Rerun stages even when their fingerprint is unchanged.
    pub force: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("out"),
            seed: 42,
            threshold: DEFAULT_THRESHOLD,
            weights: Weights::default(),
            maturity: MaturityParams::default(),
            count_mode: CountMode::default(),
            force: false,
        }
    }
}

impl PipelineConfig {
    pub fn with_output_dir(output_dir: impl Into<PathBuf>) -> Self {
        Self { output_dir: output_dir.into(), ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let param = |name, reason: String| Err(StageError::Param { name, reason });
        if !(0.0..=1.0).contains(&self.threshold) {
            return param("threshold", format!("{} is outside [0, 1]", self.threshold));
        }
        if self.maturity.window < 2 {
            return param("trend-window", "a slope needs at least 2 years".into());
        }
        if !(self.maturity.decline_ratio > 0.0 && self.maturity.decline_ratio <= 1.0) {
            return param("decline-ratio", format!("{} is outside (0, 1]", self.maturity.decline_ratio));
        }
        self.weights.check()?;
        Ok(())
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.output_dir.join(file)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Written { stage: String, files: Vec<PathBuf> },
    Unchanged { stage: String, files: Vec<PathBuf> },
}

impl Outcome {
    pub fn is_unchanged(&self) -> bool {
        matches!(self, Self::Unchanged { .. })
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| StageError::Read { path: path.to_path_buf(), source })
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| StageError::Read { path: path.to_path_buf(), source })
}

fn read_optional(path: Option<&Path>) -> Result<Option<String>> {
    path.map(read_text).transpose()
}

fn write(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("partial");
    fs::write(&tmp, contents)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|source| StageError::Write { path: path.to_path_buf(), source })
}

/// Reads a predecessor artifact's text, naming the stage to run when absent.
fn require(cfg: &PipelineConfig, stage: &'static str, needs: &'static str, file: &str) -> Result<String> {
    let path = cfg.path(file);
    if !path.exists() {
        return Err(StageError::MissingPredecessor { stage, needs, path });
    }
    read_text(&path)
}

fn decode<T: Serialize + DeserializeOwned>(cfg: &PipelineConfig, file: &str, text: &str) -> Result<T> {
    Artifact::<T>::from_json(text)
        .map(|a| a.data)
        .map_err(|e| StageError::Artifact { path: cfg.path(file), reason: e.to_string() })
}

/// Writes `file` (and `extras`) unless the stored fingerprint already
/// matches and every extra file is present.
fn run_stage<T, F>(cfg: &PipelineConfig, file: &str, extras: &[&str], fingerprint: Fingerprint, build: F) -> Result<Outcome>
where
    T: Serialize + DeserializeOwned,
    F: FnOnce() -> Result<(T, Vec<String>)>,
{
    let stage = fingerprint.stage.clone();
    let path = cfg.path(file);
    let mut files = vec![path.clone()];
    files.extend(extras.iter().map(|f| cfg.path(f)));
    if !cfg.force && files.iter().all(|f| f.exists()) {
        let stored = fs::read_to_string(&path).ok().and_then(|t| read_fingerprint(&t));
        if stored.as_ref() == Some(&fingerprint) {
            log::info!("{stage}: inputs unchanged, skipping");
            return Ok(Outcome::Unchanged { stage, files });
        }
    }
    let (data, extra_contents) = build()?;
    debug_assert_eq!(extra_contents.len(), extras.len());
    fs::create_dir_all(&cfg.output_dir).map_err(|source| StageError::Write { path: cfg.output_dir.clone(), source })?;
    // Extras first: the main artifact's fingerprint marks the stage complete.
    for (name, contents) in extras.iter().zip(&extra_contents) {
        write(&cfg.path(name), contents)?;
    }
    write(&path, &Artifact::new(fingerprint, data).to_json()?)?;
    Ok(Outcome::Written { stage, files })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusData {
    pub stats: CorpusStats,
    pub documents: Vec<PatentDocument>,
}

impl CorpusData {
    pub fn into_corpus(self) -> Result<Corpus> {
        Ok(Corpus::from_documents(self.documents)?)
    }
}

pub fn ingest(cfg: &PipelineConfig, corpus_path: &Path) -> Result<Outcome> {
    let bytes = read_bytes(corpus_path)?;
    let fp = Fingerprint::new("ingest").input("corpus", &bytes);
    run_stage(cfg, CORPUS_FILE, &[], fp, || {
        let text = String::from_utf8(bytes).map_err(|e| StageError::Read {
            path: corpus_path.to_path_buf(),
            source: io::Error::new(io::ErrorKind::InvalidData, e),
        })?;
        let corpus = parse_corpus(&text)?;
        let stats = corpus.stats();
        log::info!("ingest: {} documents, {} families", stats.documents, stats.families);
        Ok((CorpusData { stats, documents: corpus.documents().to_vec() }, vec![]))
    })
}

fn load_corpus(cfg: &PipelineConfig, stage: &'static str) -> Result<(String, Corpus)> {
    let text = require(cfg, stage, "ingest", CORPUS_FILE)?;
    let corpus = decode::<CorpusData>(cfg, CORPUS_FILE, &text)?.into_corpus()?;
    Ok((text, corpus))
}

#[derive(Debug, Clone, Default)]
pub struct QueryInputs {
    pub ontology: PathBuf,
    pub labels: Option<PathBuf>,
    pub seeds: Option<PathBuf>,
    pub sample_size: usize,
    /// Number of refinement candidates listed in each direction.
    pub refine_top: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryData {
    pub ontology: QueryOntology,
    pub set: PatentSet,
    /// Share of relevant documents when every retrieved one is labelled.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustive_precision: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refinement: Option<RefinementReport>,
}

/// Reproducible timestamp taken from `SOURCE_DATE_EPOCH`, if set.
fn source_date() -> Option<DateTime<Utc>> {
    let secs = std::env::var("SOURCE_DATE_EPOCH").ok()?.trim().parse::<i64>().ok()?;
    DateTime::from_timestamp(secs, 0)
}

fn parse_seeds(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

pub fn query(cfg: &PipelineConfig, inputs: &QueryInputs) -> Result<Outcome> {
    let (corpus_text, corpus) = load_corpus(cfg, "query")?;
    let ontology_text = read_text(&inputs.ontology)?;
    let labels_text = read_optional(inputs.labels.as_deref())?;
    let seeds_text = read_optional(inputs.seeds.as_deref())?;
    let mut fp = Fingerprint::new("query")
        .input("corpus", corpus_text.as_bytes())
        .input("ontology", ontology_text.as_bytes())
        .param("seed", cfg.seed)
        .param("sample_size", inputs.sample_size)
        .param("refine_top", inputs.refine_top);
    if let Some(t) = &labels_text {
        fp = fp.input("labels", t.as_bytes());
    }
    if let Some(t) = &seeds_text {
        fp = fp.input("seeds", t.as_bytes());
    }
    if let Some(d) = source_date() {
        fp = fp.param("created_at", d.to_rfc3339());
    }
    run_stage(cfg, PATENTSET_FILE, &[], fp, || {
        let ontology = compile_query(&ontology_text)?;
        let segmented = corpus.segment();
        let mut set = execute_query(&segmented, &ontology);
        set.created_at = source_date();
        log::info!("query {}: {} documents, {} families", ontology.name, set.len(), set.family_ids.len());
        let mut exhaustive_precision = None;
        let mut refinement = None;
        if let Some(text) = &labels_text {
            let labels = parse_labels(text)?;
            let k = inputs.sample_size.min(set.len());
            if k < inputs.sample_size {
                log::warn!("sample size {} exceeds the set; sampling all {k} documents", inputs.sample_size);
            }
            if k > 0 {
                set.precision = Some(estimate_precision(&set, k, &labels, cfg.seed)?);
            }
            let judged: Vec<bool> = set.doc_ids.iter().filter_map(|d| labels.get(d).copied()).collect();
            if !set.is_empty() && judged.len() == set.len() {
                exhaustive_precision = Some(judged.iter().filter(|r| **r).count() as f64 / judged.len() as f64);
            }
            refinement = match refinement_report(&set, &labels, &segmented, inputs.refine_top) {
                Ok(r) => Some(r),
                Err(wprof_core::Error::InsufficientLabels) => None,
                Err(e) => return Err(e.into()),
            };
        }
        if let Some(text) = &seeds_text {
            set.recall = Some(estimate_recall(&set, &parse_seeds(text), &corpus)?);
        }
        Ok((QueryData { ontology, set, exhaustive_precision, refinement }, vec![]))
    })
}

fn load_set(cfg: &PipelineConfig, stage: &'static str) -> Result<(String, QueryData)> {
    let text = require(cfg, stage, "query", PATENTSET_FILE)?;
    let data = decode(cfg, PATENTSET_FILE, &text)?;
    Ok((text, data))
}

/// Sentences of the set's documents, in document then sentence order.
fn set_sentences<'s>(set: &PatentSet, segmented: &'s SegmentedCorpus<'_>) -> Vec<&'s Sentence> {
    set.doc_ids.iter().flat_map(|d| segmented.sentences_of(d).iter()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechnologiesData {
    pub key_terms: KeyTermSet,
    pub rejected_synonyms: Vec<RejectedSynonym>,
    pub mentions: Vec<TechnologyMention>,
    pub clusters: Vec<TechnologyCluster>,
}

pub fn extract(cfg: &PipelineConfig, synonyms: Option<&Path>, curation: Option<&Path>) -> Result<Outcome> {
    let (corpus_text, corpus) = load_corpus(cfg, "extract")?;
    let (set_text, query) = load_set(cfg, "extract")?;
    let synonyms_text = read_optional(synonyms)?;
    let curation_text = read_optional(curation)?;
    let mut fp = Fingerprint::new("extract")
        .input("corpus", corpus_text.as_bytes())
        .input("patentset", set_text.as_bytes());
    if let Some(t) = &synonyms_text {
        fp = fp.input("synonyms", t.as_bytes());
    }
    if let Some(t) = &curation_text {
        fp = fp.input("curation", t.as_bytes());
    }
    run_stage(cfg, TECHNOLOGIES_FILE, &[], fp, || {
        let (key_terms, rejected_synonyms) = match &synonyms_text {
            Some(t) => KeyTermSet::default().expand(t)?,
            None => (KeyTermSet::default(), Vec::new()),
        };
        let segmented = corpus.segment();
        let mentions = extract_all(&set_sentences(&query.set, &segmented), &key_terms);
        let mut clusters = cluster_technologies(&mentions, |d| corpus.family_of(d));
        if let Some(t) = &curation_text {
            clusters = apply_curation(clusters, &parse_curation(t)?)?;
        }
        log::info!("extract: {} mentions, {} clusters", mentions.len(), clusters.len());
        Ok((TechnologiesData { key_terms, rejected_synonyms, mentions, clusters }, vec![]))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendsData {
    pub reference_year: Option<i32>,
    pub params: MaturityParams,
    pub count_mode: CountMode,
    pub series: Vec<TrendSeries>,
    pub shares: Vec<ShareRow>,
}

pub fn trends(cfg: &PipelineConfig) -> Result<Outcome> {
    let tech_text = require(cfg, "trends", "extract", TECHNOLOGIES_FILE)?;
    let (set_text, query) = load_set(cfg, "trends")?;
    let (corpus_text, corpus) = load_corpus(cfg, "trends")?;
    let fp = Fingerprint::new("trends")
        .input("corpus", corpus_text.as_bytes())
        .input("patentset", set_text.as_bytes())
        .input("technologies", tech_text.as_bytes())
        .param("window", cfg.maturity.window)
        .param("min_support", cfg.maturity.min_support)
        .param("decline_ratio", cfg.maturity.decline_ratio)
        .param("count_mode", format!("{:?}", cfg.count_mode).to_lowercase());
    run_stage(cfg, TRENDS_FILE, &[TRENDS_CSV, SHARES_CSV], fp, || {
        let tech: TechnologiesData = decode(cfg, TECHNOLOGIES_FILE, &tech_text)?;
        let segmented = corpus.segment();
        let series = compute_trends(&tech.clusters, &query.set, &segmented, cfg.count_mode, &cfg.maturity);
        let shares = technology_shares(&tech.clusters, &query.set, &segmented)?;
        let extras = vec![trends_csv(&series)?, shares_csv(&shares)?];
        let data = TrendsData {
            reference_year: reference_year(&query.set, &segmented),
            params: cfg.maturity,
            count_mode: cfg.count_mode,
            series,
            shares,
        };
        Ok((data, extras))
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkillsData {
    pub provider: String,
    pub threshold: f64,
    pub taxonomy: Vec<SkillRecord>,
    pub overrides: Vec<SkillOverride>,
    pub evidence: Vec<SkillEvidence>,
    pub kept_matches: usize,
}

#[derive(Debug, Clone, Default)]
pub struct SkillInputs {
    pub skills: PathBuf,
    pub overrides: Option<PathBuf>,
    /// Precomputed vectors; the hashed bag-of-lemmas embedder is used
    /// when absent.
    pub embeddings: Option<PathBuf>,
}

pub fn map_skills(cfg: &PipelineConfig, inputs: &SkillInputs) -> Result<Outcome> {
    let (corpus_text, corpus) = load_corpus(cfg, "map-skills")?;
    let (set_text, query) = load_set(cfg, "map-skills")?;
    let skills_text = read_text(&inputs.skills)?;
    let overrides_text = read_optional(inputs.overrides.as_deref())?;
    let provider: Box<dyn EmbeddingProvider> = match &inputs.embeddings {
        Some(p) => Box::new(FileProvider::parse(&read_text(p)?)?),
        None => Box::new(HashedBag::default()),
    };
    let mut fp = Fingerprint::new("map-skills")
        .input("corpus", corpus_text.as_bytes())
        .input("patentset", set_text.as_bytes())
        .input("skills", skills_text.as_bytes())
        .param("threshold", cfg.threshold)
        .param("provider", provider.name());
    if let Some(t) = &overrides_text {
        fp = fp.input("overrides", t.as_bytes());
    }
    run_stage(cfg, SKILLS_FILE, &[MATCHES_FILE], fp, || {
        let taxonomy = parse_skills(&skills_text)?;
        let overrides = match &overrides_text {
            Some(t) => parse_skill_overrides(t)?,
            None => Vec::new(),
        };
        let segmented = corpus.segment();
        let sentences = set_sentences(&query.set, &segmented);
        let matches = match_sentences_to_skills(&sentences, &taxonomy, provider.as_ref(), cfg.threshold)?;
        let matches = apply_review(matches, &overrides, &taxonomy)?;
        let evidence = derive_skill_set(&matches, &overrides, &taxonomy)?;
        let kept_matches = matches.iter().filter(|m| m.kept).count();
        log::info!("map-skills: {} sentences matched, {kept_matches} kept, {} skills evidenced", matches.len(), evidence.len());
        let jsonl = matches_to_jsonl(&matches)?;
        let data = SkillsData {
            provider: provider.name(),
            threshold: cfg.threshold,
            taxonomy,
            overrides,
            evidence,
            kept_matches,
        };
        Ok((data, vec![jsonl]))
    })
}

pub fn build_db(cfg: &PipelineConfig, archetypes: &Path, k: usize) -> Result<Outcome> {
    let skills_text = require(cfg, "build-db", "map-skills", SKILLS_FILE)?;
    let archetypes_text = read_text(archetypes)?;
    let fp = Fingerprint::new("build-db")
        .input("skills", skills_text.as_bytes())
        .input("archetypes", archetypes_text.as_bytes())
        .param("k", k);
    run_stage(cfg, DB_FILE, &[], fp, || {
        let skills: SkillsData = decode(cfg, SKILLS_FILE, &skills_text)?;
        let db = build_profile_db(parse_archetypes(&archetypes_text)?, skills.taxonomy, &skills.evidence, k)?;
        if let Some(a) = &db.report.agreement {
            log::info!("build-db: {} archetypes, macro-class purity {:.3}", db.archetypes.len(), a.purity);
        }
        Ok((db, vec![]))
    })
}

/// Loads a database written by `build-db`, or a bare database document.
pub fn load_database(path: &Path) -> Result<ProfileDatabase> {
    let text = read_text(path)?;
    let invalid = |reason: String| StageError::Artifact { path: path.to_path_buf(), reason };
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
    if value.get("stage").is_some() {
        value = value.get_mut("data").map(serde_json::Value::take).unwrap_or_default();
    }
    ProfileDatabase::from_json(&value.to_string()).map_err(|e| invalid(e.to_string()))
}

/// Default database location, failing with a hint when `build-db` has not run.
pub fn default_database(cfg: &PipelineConfig, stage: &'static str) -> Result<PathBuf> {
    let path = cfg.path(DB_FILE);
    if !path.exists() {
        return Err(StageError::MissingPredecessor { stage, needs: "build-db", path });
    }
    Ok(path)
}

/// Offline gap report; byte-identical to the service's POST response for
/// an assessment carrying its own id.
pub fn assess_file(input: &Path, db: &ProfileDatabase, weights: &Weights) -> Result<String> {
    let assessment = parse_assessment(&read_text(input)?)?;
    Ok(render_response(&assess(&assessment, db, weights, "")?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UiBundle {
    pub database_version: String,
    pub soft_scale: Vec<String>,
    pub archetypes: Vec<ArchetypeSummary>,
    pub checklists: BTreeMap<String, Checklist>,
}

pub fn ui_bundle(db: &ProfileDatabase) -> Result<UiBundle> {
    let archetypes = list_archetypes(db);
    let checklists = archetypes
        .iter()
        .map(|a| Ok((a.archetype_id.clone(), skill_checklist(db, &a.archetype_id)?)))
        .collect::<Result<_>>()?;
    Ok(UiBundle {
        database_version: db.version.clone(),
        soft_scale: LEVEL_SCALE.iter().map(|s| s.to_string()).collect(),
        archetypes,
        checklists,
    })
}

pub fn export(db_path: &Path, out: &Path) -> Result<PathBuf> {
    let bundle = ui_bundle(&load_database(db_path)?)?;
    let mut text = serde_json::to_string_pretty(&bundle).map_err(wprof_core::Error::from)?;
    text.push('\n');
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| StageError::Write { path: dir.to_path_buf(), source })?;
    }
    write(out, &text)?;
    Ok(out.to_path_buf())
}

/// Every input file of a full pipeline run.
#[derive(Debug, Clone, Default)]
pub struct PipelineInputs {
    pub corpus: PathBuf,
    pub query: QueryInputs,
    pub synonyms: Option<PathBuf>,
    pub curation: Option<PathBuf>,
    pub skills: SkillInputs,
    pub archetypes: PathBuf,
    pub k: usize,
}

/// ingest → query → extract → trends → map-skills → build-db.
pub fn run_pipeline(cfg: &PipelineConfig, inputs: &PipelineInputs) -> Result<Vec<Outcome>> {
    cfg.validate()?;
    Ok(vec![
        ingest(cfg, &inputs.corpus)?,
        query(cfg, &inputs.query)?,
        extract(cfg, inputs.synonyms.as_deref(), inputs.curation.as_deref())?,
        trends(cfg)?,
        map_skills(cfg, &inputs.skills)?,
        build_db(cfg, &inputs.archetypes, inputs.k)?,
    ])
}

/// Files written by [`run_pipeline`], in stage order.
pub const PIPELINE_FILES: [&str; 9] = [
    CORPUS_FILE,
    PATENTSET_FILE,
    TECHNOLOGIES_FILE,
    TRENDS_FILE,
    TRENDS_CSV,
    SHARES_CSV,
    SKILLS_FILE,
    MATCHES_FILE,
    DB_FILE,
];
