use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde_json::json;
use wprof_cli::pipeline::{self, default_database, PipelineConfig, QueryInputs, SkillInputs, StageError, BUNDLE_FILE};
use wprof_core::gapengine::Weights;
use wprof_core::trends::{CountMode, MaturityParams};
use wprof_service::{AppState, AppendLogStore, AssessmentStore, MemoryStore, ServiceConfig};

#[derive(Parser)]
#[command(name = "wprof", version, about = "Worker profiler: patent mining to skill-gap reports")]
struct Cli {
    /// Directory holding stage artifacts.
    #[arg(long, global = true, default_value = "out", env = "WPROF_OUTPUT_DIR")]
    output_dir: PathBuf,
    /// Seed for precision sampling.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Sentence-to-skill similarity threshold (kept when strictly above).
    #[arg(long, global = true, default_value_t = 0.7)]
    threshold: f64,
    /// Distance weights for binary and soft skills, `w_b,w_s`.
    #[arg(long, global = true, default_value = "0.7,0.3", value_parser = parse_weights)]
    weights: Weights,
    #[arg(long, global = true, default_value_t = 5)]
    trend_window: u32,
    #[arg(long, global = true, default_value_t = 20)]
    min_support: u64,
    #[arg(long, global = true, default_value_t = 0.5)]
    decline_ratio: f64,
    /// Count every matching document instead of each family once.
    #[arg(long, global = true)]
    count_applications: bool,
    /// Rerun a stage even when its inputs are unchanged.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a JSONL corpus.
    Ingest {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Form the patent set from a query ontology.
    Query {
        #[arg(long)]
        ontology: PathBuf,
        /// `doc_id,relevant` judgements for precision estimation.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Known-relevant document ids, one per line, for recall.
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        sample_size: usize,
        #[arg(long, default_value_t = 10)]
        refine_top: usize,
    },
    /// Extract and cluster technology mentions.
    Extract {
        /// `synonym<TAB>key term` lines.
        #[arg(long)]
        synonyms: Option<PathBuf>,
        #[arg(long)]
        curation: Option<PathBuf>,
    },
    /// Filing trends, maturity classes and share table.
    Trends,
    /// Match set sentences to taxonomy skills.
    MapSkills {
        #[arg(long)]
        skills: PathBuf,
        #[arg(long)]
        overrides: Option<PathBuf>,
        /// Precomputed `sha256<TAB>vector` embeddings.
        #[arg(long)]
        embeddings: Option<PathBuf>,
    },
    /// Assemble the profile database.
    BuildDb {
        #[arg(long)]
        archetypes: PathBuf,
        /// Number of bottom-up macro-class clusters.
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Gap report for an assessment file, printed to stdout.
    Assess {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        db: Option<PathBuf>,
    },
    /// Serve the REST API.
    Serve {
        #[arg(long)]
        db: Option<PathBuf>,
        /// Append-log file for assessments; kept in memory when absent.
        #[arg(long, env = "WPROF_STORAGE")]
        storage: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1:8080", env = "WPROF_LISTEN")]
        listen: SocketAddr,
        /// Allowed CORS origin; repeatable.
        #[arg(long = "cors-origin", default_value = "http://localhost:5173")]
        cors_origins: Vec<String>,
    },
    /// Bundle archetypes and checklists for the web UI.
    Export {
        #[arg(long)]
        db: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_weights(s: &str) -> Result<Weights, String> {
    let (b, w) = s.split_once(',').ok_or("expected w_b,w_s")?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Weights::new(parse(b)?, parse(w)?).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<(), StageError> {
    let cfg = PipelineConfig {
        output_dir: cli.output_dir,
        seed: cli.seed,
        threshold: cli.threshold,
        weights: cli.weights,
        maturity: MaturityParams {
            window: cli.trend_window,
            min_support: cli.min_support,
            decline_ratio: cli.decline_ratio,
        },
        count_mode: if cli.count_applications { CountMode::Applications } else { CountMode::Families },
        force: cli.force,
    };
    cfg.validate()?;
    let outcome = match cli.command {
        Command::Ingest { corpus } => pipeline::ingest(&cfg, &corpus)?,
        Command::Query { ontology, labels, seeds, sample_size, refine_top } => {
            pipeline::query(&cfg, &QueryInputs { ontology, labels, seeds, sample_size, refine_top })?
        }
        Command::Extract { synonyms, curation } => pipeline::extract(&cfg, synonyms.as_deref(), curation.as_deref())?,
        Command::Trends => pipeline::trends(&cfg)?,
        Command::MapSkills { skills, overrides, embeddings } => {
            pipeline::map_skills(&cfg, &SkillInputs { skills, overrides, embeddings })?
        }
        Command::BuildDb { archetypes, k } => pipeline::build_db(&cfg, &archetypes, k)?,
        Command::Assess { input, db } => {
            let db_path = match db {
                Some(p) => p,
                None => default_database(&cfg, "assess")?,
            };
            let db = pipeline::load_database(&db_path)?;
            print!("{}", pipeline::assess_file(&input, &db, &cfg.weights)?);
            return Ok(());
        }
        Command::Serve { db, storage, listen, cors_origins } => {
            let db_path = match db {
                Some(p) => p,
                None => default_database(&cfg, "serve")?,
            };
            let db = pipeline::load_database(&db_path)?;
            let store: Arc<dyn AssessmentStore> = match storage {
                Some(path) => Arc::new(
                    AppendLogStore::open(&path).map_err(|source| StageError::Write { path, source })?,
                ),
                None => Arc::new(MemoryStore::new()),
            };
            let state = AppState::new(Some(db), store, cfg.weights);
            let config = ServiceConfig { cors_origins };
            let runtime = tokio::runtime::Runtime::new().map_err(StageError::Server)?;
            runtime
                .block_on(wprof_service::serve(listen, state, &config))
                .map_err(StageError::Server)?;
            return Ok(());
        }
        Command::Export { db, out } => {
            let db_path = match db {
                Some(p) => p,
                None => default_database(&cfg, "export")?,
            };
            let out = out.unwrap_or_else(|| cfg.path(BUNDLE_FILE));
            let path = pipeline::export(&db_path, &out)?;
            println!("{}", json!({"stage": "export", "status": "written", "files": [path]}));
            return Ok(());
        }
    };
    println!("{}", serde_json::to_string(&outcome).expect("outcome serializes"));
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", json!({"error": e.kind(), "message": e.to_string()}));
            ExitCode::FAILURE
        }
    }
}
