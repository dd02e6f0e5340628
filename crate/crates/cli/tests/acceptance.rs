//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;
use tower::ServiceExt;
use wprof_cli::pipeline::{QueryData, TrendsData, DB_FILE, PATENTSET_FILE, PIPELINE_FILES, TRENDS_FILE};
use wprof_cli::{load_database, run_pipeline};
use wprof_core::artifact::Artifact;
use wprof_core::corpus::{tokenize_and_tag, Section, Sentence, SentenceRef};
use wprof_core::gapengine::{compute_gap, parse_assessment, Assessment, Weights};
use wprof_core::patentset::{estimate_precision, parse_labels, Z_95};
use wprof_core::profiledb::{cluster_archetypes, load_archetypes, validate_assignment, ProfileDatabase, Similarity};
use wprof_core::skillmap::{cosine, match_vectors, Embedding};
use wprof_core::techner::{extract_mentions, KeyTermSet};
use wprof_core::trends::{classify_maturity, Maturity, MaturityParams, TrendSeries};
use wprof_service::{router, AppState, MemoryStore, ServiceConfig, OWNER_TOKEN_HEADER};

use common::*;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
type SeriesCase<'a> = (&'static str, &'a [(i32, u64)], Maturity);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let held: bool = $cond;
        if !held {
            return Err(format!($($msg)+));
        }
    };
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn artifact<T: serde::Serialize + serde::de::DeserializeOwned>(dir: &Path, file: &str) -> T {
    Artifact::<T>::from_json(&read(&dir.join(file))).unwrap().data
}

fn deterministic_runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

/// Full pipeline twice in separate directories, byte-identical, under 60 s.
fn pipeline_determinism(first: &Path) -> Outcome {
    let second = tempfile::tempdir().map_err(|e| e.to_string())?;
    let inputs = fixture_inputs();
    let started = Instant::now();
    run_pipeline(&common::config(first), &inputs).map_err(|e| e.to_string())?;
    run_pipeline(&common::config(second.path()), &inputs).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    for file in PIPELINE_FILES {
        let a = std::fs::read(first.join(file)).map_err(|e| format!("{file}: {e}"))?;
        let b = std::fs::read(second.path().join(file)).map_err(|e| format!("{file}: {e}"))?;
        ensure!(a == b, "{file} differs between runs");
    }
    let rerun = run_pipeline(&common::config(first), &inputs).map_err(|e| e.to_string())?;
    ensure!(rerun.iter().all(|o| o.is_unchanged()), "unchanged rerun rewrote a stage: {rerun:?}");
    ensure!(elapsed < Duration::from_secs(60), "two runs took {elapsed:?}");
    Ok(format!("{} artifacts identical, two runs in {:.2?}", PIPELINE_FILES.len(), elapsed))
}

/// Exhaustive precision equals the brute-force oracle; k=20 sample reports
/// 0.90 with the oracle's Wilson interval.
fn precision_oracle(out: &Path) -> Outcome {
    let oracle = golden("query_oracle.json");
    let data: QueryData = artifact(out, PATENTSET_FILE);
    let oracle_ids: BTreeSet<String> = serde_json::from_value(oracle["doc_ids"].clone()).unwrap();
    let oracle_families: BTreeSet<String> = serde_json::from_value(oracle["family_ids"].clone()).unwrap();
    ensure!(data.set.doc_ids == oracle_ids, "set {:?} != oracle {:?}", data.set.doc_ids, oracle_ids);
    ensure!(data.set.family_ids == oracle_families, "family image differs from oracle");
    let exhaustive = data.exhaustive_precision.ok_or("no exhaustive precision")?;
    ensure!(exhaustive == oracle["exhaustive_precision"].as_f64().unwrap(), "exhaustive {exhaustive}");

    let labels = parse_labels(&read(&fixtures().join("labels.csv"))).map_err(|e| e.to_string())?;
    let estimate = estimate_precision(&data.set, 20, &labels, 7).map_err(|e| e.to_string())?;
    ensure!(estimate.relevant_count == 18, "P' = {}", estimate.relevant_count);
    ensure!(estimate.point == 0.9, "point {}", estimate.point);
    let bound = |i: usize| oracle["wilson_95"][i].as_str().unwrap().parse::<f64>().unwrap();
    let (lo, hi) = estimate.ci95;
    ensure!((lo - bound(0)).abs() <= 1e-9 && (hi - bound(1)).abs() <= 1e-9, "CI ({lo}, {hi})");
    let stored = data.set.precision.ok_or("pipeline stored no precision estimate")?;
    ensure!(stored.point == 0.9 && stored.ci95 == estimate.ci95, "pipeline estimate {stored:?}");
    ensure!(Z_95 == 1.959_963_984_540_054, "z");
    Ok(format!("18/20 = 0.90, CI [{lo:.12}, {hi:.12}]"))
}

/// Hand-written Hearst sentences against their golden mention lists.
fn hearst_golden() -> Outcome {
    let cases = golden("hearst.json");
    let cases = cases.as_array().unwrap();
    ensure!(cases.len() >= 25, "only {} sentences", cases.len());
    let mut covered = BTreeSet::new();
    for c in cases {
        let text = c["text"].as_str().unwrap();
        covered.insert((c["pattern"].as_str().unwrap(), c["polarity"].as_str().unwrap()));
        let sentence = Sentence {
            doc_id: "golden".into(),
            section: Section::Abstract,
            index: 0,
            text: text.into(),
            tokens: tokenize_and_tag(text),
        };
        let got: Vec<Value> = extract_mentions(&sentence, &KeyTermSet::default())
            .into_iter()
            .map(|m| {
                serde_json::json!({
                    "pattern_id": m.pattern_id,
                    "hypernym": m.hypernym_lemma,
                    "hyponym": m.lemma,
                })
            })
            .collect();
        ensure!(Value::from(got.clone()) == c["expected"], "{}: got {got:?}", c["id"]);
    }
    ensure!(covered.len() == 10, "pattern/polarity coverage {covered:?}");
    Ok(format!("{} sentences, 5 patterns x positive/negative", cases.len()))
}

fn score_matrix() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>, Vec<f64>)> {
    (1usize..8, 1usize..12, 1usize..10).prop_flat_map(|(dim, n, m)| {
        (
            prop::collection::vec(prop::collection::vec(-1.0f64..1.0, dim), n),
            prop::collection::vec(prop::collection::vec(-1.0f64..1.0, dim), m),
            prop::collection::vec(0.001f64..1000.0, m),
        )
    })
}

type Inputs = (Vec<(SentenceRef, Embedding)>, Vec<(String, Embedding)>);

fn embed(sentences: &[Vec<f64>], skills: &[Vec<f64>], scale: &[f64]) -> Inputs {
    let s = sentences
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let r = SentenceRef { doc_id: format!("D{i:02}"), section: Section::Claims, index: i };
            (r, Embedding::new(v.clone()))
        })
        .collect();
    let k = skills
        .iter()
        .zip(scale)
        .enumerate()
        .map(|(i, (v, c))| (format!("K{i:02}"), Embedding::new(v.clone()).scaled(*c)))
        .collect();
    (s, k)
}

/// Randomized score matrices: one match per sentence, kept iff > 0.7,
/// argmax unchanged by positive scaling of skill vectors.
fn threshold_retention() -> Outcome {
    let mut runner = deterministic_runner(1000);
    let result = runner.run(&score_matrix(), |(sentences, skills, scale)| {
        let ones = vec![1.0; skills.len()];
        let (s, k) = embed(&sentences, &skills, &ones);
        let (_, scaled) = embed(&sentences, &skills, &scale);
        let before = match_vectors(&s, &k, 0.7).unwrap();
        let after = match_vectors(&s, &scaled, 0.7).unwrap();
        let mut seen = BTreeSet::new();
        for m in &before {
            prop_assert!(seen.insert(m.sentence_ref.clone()), "two matches for one sentence");
            prop_assert_eq!(m.kept, m.score > 0.7);
            if m.kept {
                prop_assert!(m.score > 0.7);
            }
            let sv = &s.iter().find(|(r, _)| *r == m.sentence_ref).unwrap().1;
            for (id, v) in &k {
                prop_assert!(cosine(sv, v).unwrap() <= m.score, "{} beats the kept argmax", id);
            }
        }
        prop_assert_eq!(before.len(), after.len());
        for (b, a) in before.iter().zip(&after) {
            prop_assert_eq!(&b.sentence_ref, &a.sentence_ref);
            let sv = &s.iter().find(|(r, _)| *r == b.sentence_ref).unwrap().1;
            let gap = k
                .iter()
                .filter(|(id, _)| *id != b.skill_id)
                .map(|(_, v)| b.score - cosine(sv, v).unwrap())
                .fold(f64::INFINITY, f64::min);
            // Only an ulp-level tie can legitimately reorder under rounding.
            if gap > 1e-12 && (b.score - 0.7).abs() > 1e-12 {
                prop_assert_eq!(&b.skill_id, &a.skill_id);
                prop_assert_eq!(b.kept, a.kept);
            }
        }
        Ok(())
    });
    result.map_err(|e| e.to_string())?;

    let mut exact = deterministic_runner(500);
    exact
        .run(&score_matrix(), |(sentences, skills, scale)| {
            let pow2: Vec<f64> = scale.iter().map(|c| c.log2().round().exp2()).collect();
            let ones = vec![1.0; skills.len()];
            let (s, k) = embed(&sentences, &skills, &ones);
            let (_, scaled) = embed(&sentences, &skills, &pow2);
            prop_assert_eq!(match_vectors(&s, &k, 0.7).unwrap(), match_vectors(&s, &scaled, 0.7).unwrap());
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok("1000 random matrices, 500 exact power-of-two scalings".into())
}

fn series(points: &[(i32, u64)]) -> TrendSeries {
    TrendSeries::from_counts("synthetic", points.iter().copied().collect())
}

/// Four synthetic series classify as expected; fixture shares equal the
/// brute-force family counts.
fn trend_classes(out: &Path) -> Outcome {
    let params = MaturityParams::default();
    let rising: Vec<(i32, u64)> = (2011..=2020).map(|y| (y, (y - 2010) as u64)).collect();
    let peak = [
        (2008, 2), (2009, 4), (2010, 6), (2011, 8), (2012, 10), (2013, 9), (2014, 8),
        (2015, 7), (2016, 6), (2017, 6), (2018, 6), (2019, 6), (2020, 6),
    ];
    let flat: Vec<(i32, u64)> = (2008..=2020).map(|y| (y, 8)).collect();
    let sparse = [(2012, 1), (2014, 2), (2019, 2)];
    let cases: [SeriesCase; 4] = [
        ("rising", &rising, Maturity::Growing),
        ("peak-2012-then-decline", &peak, Maturity::Mature),
        ("flat-high", &flat, Maturity::Mature),
        ("5-family sparse", &sparse, Maturity::LowSupport),
    ];
    for (name, points, want) in cases {
        let got = classify_maturity(&series(points), &params, 2020);
        ensure!(got == want, "{name}: {got:?}, expected {want:?}");
    }
    ensure!(sparse.iter().map(|p| p.1).sum::<u64>() == 5, "sparse series must hold 5 families");

    let oracle = golden("share_oracle.json");
    let oracle = oracle.as_object().unwrap();
    let trends: TrendsData = artifact(out, TRENDS_FILE);
    ensure!(trends.shares.len() == oracle.len(), "{} share rows, oracle has {}", trends.shares.len(), oracle.len());
    for row in &trends.shares {
        let o = oracle.get(&row.label).ok_or(format!("{} not in oracle", row.label))?;
        ensure!(row.families as u64 == o["families"].as_u64().unwrap(), "{}: {} families", row.label, row.families);
        ensure!(row.share == o["share"].as_f64().unwrap(), "{}: share {}", row.label, row.share);
        let s = trends.series.iter().find(|s| s.label == row.label).ok_or("missing series")?;
        let nonzero: BTreeMap<String, u64> =
            s.counts.iter().filter(|(_, c)| **c > 0).map(|(y, c)| (y.to_string(), *c)).collect();
        let want: BTreeMap<String, u64> = serde_json::from_value(o["series"].clone()).unwrap();
        ensure!(nonzero == want, "{}: series {nonzero:?} vs {want:?}", row.label);
    }
    Ok(format!("growing/mature/mature/low_support; {} share rows match", trends.shares.len()))
}

/// Block-structured archetypes are recovered with purity 1.0 at k=3,
/// whatever the input order.
fn clustering_purity(out: &Path) -> Outcome {
    let archetypes = load_archetypes(&fixtures().join("archetypes.json")).map_err(|e| e.to_string())?;
    ensure!(archetypes.len() == 12, "{} archetypes", archetypes.len());
    let reference = cluster_archetypes(&archetypes, 3, &Similarity::SkillJaccard).map_err(|e| e.to_string())?;
    let report = validate_assignment(&archetypes, &reference);
    ensure!(report.purity == 1.0, "purity {}", report.purity);
    let canonical = |a: &wprof_core::profiledb::BottomUpAssignment| {
        a.clusters.iter().map(|c| c.iter().cloned().collect::<BTreeSet<_>>()).collect::<BTreeSet<_>>()
    };
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    for round in 0..200 {
        let mut shuffled = archetypes.clone();
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let again = cluster_archetypes(&shuffled, 3, &Similarity::SkillJaccard).map_err(|e| e.to_string())?;
        ensure!(canonical(&again) == canonical(&reference), "shuffle {round} changed the clusters");
        ensure!(validate_assignment(&shuffled, &again).purity == 1.0, "shuffle {round} purity");
    }
    let db = load_database(&out.join(DB_FILE)).map_err(|e| e.to_string())?;
    let stored = db.report.agreement.ok_or("database has no agreement report")?;
    ensure!(stored.purity == 1.0, "database purity {}", stored.purity);
    Ok("purity 1.0 at k=3 over 200 shuffles".into())
}

fn identity_for(db: &ProfileDatabase, id: &str) -> Assessment {
    let a = db.archetype(id).unwrap();
    Assessment {
        assessment_id: String::new(),
        archetype_id: id.into(),
        selected_binary: a.binary_skills.clone(),
        soft_levels: a.soft_targets.iter().map(|(k, v)| (k.clone(), i64::from(*v))).collect(),
        created_at: None,
    }
}

/// Identity assessments, random-set partition property and oracle top-3.
fn gap_engine(out: &Path) -> Outcome {
    let db = load_database(&out.join(DB_FILE)).map_err(|e| e.to_string())?;
    let w = Weights::default();
    for a in &db.archetypes {
        let r = compute_gap(&identity_for(&db, &a.archetype_id), &db, &w).map_err(|e| e.to_string())?;
        ensure!(r.missing_binary.hard.is_empty() && r.missing_binary.digital.is_empty(), "{}: gap", a.archetype_id);
        ensure!(r.coverage == 1.0, "{}: coverage {}", a.archetype_id, r.coverage);
        ensure!(r.distance_to_own == 0.0, "{}: distance {}", a.archetype_id, r.distance_to_own);
    }

    let binary: Vec<String> = db.skills.iter().filter(|s| s.is_binary()).map(|s| s.skill_id.clone()).collect();
    let n = db.archetypes.len();
    let strategy = (0..n, prop::collection::btree_set(prop::sample::select(binary), 0..30));
    deterministic_runner(1000)
        .run(&strategy, |(which, selected)| {
            let own = &db.archetypes[which];
            let user = Assessment {
                assessment_id: String::new(),
                archetype_id: own.archetype_id.clone(),
                selected_binary: selected.clone(),
                soft_levels: BTreeMap::new(),
                created_at: None,
            };
            let r = compute_gap(&user, &db, &w).unwrap();
            let missing: BTreeSet<String> =
                r.missing_binary.hard.iter().chain(&r.missing_binary.digital).map(|m| m.skill_id.clone()).collect();
            let overlap: BTreeSet<String> = own.binary_skills.intersection(&selected).cloned().collect();
            prop_assert!(missing.is_disjoint(&overlap));
            prop_assert_eq!(missing.union(&overlap).cloned().collect::<BTreeSet<_>>(), own.binary_skills.clone());
            Ok(())
        })
        .map_err(|e| e.to_string())?;

    let oracle = golden("gap_oracle.json");
    let files = assessment_files();
    for path in &files {
        let user = parse_assessment(&read(path)).map_err(|e| e.to_string())?;
        let r = compute_gap(&user, &db, &w).map_err(|e| e.to_string())?;
        let o = &oracle[&user.assessment_id];
        let top3: Vec<&str> = r.nearest.iter().map(|n| n.archetype_id.as_str()).collect();
        let want: Vec<&str> = o["top3"].as_array().unwrap().iter().map(|t| t[0].as_str().unwrap()).collect();
        ensure!(top3 == want, "{}: top-3 {top3:?}, oracle {want:?}", user.assessment_id);
        for (n, t) in r.nearest.iter().zip(o["top3"].as_array().unwrap()) {
            let d = t[1].as_f64().unwrap();
            ensure!((n.distance - d).abs() < 1e-12, "{}: {} at {} vs {d}", user.assessment_id, n.archetype_id, n.distance);
        }
        ensure!(r.coverage == o["coverage"].as_f64().unwrap(), "{}: coverage", user.assessment_id);
        ensure!((r.distance_to_own - o["distance_to_own"].as_f64().unwrap()).abs() < 1e-12, "{}: own", user.assessment_id);
        let missing: Vec<String> =
            r.missing_binary.hard.iter().chain(&r.missing_binary.digital).map(|m| m.skill_id.clone()).collect::<BTreeSet<_>>().into_iter().collect();
        let want_missing: Vec<String> = serde_json::from_value(o["missing"].clone()).unwrap();
        ensure!(missing == want_missing, "{}: missing {missing:?}", user.assessment_id);
    }
    Ok(format!("identity for {n} archetypes, 1000 random sets, {} oracle top-3 lists", files.len()))
}

struct Reply {
    status: StatusCode,
    body: String,
}

async fn call(app: &Router, method: Method, uri: &str, token: &str, body: Option<String>) -> Reply {
    let req = Request::builder().method(method).uri(uri).header(OWNER_TOKEN_HEADER, token);
    let req = match body {
        Some(b) => req.header(header::CONTENT_TYPE, "application/json").body(Body::from(b)),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    Reply { status, body: String::from_utf8(bytes.to_vec()).unwrap() }
}

/// Service POST bodies equal `wprof assess` output; delete and token
/// handling behave as not-found.
fn service_equivalence(out: &Path) -> Outcome {
    let db_path = out.join(DB_FILE);
    let db = load_database(&db_path).map_err(|e| e.to_string())?;
    let app = router(
        AppState::new(Some(db), Arc::new(MemoryStore::new()), Weights::default()),
        &ServiceConfig::default(),
    );
    let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    let files = assessment_files();
    ensure!(files.len() == 10, "{} fixture assessments", files.len());
    for path in &files {
        let cli = Command::new(env!("CARGO_BIN_EXE_wprof"))
            .args(["assess", "--input"])
            .arg(path)
            .arg("--db")
            .arg(&db_path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(cli.status.success(), "assess failed: {}", String::from_utf8_lossy(&cli.stderr));
        let offline = String::from_utf8(cli.stdout).unwrap();
        let served = rt.block_on(call(&app, Method::POST, "/api/assessments", "owner-token", Some(read(path))));
        ensure!(served.status == StatusCode::CREATED, "{}: status {}", path.display(), served.status);
        ensure!(served.body == offline, "{}: service body differs from CLI", path.display());
    }

    rt.block_on(async {
        let uri = "/api/assessments/asm-01";
        let own = call(&app, Method::GET, uri, "owner-token", None).await;
        ensure!(own.status == StatusCode::OK, "owner cannot read asm-01");
        let wrong = call(&app, Method::GET, uri, "someone-else", None).await;
        let unknown = call(&app, Method::GET, "/api/assessments/asm-99", "owner-token", None).await;
        ensure!(wrong.status == StatusCode::NOT_FOUND, "wrong token gave {}", wrong.status);
        ensure!(
            (wrong.status, &wrong.body) == (unknown.status, &unknown.body),
            "wrong token distinguishable from unknown id"
        );
        let wrong_delete = call(&app, Method::DELETE, uri, "someone-else", None).await;
        ensure!((wrong_delete.status, &wrong_delete.body) == (unknown.status, &unknown.body), "wrong-token delete leaks");
        let deleted = call(&app, Method::DELETE, uri, "owner-token", None).await;
        ensure!(deleted.status == StatusCode::OK, "delete gave {}", deleted.status);
        let after = call(&app, Method::GET, uri, "owner-token", None).await;
        ensure!(after.status == StatusCode::NOT_FOUND, "deleted assessment still readable");
        Ok(())
    })?;
    Ok(format!("{} bodies byte-identical; delete and token checks hold", files.len()))
}

fn main() -> ExitCode {
    let out = tempfile::tempdir().expect("temp dir");
    let dir = out.path();
    // Later criteria read the artifacts written by the first.
    let criteria: Vec<Criterion> = vec![
        ("pipeline determinism", Box::new(|| pipeline_determinism(dir))),
        ("precision oracle", Box::new(|| precision_oracle(dir))),
        ("hearst golden suite", Box::new(hearst_golden)),
        ("threshold retention", Box::new(threshold_retention)),
        ("trend classification", Box::new(|| trend_classes(dir))),
        ("archetype clustering", Box::new(|| clustering_purity(dir))),
        ("gap engine", Box::new(|| gap_engine(dir))),
        ("service/offline equivalence", Box::new(|| service_equivalence(dir))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        match result {
            Ok(detail) => println!("PASS [{}] {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL [{}] {name}: {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
