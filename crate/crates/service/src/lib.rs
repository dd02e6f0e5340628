//! REST API over an immutable profile database snapshot.
//!
//! | method | path                               |
//! |--------|------------------------------------|
//! | GET    | `/api/health`                      |
//! | GET    | `/api/archetypes`                  |
//! | GET    | `/api/archetypes/{id}/checklist`   |
//! | POST   | `/api/assessments`                 |
//! | GET    | `/api/assessments/{id}`            |
//! | DELETE | `/api/assessments/{id}`            |
//!
//! Assessments belong to whoever holds the `X-Owner-Token` used to create
//! them. A POST without the header gets a fresh token back in the same
//! header. Wrong tokens and unknown ids both answer 404.

pub mod store;

use std::net::SocketAddr;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderMap, HeaderName, HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde_json::json;
use tower_http::cors::{AllowOrigin, CorsLayer};
use wprof_core::artifact::sha256_hex;
use wprof_core::gapengine::{assess, render_response, Assessment, Weights};
use wprof_core::profiledb::{list_archetypes, skill_checklist, ProfileDatabase};
use wprof_core::Error;

pub use store::{AppendLogStore, AssessmentStore, MemoryStore, StoredAssessment};

pub const OWNER_TOKEN_HEADER: &str = "x-owner-token";

#[derive(Clone)]
pub struct AppState {
    db: Option<Arc<ProfileDatabase>>,
    store: Arc<dyn AssessmentStore>,
    weights: Weights,
}

impl AppState {
    pub fn new(db: Option<ProfileDatabase>, store: Arc<dyn AssessmentStore>, weights: Weights) -> Self {
        Self { db: db.map(Arc::new), store, weights }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Origins allowed by CORS. Empty means any origin.
    pub cors_origins: Vec<String>,
}

pub fn router(state: AppState, config: &ServiceConfig) -> Router {
    let origins = if config.cors_origins.is_empty() {
        AllowOrigin::any()
    } else {
        AllowOrigin::list(config.cors_origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()))
    };
    let owner = HeaderName::from_static(OWNER_TOKEN_HEADER);
    let cors = CorsLayer::new()
        .allow_origin(origins)
        .allow_methods([Method::GET, Method::POST, Method::DELETE])
        .allow_headers([header::CONTENT_TYPE, owner.clone()])
        .expose_headers([owner]);
    Router::new()
        .route("/api/health", get(health))
        .route("/api/archetypes", get(archetypes))
        .route("/api/archetypes/{id}/checklist", get(checklist))
        .route("/api/assessments", axum::routing::post(create_assessment))
        .route("/api/assessments/{id}", get(get_assessment).delete(delete_assessment))
        .layer(cors)
        .with_state(state)
}

pub async fn serve(addr: SocketAddr, state: AppState, config: &ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state, config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

fn json_body(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, kind: &str, message: impl Into<String>) -> Response {
    json_body(status, json!({"error": kind, "message": message.into()}).to_string())
}

fn not_found() -> Response {
    error(StatusCode::NOT_FOUND, "not_found", "no such assessment")
}

fn unavailable() -> Response {
    error(StatusCode::SERVICE_UNAVAILABLE, "unavailable", "profile database not loaded")
}

fn internal(e: impl std::fmt::Display) -> Response {
    log::error!("{e}");
    error(StatusCode::INTERNAL_SERVER_ERROR, "internal", "internal error")
}

fn token(headers: &HeaderMap) -> Option<&str> {
    headers
        .get(OWNER_TOKEN_HEADER)
        .and_then(|v| v.to_str().ok())
        .map(str::trim)
        .filter(|t| !t.is_empty())
}

async fn health(State(state): State<AppState>) -> Response {
    let body = match &state.db {
        Some(db) => json!({"status": "ok", "database_version": db.version, "archetypes": db.archetypes.len()}),
        None => json!({"status": "ok", "database_version": null, "archetypes": 0}),
    };
    json_body(StatusCode::OK, body.to_string())
}

async fn archetypes(State(state): State<AppState>) -> Response {
    let Some(db) = &state.db else { return unavailable() };
    match serde_json::to_string(&list_archetypes(db)) {
        Ok(body) => json_body(StatusCode::OK, body),
        Err(e) => internal(e),
    }
}

async fn checklist(State(state): State<AppState>, Path(id): Path<String>) -> Response {
    let Some(db) = &state.db else { return unavailable() };
    match skill_checklist(db, &id) {
        Ok(c) => match serde_json::to_string(&c) {
            Ok(body) => json_body(StatusCode::OK, body),
            Err(e) => internal(e),
        },
        Err(Error::UnknownArchetype(_)) => error(StatusCode::NOT_FOUND, "not_found", format!("unknown archetype {id:?}")),
        Err(e) => internal(e),
    }
}

fn engine_error(e: Error) -> Response {
    match e {
        Error::InvalidAssessment(fields) => json_body(
            StatusCode::UNPROCESSABLE_ENTITY,
            json!({"error": "validation", "message": "invalid assessment", "fields": fields}).to_string(),
        ),
        Error::TooFewArchetypes { .. } | Error::InvalidWeights { .. } => {
            error(StatusCode::SERVICE_UNAVAILABLE, "unavailable", e.to_string())
        }
        other => internal(other),
    }
}

async fn create_assessment(State(state): State<AppState>, headers: HeaderMap, body: Bytes) -> Response {
    let Some(db) = &state.db else { return unavailable() };
    let assessment: Assessment = match serde_json::from_slice(&body) {
        Ok(a) => a,
        Err(e) if e.is_data() => {
            return json_body(
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({"error": "validation", "message": e.to_string(), "fields": []}).to_string(),
            )
        }
        Err(e) => return error(StatusCode::BAD_REQUEST, "malformed", e.to_string()),
    };
    let (owner, issued) = match token(&headers) {
        Some(t) => (t.to_string(), false),
        None => (uuid::Uuid::new_v4().to_string(), true),
    };
    let owner_hash = sha256_hex(owner.as_bytes());
    // Derived ids are salted with the owner so two owners never collide.
    let response = match assess(&assessment, db, &state.weights, &owner_hash) {
        Ok(r) => r,
        Err(e) => return engine_error(e),
    };
    if let Some(existing) = state.store.get(&response.assessment_id) {
        if existing.owner_token_sha256 != owner_hash {
            return error(StatusCode::CONFLICT, "conflict", "assessment_id is taken");
        }
    }
    let body = match render_response(&response) {
        Ok(b) => b,
        Err(e) => return internal(e),
    };
    let record = StoredAssessment {
        assessment,
        owner_token_sha256: owner_hash,
        db_version: db.version.clone(),
        response,
    };
    if let Err(e) = state.store.put(record) {
        return internal(e);
    }
    let mut resp = json_body(StatusCode::CREATED, body);
    if issued {
        if let Ok(v) = HeaderValue::from_str(&owner) {
            resp.headers_mut().insert(OWNER_TOKEN_HEADER, v);
        }
    }
    resp
}

fn owned(state: &AppState, headers: &HeaderMap, id: &str) -> Option<StoredAssessment> {
    let owner_hash = sha256_hex(token(headers)?.as_bytes());
    state.store.get(id).filter(|r| r.owner_token_sha256 == owner_hash)
}

async fn get_assessment(State(state): State<AppState>, headers: HeaderMap, Path(id): Path<String>) -> Response {
    let Some(mut record) = owned(&state, &headers, &id) else { return not_found() };
    if let Some(db) = &state.db {
        if record.db_version != db.version {
            match assess(&record.assessment, db, &state.weights, &record.owner_token_sha256) {
                Ok(mut fresh) => {
                    fresh.assessment_id = record.response.assessment_id.clone();
                    record.response = fresh;
                    record.db_version = db.version.clone();
                    if let Err(e) = state.store.put(record.clone()) {
                        return internal(e);
                    }
                }
                Err(e) => return engine_error(e),
            }
        }
    }
    match render_response(&record.response) {
        Ok(body) => json_body(StatusCode::OK, body),
        Err(e) => internal(e),
    }
}

async fn delete_assessment(State(state): State<AppState>, headers: HeaderMap, Path(id): Path<String>) -> Response {
    if owned(&state, &headers, &id).is_none() {
        return not_found();
    }
    match state.store.delete(&id) {
        Ok(true) => json_body(StatusCode::OK, json!({"deleted": id}).to_string()),
        Ok(false) => not_found(),
        Err(e) => internal(e),
    }
}
