//! Local HTTP service over the engine. Every handler delegates to [`crate::api`]
//! and answers with canonical JSON.

use std::collections::HashMap;
use std::net::{Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use ctprof_core::corpus::{Corpus, TaxonomyKind};
use ctprof_core::ruleset::Ruleset;
use ctprof_core::schema::{to_canonical_json, IssueCode, ValidationIssue};
use tower_http::services::ServeDir;

use crate::api::{self, ApiError};

pub const DEFAULT_PORT: u16 = 8787;

const INDEX_HTML: &str = include_str!("../static/index.html");

/// Immutable data shared by all requests.
#[derive(Clone)]
pub struct AppState {
    pub rules: Arc<Ruleset>,
    pub corpus: Arc<Corpus>,
}

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("port {0} is already in use")]
    PortInUse(u16),
    #[error("cannot bind port {port}: {source}")]
    Bind { port: u16, source: std::io::Error },
    #[error("server failed: {0}")]
    Io(#[from] std::io::Error),
}

fn json(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn ok(body: String) -> Response {
    json(StatusCode::OK, body)
}

fn error(e: ApiError) -> Response {
    let status = match e {
        ApiError::NotFound(_) => StatusCode::NOT_FOUND,
        _ => StatusCode::BAD_REQUEST,
    };
    json(status, e.to_json())
}

fn reply(result: Result<String, ApiError>) -> Response {
    result.map_or_else(error, ok)
}

async fn catalog() -> Response {
    ok(api::catalog_json())
}

async fn ruleset(State(s): State<AppState>) -> Response {
    ok(s.rules.to_json())
}

async fn fixtures(State(s): State<AppState>) -> Response {
    ok(api::fixtures_json(&s.corpus))
}

async fn fixture(State(s): State<AppState>, Path(name): Path<String>) -> Response {
    reply(api::fixture_json(&s.corpus, &name))
}

async fn analyze(State(s): State<AppState>, body: String) -> Response {
    reply(api::analyze_text(&body, &s.rules).map(|r| r.to_json()))
}

async fn derive(body: String) -> Response {
    reply(api::derive_text(&body).map(|p| p.to_json()))
}

async fn design(State(s): State<AppState>, body: String) -> Response {
    reply(api::design_text(&body, &s.rules).map(|d| d.to_json()))
}

fn query_issue(path: &str, message: String) -> ApiError {
    ApiError::Invalid {
        message: "bad query parameters".into(),
        issues: vec![ValidationIssue::new(
            IssueCode::BadFieldPresence,
            path,
            message,
        )],
    }
}

fn taxonomy_params(params: &HashMap<String, String>) -> Result<(TaxonomyKind, bool), ApiError> {
    if let Some(extra) = params.keys().find(|k| *k != "kind" && *k != "collapse") {
        return Err(query_issue(extra, format!("unknown parameter `{extra}`")));
    }
    let kind = match params.get("kind") {
        None => return Err(query_issue("kind", "missing parameter `kind`".into())),
        Some(k) => k.parse::<TaxonomyKind>().map_err(|e| ApiError::Invalid {
            message: "bad query parameters".into(),
            issues: vec![ValidationIssue::new(
                IssueCode::UnknownEnum,
                "kind",
                e.to_string(),
            )],
        })?,
    };
    let collapse = match params.get("collapse").map(String::as_str) {
        None | Some("false") => false,
        Some("true") => true,
        Some(other) => {
            return Err(query_issue(
                "collapse",
                format!("`{other}` is not true or false"),
            ))
        }
    };
    Ok((kind, collapse))
}

async fn taxonomy(
    State(s): State<AppState>,
    Query(params): Query<HashMap<String, String>>,
) -> Response {
    reply(
        taxonomy_params(&params)
            .map(|(kind, collapse)| api::taxonomy(&s.corpus, &s.rules, kind, collapse).to_json()),
    )
}

async fn index() -> Html<&'static str> {
    Html(INDEX_HTML)
}

async fn not_found() -> Response {
    json(
        StatusCode::NOT_FOUND,
        to_canonical_json(&serde_json::json!({"error": "not found", "issues": []})),
    )
}

/// The service's routes. Static files come from `static_dir` when given,
/// otherwise the embedded page is served at `/`.
pub fn router(state: AppState, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/catalog", get(catalog))
        .route("/api/ruleset", get(ruleset))
        .route("/api/fixtures", get(fixtures))
        .route("/api/fixtures/{name}", get(fixture))
        .route("/api/analyze", post(analyze))
        .route("/api/derive", post(derive))
        .route("/api/design", post(design))
        .route("/api/corpus/taxonomy", get(taxonomy))
        .route("/api/{*rest}", get(not_found).post(not_found))
        .with_state(state);
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(index)),
    }
}

/// Binds the loopback interface on `port`.
pub async fn bind(port: u16) -> Result<tokio::net::TcpListener, ServeError> {
    let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, port));
    tokio::net::TcpListener::bind(addr)
        .await
        .map_err(|source| match source.kind() {
            std::io::ErrorKind::AddrInUse => ServeError::PortInUse(port),
            _ => ServeError::Bind { port, source },
        })
}

/// Serves until interrupted with Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> Result<(), ServeError> {
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
