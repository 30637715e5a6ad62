//! HTTP service over the semascope library.
//!
//! Compute endpoints (`/v1/parse`, `/v1/diff`) are pure functions of the
//! request body. `/v1/index` extracts tags from a revision's files and
//! stores them; `/v1/definitions` and `/v1/references` read them back.

pub mod store;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use semascope_core::diff::render_json;
use semascope_core::{diff_terms, extract_tags, parse_source, portable, table_of_contents, LanguageDescriptor, Registry, TagRole, Term, TocEntry};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use tokio::sync::Semaphore;
use tower_http::timeout::TimeoutLayer;

pub use store::{LocatedTag, RevisionMarker, StoreError, TagStore, TagStoreRecord};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    pub store_path: PathBuf,
    pub max_body_bytes: usize,
    pub timeout: Duration,
    pub registry_path: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            listen: SocketAddr::from(([127, 0, 0, 1], 7878)),
            store_path: PathBuf::from("semascope-tags.redb"),
            max_body_bytes: 10 * 1024 * 1024,
            timeout: Duration::from_secs(10),
            registry_path: None,
        }
    }
}

#[derive(Clone)]
pub struct AppState {
    pub registry: Arc<Registry>,
    pub store: TagStore,
    /// Bounds the parse, diff and store jobs running at once. A request that
    /// times out stops waiting but its job runs to completion, so without
    /// this bound slow requests could pile up on the blocking pool.
    pub jobs: Arc<Semaphore>,
}

impl AppState {
    pub fn new(registry: Registry, store: TagStore) -> Self {
        let n = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(4);
        Self { registry: Arc::new(registry), store, jobs: Arc::new(Semaphore::new(n)) }
    }
}

pub fn router(state: AppState, config: &ServiceConfig) -> Router {
    assert!(config.max_body_bytes > 0 && !config.timeout.is_zero(), "service limits must be positive");
    Router::new()
        .route("/healthz", get(|| async { "ok" }))
        .route("/v1/parse", post(parse))
        .route("/v1/diff", post(diff))
        .route("/v1/index", post(index))
        .route("/v1/definitions", get(definitions))
        .route("/v1/references", get(references))
        .layer(DefaultBodyLimit::max(config.max_body_bytes))
        .layer(TimeoutLayer::with_status_code(StatusCode::REQUEST_TIMEOUT, config.timeout))
        .with_state(state)
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl ToString) -> Self {
        Self { status: StatusCode::BAD_REQUEST, message: message.to_string() }
    }

    fn internal(message: impl ToString) -> Self {
        Self { status: StatusCode::INTERNAL_SERVER_ERROR, message: message.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.message }).to_string();
        (self.status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
    }
}

fn json<T: Serialize>(value: &T) -> Response {
    let body = serde_json::to_string(value).expect("responses always serialize");
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn body<T: for<'de> Deserialize<'de>>(bytes: &[u8]) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::bad_request(format!("malformed body: {e}")))
}

/// Runs CPU-bound work off the async workers, once a job slot is free.
async fn blocking<T: Send + 'static>(
    jobs: Arc<Semaphore>,
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    let permit = jobs.acquire_owned().await.map_err(ApiError::internal)?;
    tokio::task::spawn_blocking(move || {
        let _permit = permit;
        f()
    })
    .await
    .map_err(ApiError::internal)?
}

fn language<'r>(registry: &'r Registry, id: &str) -> Result<&'r LanguageDescriptor, ApiError> {
    registry.get(id).map_err(ApiError::bad_request)
}

fn parse_text(lang: &LanguageDescriptor, source: &str) -> Result<Term, ApiError> {
    parse_source(lang, source.as_bytes()).map_err(ApiError::bad_request)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParseRequest {
    language: String,
    source: String,
}

#[derive(Serialize)]
struct ParseResponse {
    tree: Box<RawValue>,
}

async fn parse(State(state): State<AppState>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: ParseRequest = body(&bytes)?;
    blocking(state.jobs.clone(), move || {
        let lang = language(&state.registry, &req.language)?;
        let tree = portable::encode(&parse_text(lang, &req.source)?);
        let tree = RawValue::from_string(tree).map_err(ApiError::internal)?;
        Ok(json(&ParseResponse { tree }))
    })
    .await
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct DiffOverrides {
    threshold: Option<f64>,
    moves: Option<bool>,
    p: Option<usize>,
    q: Option<usize>,
    d: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DiffRequest {
    language: String,
    before: String,
    after: String,
    /// File name used in the table of contents.
    #[serde(default)]
    path: String,
    #[serde(default)]
    options: DiffOverrides,
}

#[derive(Serialize)]
struct DiffResponse {
    patch: Box<RawValue>,
    toc: Vec<TocEntry>,
}

async fn diff(State(state): State<AppState>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: DiffRequest = body(&bytes)?;
    blocking(state.jobs.clone(), move || {
        let lang = language(&state.registry, &req.language)?;
        let mut opts = lang.diff_options();
        let o = &req.options;
        opts.similarity_threshold = o.threshold.unwrap_or(opts.similarity_threshold);
        opts.move_detection = o.moves.unwrap_or(opts.move_detection);
        opts.p = o.p.unwrap_or(opts.p);
        opts.q = o.q.unwrap_or(opts.q);
        opts.d = o.d.unwrap_or(opts.d);
        opts.validate().map_err(ApiError::bad_request)?;
        let (a, b) = (parse_text(lang, &req.before)?, parse_text(lang, &req.after)?);
        let patch = diff_terms(&a, &b, &opts);
        let toc = table_of_contents(&patch, &lang.declaration_rules, &req.path);
        let patch = RawValue::from_string(render_json(&patch)).map_err(ApiError::internal)?;
        Ok(json(&DiffResponse { patch, toc }))
    })
    .await
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexFile {
    path: String,
    source: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexRequest {
    repo: String,
    revision: String,
    files: Vec<IndexFile>,
}

#[derive(Serialize)]
struct FileFailure {
    path: String,
    error: String,
}

#[derive(Serialize)]
struct IndexResponse {
    indexed: usize,
    failures: Vec<FileFailure>,
}

/// Revisions are content identifiers: commit hashes, tags or similar.
fn valid_revision(r: &str) -> bool {
    (1..=128).contains(&r.len()) && r.bytes().all(|c| c.is_ascii_alphanumeric() || b"._-".contains(&c))
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

async fn index(State(state): State<AppState>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: IndexRequest = body(&bytes)?;
    if req.repo.is_empty() || req.repo.contains('\0') {
        return Err(ApiError::bad_request("repo must be non-empty and free of NUL bytes"));
    }
    if !valid_revision(&req.revision) {
        return Err(ApiError::bad_request(format!("invalid revision `{}`", req.revision)));
    }
    blocking(state.jobs.clone(), move || {
        let mut records: Vec<(String, Vec<semascope_core::Tag>)> = Vec::new();
        let mut failures = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for file in req.files {
            match extract(&state.registry, &file, &mut seen) {
                Ok(tags) => records.push((file.path, tags)),
                Err(error) => failures.push(FileFailure { path: file.path, error }),
            }
        }
        let indexed = records.len();
        state.store.put_revision(&req.repo, &req.revision, records, now()).map_err(ApiError::internal)?;
        Ok(json(&IndexResponse { indexed, failures }))
    })
    .await
}

fn extract(registry: &Registry, file: &IndexFile, seen: &mut std::collections::BTreeSet<String>) -> Result<Vec<semascope_core::Tag>, String> {
    if file.path.is_empty() || file.path.contains('\0') {
        return Err("path must be non-empty and free of NUL bytes".into());
    }
    if !seen.insert(file.path.clone()) {
        return Err("path appears more than once in the batch".into());
    }
    let lang = registry.for_path(std::path::Path::new(&file.path)).map_err(|e| e.to_string())?;
    let term = parse_source(lang, file.source.as_bytes()).map_err(|e| e.to_string())?;
    Ok(extract_tags(&term, &lang.tag_rules, file.source.as_bytes()))
}

#[derive(Deserialize)]
struct Lookup {
    #[serde(default)]
    repo: String,
    #[serde(default)]
    revision: String,
    #[serde(default)]
    name: String,
}

#[derive(Serialize)]
struct TagsResponse {
    tags: Vec<LocatedTag>,
}

async fn lookup(state: AppState, q: Lookup, role: TagRole) -> Result<Response, ApiError> {
    blocking(state.jobs.clone(), move || {
        let tags = state.store.lookup(&q.repo, &q.revision, &q.name, role).map_err(ApiError::internal)?;
        Ok(json(&TagsResponse { tags }))
    })
    .await
}

async fn definitions(State(state): State<AppState>, Query(q): Query<Lookup>) -> Result<Response, ApiError> {
    lookup(state, q, TagRole::Definition).await
}

async fn references(State(state): State<AppState>, Query(q): Query<Lookup>) -> Result<Response, ApiError> {
    lookup(state, q, TagRole::Reference).await
}

#[derive(Debug, thiserror::Error)]
pub enum StartError {
    #[error(transparent)]
    Registry(#[from] semascope_core::RegistryError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("cannot listen on {addr}: {source}")]
    Bind { addr: SocketAddr, source: std::io::Error },
}

/// Opens the store, binds the listener and returns the bound address with
/// a future that serves until `shutdown` resolves.
pub async fn start(
    config: ServiceConfig,
    shutdown: impl std::future::Future<Output = ()> + Send + 'static,
) -> Result<(SocketAddr, impl std::future::Future<Output = std::io::Result<()>>), StartError> {
    let registry = match &config.registry_path {
        Some(p) => Registry::from_config_file(p)?,
        None => Registry::builtin(),
    };
    let store = TagStore::open(&config.store_path)?;
    let app = router(AppState::new(registry, store), &config);
    let listener = tokio::net::TcpListener::bind(config.listen).await.map_err(|source| StartError::Bind { addr: config.listen, source })?;
    let addr = listener.local_addr().map_err(|source| StartError::Bind { addr: config.listen, source })?;
    let server = axum::serve(listener, app).with_graceful_shutdown(shutdown);
    Ok((addr, async move { server.await }))
}
