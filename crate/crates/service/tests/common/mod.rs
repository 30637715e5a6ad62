#![allow(dead_code)]

use std::io::{BufRead, BufReader};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::time::Duration;

use axum::body::{Body, Bytes};
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use semascope_core::Registry;
use semascope_service::{router, AppState, ServiceConfig, TagStore};
use tower::ServiceExt;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// An in-process router over a fresh store.
pub struct App {
    pub router: Router,
    pub store: TagStore,
    _dir: tempfile::TempDir,
}

impl App {
    pub fn new() -> Self {
        Self::with(|_| {})
    }

    pub fn with(tweak: impl FnOnce(&mut ServiceConfig)) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let mut config = ServiceConfig { store_path: dir.path().join("tags.redb"), ..ServiceConfig::default() };
        tweak(&mut config);
        let store = TagStore::open(&config.store_path).unwrap();
        let state = AppState::new(Registry::builtin(), store.clone());
        Self { router: router(state, &config), store, _dir: dir }
    }

    pub async fn call(&self, method: &str, uri: &str, body: impl Into<Body>) -> (StatusCode, Bytes) {
        let req = Request::builder().method(method).uri(uri).header("content-type", "application/json").body(body.into()).unwrap();
        let resp = self.router.clone().oneshot(req).await.unwrap();
        let status = resp.status();
        (status, resp.into_body().collect().await.unwrap().to_bytes())
    }

    pub async fn post(&self, uri: &str, body: &serde_json::Value) -> (StatusCode, serde_json::Value) {
        let (status, bytes) = self.call("POST", uri, body.to_string()).await;
        (status, serde_json::from_slice(&bytes).unwrap_or(serde_json::Value::Null))
    }

    pub async fn get(&self, uri: &str) -> (StatusCode, serde_json::Value) {
        let (status, bytes) = self.call("GET", uri, Body::empty()).await;
        (status, serde_json::from_slice(&bytes).unwrap_or(serde_json::Value::Null))
    }
}

/// A `semascoped` child process, killed on drop.
pub struct Daemon {
    pub child: Child,
    pub addr: SocketAddr,
}

impl Daemon {
    pub fn spawn(store: &Path) -> Self {
        let mut child = Command::new(env!("CARGO_BIN_EXE_semascoped"))
            .arg("--listen")
            .arg("127.0.0.1:0")
            .arg("--store")
            .arg(store)
            .env_remove("SEMASCOPE_CONFIG")
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .unwrap();
        let mut line = String::new();
        BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
        let addr = line.trim().strip_prefix("listening on ").unwrap_or_else(|| panic!("unexpected banner {line:?}")).parse().unwrap();
        Self { child, addr }
    }

    /// SIGKILL, no chance to clean up.
    pub fn kill(mut self) {
        self.child.kill().unwrap();
        self.child.wait().unwrap();
    }
}

impl Drop for Daemon {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// A blocking request to a running daemon. Non-2xx statuses are returned,
/// not raised.
pub fn http(addr: SocketAddr, method: &str, path: &str, body: &str) -> Result<(u16, String), ureq::Error> {
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .http_status_as_error(false)
        .timeout_global(Some(Duration::from_secs(60)))
        .build()
        .into();
    let url = format!("http://{addr}{path}");
    let mut resp = match method {
        "GET" => agent.get(&url).call()?,
        _ => agent.post(&url).content_type("application/json").send(body)?,
    };
    let status = resp.status().as_u16();
    Ok((status, resp.body_mut().read_to_string()?))
}
