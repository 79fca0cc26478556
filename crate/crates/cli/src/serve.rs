use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, HeaderMap, HeaderValue, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use flymation_core::compile::serialize_bundle;
use tower_http::services::ServeDir;

use crate::commands::{goldens_text, load};
use crate::error::CliError;

const PLACEHOLDER_INDEX: &str = include_str!("index.html");
const GOLDEN_COUNT: usize = 64;

struct Served {
    manifest: String,
    blob: Bytes,
    goldens: String,
}

/// Byte range request outcome for a body of `len` bytes.
#[derive(Debug, PartialEq, Eq)]
pub enum RangeRequest {
    Full,
    /// Inclusive `[start, end]`.
    Partial(u64, u64),
    Unsatisfiable,
}

/// Parses a single-range `Range` header; multi-range requests fall back to the full body.
pub fn parse_range(value: &str, len: u64) -> RangeRequest {
    let Some(spec) = value.trim().strip_prefix("bytes=") else { return RangeRequest::Full };
    if spec.contains(',') {
        return RangeRequest::Full;
    }
    let Some((a, b)) = spec.split_once('-') else { return RangeRequest::Unsatisfiable };
    let (a, b) = (a.trim(), b.trim());
    let parsed = match (a.is_empty(), b.is_empty()) {
        (true, true) => None,
        (true, false) => b.parse::<u64>().ok().filter(|&n| n > 0 && len > 0).map(|n| (len.saturating_sub(n), len - 1)),
        (false, _) => {
            let start = a.parse::<u64>().ok();
            let end = if b.is_empty() { Some(len.saturating_sub(1)) } else { b.parse::<u64>().ok() };
            match (start, end) {
                (Some(s), Some(e)) if s <= e && s < len => Some((s, e.min(len - 1))),
                _ => None,
            }
        }
    };
    match parsed {
        Some((s, e)) => RangeRequest::Partial(s, e),
        None => RangeRequest::Unsatisfiable,
    }
}

async fn manifest(State(s): State<Arc<Served>>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], s.manifest.clone()).into_response()
}

async fn goldens(State(s): State<Arc<Served>>) -> Response {
    ([(header::CONTENT_TYPE, "text/csv; charset=utf-8")], s.goldens.clone()).into_response()
}

async fn blob(State(s): State<Arc<Served>>, headers: HeaderMap) -> Response {
    let len = s.blob.len() as u64;
    let range = headers
        .get(header::RANGE)
        .and_then(|v| v.to_str().ok())
        .map_or(RangeRequest::Full, |v| parse_range(v, len));
    let octet = (header::CONTENT_TYPE, HeaderValue::from_static("application/octet-stream"));
    let ranges = (header::ACCEPT_RANGES, HeaderValue::from_static("bytes"));
    match range {
        RangeRequest::Full => ([octet, ranges], s.blob.clone()).into_response(),
        RangeRequest::Partial(a, b) => {
            let content_range = format!("bytes {a}-{b}/{len}");
            let body = s.blob.slice(a as usize..=b as usize);
            (
                StatusCode::PARTIAL_CONTENT,
                [octet, ranges, (header::CONTENT_RANGE, HeaderValue::from_str(&content_range).expect("ascii"))],
                body,
            )
                .into_response()
        }
        RangeRequest::Unsatisfiable => (
            StatusCode::RANGE_NOT_SATISFIABLE,
            [(header::CONTENT_RANGE, HeaderValue::from_str(&format!("bytes */{len}")).expect("ascii"))],
        )
            .into_response(),
    }
}

async fn index() -> Html<&'static str> {
    Html(PLACEHOLDER_INDEX)
}

fn router(state: Arc<Served>, assets: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/manifest", get(manifest))
        .route("/api/blob", get(blob))
        .route("/api/goldens", get(goldens))
        .with_state(state);
    match assets {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(index)),
    }
}

pub fn serve(scene_path: &Path, host: &str, port: u16, assets: Option<PathBuf>) -> Result<(), CliError> {
    let scene = load(scene_path)?;
    if let Some(dir) = &assets {
        if !dir.is_dir() {
            return Err(CliError::Io(format!("{}: assets directory not found", dir.display())));
        }
    }
    let bundle = serialize_bundle(&scene);
    let state = Arc::new(Served {
        manifest: bundle.manifest,
        blob: Bytes::from(bundle.blob),
        goldens: goldens_text(&scene, GOLDEN_COUNT),
    });
    let addr: SocketAddr = format!("{host}:{port}")
        .parse()
        .or_else(|_| format!("[{host}]:{port}").parse())
        .map_err(|_| CliError::Usage(format!("invalid host '{host}'")))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(e.to_string()))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| CliError::Io(format!("cannot bind {addr}: {e}")))?;
        let local = listener.local_addr().map_err(|e| CliError::Io(e.to_string()))?;
        // the integration tests read this line to discover an ephemeral port
        eprintln!("listening on http://{local}");
        axum::serve(listener, router(state, assets.as_deref()))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
                log::info!("shutting down");
            })
            .await
            .map_err(|e| CliError::Io(e.to_string()))
    })
}
