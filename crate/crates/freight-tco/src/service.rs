//! Read-only JSON API over one immutable dataset.
//!
//! | method | path              | body                  |
//! |--------|-------------------|-----------------------|
//! | GET    | /api/variants     |                       |
//! | POST   | /api/system-tco   | [`SystemTcoRequest`](crate::engine::SystemTcoRequest)  |
//! | POST   | /api/project      | [`ProjectRequest`](crate::engine::ProjectRequest)    |
//! | POST   | /api/sensitivity  | [`SensitivityRequest`](crate::engine::SensitivityRequest)|
//! | POST   | /api/breakeven    | [`BreakevenRequest`](crate::engine::BreakevenRequest)  |
//!
//! Success bodies are the same JSON the CLI prints with `--format
//! structured`. A body that does not parse gets 400 with the offending
//! field path; an infeasible scenario gets 422.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;

use crate::engine::{Engine, EngineError, ErrorKind, FieldError};
use crate::report;

pub fn router(engine: Arc<Engine>) -> Router {
    Router::new()
        .route("/api/variants", get(variants))
        .route("/api/system-tco", post(|s, b| handle(s, b, Engine::system_tco)))
        .route("/api/project", post(|s, b| handle(s, b, Engine::project)))
        .route("/api/sensitivity", post(|s, b| handle(s, b, Engine::sensitivity)))
        .route("/api/breakeven", post(|s, b| handle(s, b, Engine::breakeven)))
        .with_state(engine)
}

fn json(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(e: &EngineError) -> Response {
    let status = match e.kind() {
        ErrorKind::Request => StatusCode::BAD_REQUEST,
        ErrorKind::Infeasible => StatusCode::UNPROCESSABLE_ENTITY,
        ErrorKind::Dataset => StatusCode::INTERNAL_SERVER_ERROR,
    };
    json(status, report::structured(&e.body()))
}

/// Parses a JSON body, reporting the path of the first offending field.
pub fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T, EngineError> {
    let body = if body.iter().all(u8::is_ascii_whitespace) { b"{}".as_slice() } else { body };
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "body".to_string() } else { path };
        EngineError::Request(vec![FieldError::new(field, e.inner().to_string())])
    })
}

async fn variants(State(engine): State<Arc<Engine>>) -> Response {
    match engine.variants() {
        Ok(r) => json(StatusCode::OK, report::structured(&r)),
        Err(e) => error(&e),
    }
}

async fn handle<Req, Resp>(
    State(engine): State<Arc<Engine>>,
    body: Bytes,
    f: fn(&Engine, &Req) -> Result<Resp, EngineError>,
) -> Response
where
    Req: DeserializeOwned + Send + 'static,
    Resp: serde::Serialize + Send + 'static,
{
    let req: Req = match parse_body(&body) {
        Ok(r) => r,
        Err(e) => return error(&e),
    };
    let result = tokio::task::spawn_blocking(move || f(&engine, &req).map(|r| report::structured(&r))).await;
    match result {
        Ok(Ok(body)) => json(StatusCode::OK, body),
        Ok(Err(e)) => error(&e),
        Err(join) => json(
            StatusCode::INTERNAL_SERVER_ERROR,
            report::structured(&serde_json::json!({ "error": "internal", "message": join.to_string(), "diagnostics": [] })),
        ),
    }
}

/// Binds `addr` and serves until interrupted.
pub fn serve(addr: &str, engine: Engine) -> std::io::Result<()> {
    let rt = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        eprintln!("listening on http://{}", listener.local_addr()?);
        axum::serve(listener, router(Arc::new(engine)))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
    })
}
