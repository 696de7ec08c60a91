//! HTTP front end: `POST /decision` takes a request document and answers
//! with the response document; `GET /health` answers `ok`.

use std::sync::Arc;

use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use graphpdp_core::{parse_request, render_response_xml, GraphSnapshot, Pdp};

#[derive(Clone)]
pub struct AppState {
    pub pdp: Arc<Pdp>,
    pub graph: Option<GraphSnapshot>,
}

impl AppState {
    pub fn new(pdp: Pdp, graph: Option<GraphSnapshot>) -> Self {
        AppState { pdp: Arc::new(pdp), graph }
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/decision", post(decision))
        .route("/health", get(health))
        .with_state(state)
}

async fn health() -> &'static str {
    "ok"
}

async fn decision(State(state): State<AppState>, body: String) -> Response {
    let request = match parse_request(&body) {
        Ok(r) => r,
        Err(e) => return (StatusCode::BAD_REQUEST, format!("{e}\n")).into_response(),
    };
    // Matching is CPU-bound; keep it off the async workers.
    let evaluated = tokio::task::spawn_blocking(move || {
        render_response_xml(&state.pdp.evaluate(&request, state.graph.as_deref()))
    })
    .await;
    match evaluated {
        Ok(xml) => ([(header::CONTENT_TYPE, "application/xml")], xml).into_response(),
        Err(e) => (StatusCode::INTERNAL_SERVER_ERROR, format!("evaluation failed: {e}\n")).into_response(),
    }
}
