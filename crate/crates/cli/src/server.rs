//! The HTTP face of the engine: read endpoints over the replayed state and
//! one write endpoint that appends to the log.
//!
//! Status mapping: unknown entities on read paths are 404; operations that
//! are wrong for the current state (duplicate registration, vote without a
//! view to spare, missing pending request, role failures) are 409; payloads
//! that are malformed or invalid in themselves are 422.

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use merit_core::{
    allocate_bank, recommend_publish, select_versions, selection_report, AppendError, ArticleId,
    CommunityId, EventStore, PlatformEvent, UserId, ValidationError,
};
use serde::Deserialize;
use serde_json::{json, Value};
use std::net::SocketAddr;
use std::sync::Arc;
use tokio::sync::RwLock;

pub type SharedStore = Arc<RwLock<EventStore>>;

pub fn router(store: SharedStore) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/users/{id}/reputation", get(user_reputation))
        .route(
            "/communities/{cid}/users/{id}/reputation",
            get(community_user_reputation),
        )
        .route("/articles/{aid}/selection", get(article_selection))
        .route("/articles/{aid}/allocation/preview", get(allocation_preview))
        .route("/articles/{aid}/review", get(article_review))
        .route("/events", post(post_event))
        .with_state(store)
}

/// Binds, announces the bound address on stdout (handy with `--port 0`),
/// and serves until interrupted.
pub async fn run(store: EventStore, listen: SocketAddr) -> anyhow::Result<()> {
    let shared: SharedStore = Arc::new(RwLock::new(store));
    let app = router(shared);
    let listener = tokio::net::TcpListener::bind(listen).await?;
    let addr = listener.local_addr()?;
    tracing::info!("listening on {addr}");
    println!("{}", json!({ "listening": addr.to_string() }));
    axum::serve(listener, app)
        .with_graceful_shutdown(shutdown_signal())
        .await?;
    Ok(())
}

async fn shutdown_signal() {
    let _ = tokio::signal::ctrl_c().await;
}

struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn not_found(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::NOT_FOUND,
            message: message.into(),
        }
    }

    fn conflict(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::CONFLICT,
            message: message.into(),
        }
    }

    fn unprocessable(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

/// Payload-level problems are 422; everything else the validator can say
/// means the event does not fit the current state, which is a 409.
fn rejection_to_api(err: ValidationError) -> ApiError {
    use ValidationError::*;
    match err {
        EmptyUserId | EmptyCommunityId | EmptyArticleId | EmptyReportReason
        | RoleNotGrantable(_) => ApiError::unprocessable(err.to_string()),
        UnknownUser(_) | UnknownCommunity(_) | UnknownArticle(_) | UnknownVersion { .. } => {
            ApiError::unprocessable(err.to_string())
        }
        SequenceGap { .. } | Allocation(_) => ApiError::internal(err.to_string()),
        _ => ApiError::conflict(err.to_string()),
    }
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

async fn user_reputation(
    State(store): State<SharedStore>,
    Path(user): Path<UserId>,
) -> Result<Json<Value>, ApiError> {
    let store = store.read().await;
    let state = store.state();
    if !state.users.contains(&user) {
        return Err(ApiError::not_found(format!("unknown user `{user}`")));
    }
    let account = state.ledger.account(&user);
    Ok(Json(json!({
        "user": user,
        "system": state.ledger.system_reputation(&user),
        "platform": account.map(|a| a.platform).unwrap_or_default(),
        "communities": account.map(|a| a.communities.clone()).unwrap_or_default(),
    })))
}

async fn community_user_reputation(
    State(store): State<SharedStore>,
    Path((community, user)): Path<(CommunityId, UserId)>,
) -> Result<Json<Value>, ApiError> {
    let store = store.read().await;
    let state = store.state();
    if state.community(&community).is_none() {
        return Err(ApiError::not_found(format!(
            "unknown community `{community}`"
        )));
    }
    if !state.users.contains(&user) {
        return Err(ApiError::not_found(format!("unknown user `{user}`")));
    }
    Ok(Json(json!({
        "user": user,
        "community": community,
        "reputation": state.ledger.community_reputation(&user, &community),
    })))
}

async fn article_selection(
    State(store): State<SharedStore>,
    Path(article): Path<ArticleId>,
) -> Result<Json<Value>, ApiError> {
    let store = store.read().await;
    let record = store
        .state()
        .article(&article)
        .ok_or_else(|| ApiError::not_found(format!("unknown article `{article}`")))?;
    let report = selection_report(&record.history)
        .map_err(|e| ApiError::internal(e.to_string()))?;
    Ok(Json(json!({
        "article": article,
        "community": record.history.community,
        "selected": report.selected,
        "evidence": report.evidence,
    })))
}

async fn allocation_preview(
    State(store): State<SharedStore>,
    Path(article): Path<ArticleId>,
) -> Result<Json<Value>, ApiError> {
    let store = store.read().await;
    let record = store
        .state()
        .article(&article)
        .ok_or_else(|| ApiError::not_found(format!("unknown article `{article}`")))?;
    let selection = select_versions(&record.history)
        .map_err(|e| ApiError::internal(e.to_string()))?;
    let result = allocate_bank(
        &record.history,
        &selection,
        None,
        &store.config().allocation,
    )
    .map_err(|e| ApiError::internal(e.to_string()))?;
    let mut body = serde_json::to_value(&result)
        .map_err(|e| ApiError::internal(e.to_string()))?;
    body["article"] = json!(article);
    body["community"] = json!(record.history.community);
    Ok(Json(body))
}

async fn article_review(
    State(store): State<SharedStore>,
    Path(article): Path<ArticleId>,
) -> Result<Json<Value>, ApiError> {
    let store = store.read().await;
    let record = store
        .state()
        .article(&article)
        .ok_or_else(|| ApiError::not_found(format!("unknown article `{article}`")))?;
    let Some(pending) = record.pending_request else {
        return Err(ApiError::conflict(format!(
            "article `{article}` is not awaiting publication (state: {})",
            record.history.state
        )));
    };
    let recommendation = recommend_publish(&record.history, pending)
        .map_err(|e| ApiError::internal(e.to_string()))?;
    let mut body = serde_json::to_value(&recommendation)
        .map_err(|e| ApiError::internal(e.to_string()))?;
    body["article"] = json!(article);
    Ok(Json(body))
}

#[derive(Deserialize)]
struct IncomingEvent {
    #[serde(default)]
    ts: Option<DateTime<Utc>>,
    #[serde(flatten)]
    event: PlatformEvent,
}

async fn post_event(
    State(store): State<SharedStore>,
    payload: Result<Json<IncomingEvent>, JsonRejection>,
) -> Result<(StatusCode, Json<Value>), ApiError> {
    let Json(incoming) = payload.map_err(|rejection| {
        ApiError::unprocessable(rejection.body_text())
    })?;
    let mut store = store.write().await;
    match store.append(incoming.event, incoming.ts) {
        Ok(outcome) => Ok((
            StatusCode::CREATED,
            Json(json!({ "seq": outcome.seq, "deltas": outcome.deltas })),
        )),
        Err(AppendError::Rejected(err)) => Err(rejection_to_api(err)),
        Err(AppendError::Io(err)) => Err(ApiError::internal(err.to_string())),
    }
}
