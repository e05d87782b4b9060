// SPDX-License-Identifier: Apache-2.0

//! Local HTTP facade over the profile engine for the browser editor.
//!
//! One profile is open at a time. Every accepted edit bumps a revision
//! number; an edit that names an older revision is refused with 409 so a
//! client never overwrites changes it has not seen. Endpoints and bodies
//! are described in `docs/api.md`.

use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use axum::extract::{Path as UrlPath, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use pipeprof::datatable::{build_table, ROW_LABELS};
use pipeprof::editops::{EditError, EditResult, Operation, PropagationChoice};
use pipeprof::model::{Profile, Violation};
use pipeprof::render::{render_svg, Frame, RenderError};
use pipeprof::sample::sample_profile;
use pipeprof::store::{self, Catalog, StoreError};

struct Session {
    profile: Profile,
    revision: u64,
    name: Option<String>,
}

pub struct AppState {
    root: PathBuf,
    catalog: Option<PathBuf>,
    session: RwLock<Session>,
}

impl AppState {
    /// Serves prototypes from `root`; `catalog` is the pipe catalog file.
    pub fn new(root: impl Into<PathBuf>, catalog: Option<PathBuf>) -> Arc<Self> {
        Arc::new(Self {
            root: root.into(),
            catalog,
            session: RwLock::new(Session { profile: Profile::new(), revision: 0, name: None }),
        })
    }

    fn snapshot(&self) -> (Profile, u64) {
        let s = self.session.read().expect("session lock");
        (s.profile.clone(), s.revision)
    }

    fn replace(&self, profile: Profile, name: Option<String>) -> u64 {
        let mut s = self.session.write().expect("session lock");
        s.profile = profile;
        s.revision += 1;
        s.name = name;
        s.revision
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/profile", get(get_profile))
        .route("/table", get(get_table))
        .route("/render.svg", get(get_render))
        .route("/prototypes", get(get_prototypes))
        .route("/prototypes/{name}/render.svg", get(get_preview))
        .route("/catalog", get(get_catalog))
        .route("/profile/ops", post(post_op))
        .route("/profile/save", post(post_save))
        .route("/profile/load", post(post_load))
        .route("/profile/new", post(post_new))
        .with_state(state)
}

/// Binds `port` on localhost and serves until the process stops.
pub async fn serve(state: Arc<AppState>, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    axum::serve(listener, router(state)).await
}

/// An error response with a JSON body `{error, rules?}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn new(status: StatusCode, msg: impl std::fmt::Display) -> Self {
        Self { status, body: json!({ "error": msg.to_string() }) }
    }

    fn rules(status: StatusCode, msg: impl std::fmt::Display, v: &[Violation]) -> Self {
        let rules: Vec<String> = v.iter().map(ToString::to_string).collect();
        Self { status, body: json!({ "error": msg.to_string(), "rules": rules }) }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<EditError> for ApiError {
    fn from(e: EditError) -> Self {
        match &e {
            EditError::Invalid(v) => Self::rules(StatusCode::UNPROCESSABLE_ENTITY, &e, v),
            _ => Self::new(StatusCode::UNPROCESSABLE_ENTITY, e),
        }
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match &e {
            StoreError::Invalid(v) => Self::rules(StatusCode::UNPROCESSABLE_ENTITY, &e, v),
            StoreError::Io(io) if io.kind() == std::io::ErrorKind::NotFound => Self::new(StatusCode::NOT_FOUND, e),
            StoreError::Io(_) => Self::new(StatusCode::INTERNAL_SERVER_ERROR, e),
            _ => Self::new(StatusCode::UNPROCESSABLE_ENTITY, e),
        }
    }
}

impl From<RenderError> for ApiError {
    fn from(e: RenderError) -> Self {
        match &e {
            RenderError::Invalid(v) => Self::rules(StatusCode::UNPROCESSABLE_ENTITY, &e, v),
        }
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// Accepts plain file names only; `.pns` is appended when missing.
fn prototype_path(root: &Path, name: &str) -> ApiResult<PathBuf> {
    let safe = !name.is_empty()
        && name.len() <= 128
        && !name.starts_with('.')
        && name.chars().all(|c| c.is_alphanumeric() || matches!(c, '-' | '_' | '.' | ' '));
    if !safe || name.contains("..") {
        return Err(ApiError::new(StatusCode::BAD_REQUEST, format!("bad file name {name:?}")));
    }
    let file = if name.ends_with(&format!(".{}", store::EXTENSION)) {
        name.to_owned()
    } else {
        format!("{name}.{}", store::EXTENSION)
    };
    Ok(root.join(file))
}

#[derive(Serialize)]
struct ProfileView {
    revision: u64,
    name: Option<String>,
    profile: Profile,
    frame: Frame,
}

async fn get_profile(State(st): State<Arc<AppState>>) -> Json<ProfileView> {
    let s = st.session.read().expect("session lock");
    Json(ProfileView {
        revision: s.revision,
        name: s.name.clone(),
        frame: Frame::of(&s.profile),
        profile: s.profile.clone(),
    })
}

#[derive(Serialize)]
struct RowInfo {
    label: &'static str,
    choices: Vec<PropagationChoice>,
}

async fn get_table(State(st): State<Arc<AppState>>) -> Json<Value> {
    let (p, revision) = st.snapshot();
    let rows: Vec<RowInfo> = ROW_LABELS
        .iter()
        .enumerate()
        .map(|(i, &label)| RowInfo { label, choices: PropagationChoice::for_row(i) })
        .collect();
    Json(json!({ "revision": revision, "table": build_table(&p), "rows": rows }))
}

fn svg_response(bytes: Vec<u8>) -> Response {
    ([(header::CONTENT_TYPE, "image/svg+xml")], bytes).into_response()
}

async fn get_render(State(st): State<Arc<AppState>>) -> ApiResult<Response> {
    let (p, _) = st.snapshot();
    Ok(svg_response(render_svg(&p)?))
}

async fn get_prototypes(State(st): State<Arc<AppState>>) -> ApiResult<Json<Vec<store::PrototypeEntry>>> {
    let list = store::list_prototypes(&st.root).map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e))?;
    Ok(Json(list))
}

async fn get_preview(State(st): State<Arc<AppState>>, UrlPath(name): UrlPath<String>) -> ApiResult<Response> {
    let p = store::load_profile(&prototype_path(&st.root, &name)?)?;
    Ok(svg_response(render_svg(&p)?))
}

async fn get_catalog(State(st): State<Arc<AppState>>) -> ApiResult<Json<Catalog>> {
    match &st.catalog {
        None => Ok(Json(Catalog::default())),
        Some(path) => store::load_catalog(path)
            .map(Json)
            .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e)),
    }
}

#[derive(Debug, Deserialize)]
pub struct OpRequest {
    pub revision: u64,
    pub op: Operation,
}

#[derive(Serialize)]
struct OpResponse {
    revision: u64,
    result: EditResult,
}

async fn post_op(State(st): State<Arc<AppState>>, Json(req): Json<OpRequest>) -> ApiResult<Json<OpResponse>> {
    let mut s = st.session.write().expect("session lock");
    if req.revision != s.revision {
        return Err(ApiError {
            status: StatusCode::CONFLICT,
            body: json!({ "error": "stale revision", "revision": s.revision }),
        });
    }
    let result = req.op.apply(&mut s.profile)?;
    s.revision += 1;
    Ok(Json(OpResponse { revision: s.revision, result }))
}

#[derive(Deserialize)]
struct NameRequest {
    name: String,
}

async fn post_save(State(st): State<Arc<AppState>>, Json(req): Json<NameRequest>) -> ApiResult<Json<Value>> {
    let path = prototype_path(&st.root, &req.name)?;
    let (p, revision) = st.snapshot();
    let bytes = store::save_profile(&p, &path)?;
    st.session.write().expect("session lock").name = Some(req.name.clone());
    Ok(Json(json!({ "name": req.name, "bytes": bytes, "revision": revision })))
}

async fn post_load(State(st): State<Arc<AppState>>, Json(req): Json<NameRequest>) -> ApiResult<Json<Value>> {
    let p = store::load_profile(&prototype_path(&st.root, &req.name)?)?;
    let revision = st.replace(p, Some(req.name.clone()));
    Ok(Json(json!({ "name": req.name, "revision": revision })))
}

#[derive(Deserialize)]
struct NewRequest {
    #[serde(default)]
    sample: bool,
}

async fn post_new(State(st): State<Arc<AppState>>, Json(req): Json<NewRequest>) -> Json<Value> {
    let p = if req.sample { sample_profile() } else { Profile::new() };
    Json(json!({ "revision": st.replace(p, None) }))
}
