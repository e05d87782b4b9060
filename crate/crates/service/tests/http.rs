// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use pipeprof::datatable::build_table;
use pipeprof::editops::{MoveTarget, Operation};
use pipeprof::model::{ObjectId, ObjectRef, Profile, Vector};
use pipeprof::render::render_svg;
use pipeprof::sample::sample_profile;
use pipeprof::store;
use pipeprof_service::{router, AppState};

struct Client {
    app: Router,
}

impl Client {
    fn new(root: &Path) -> Self {
        let catalog = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/pipes.cat");
        Self { app: router(AppState::new(root, Some(catalog))) }
    }

    async fn send(&self, req: Request<Body>) -> (StatusCode, Vec<u8>) {
        let res = self.app.clone().oneshot(req).await.unwrap();
        let status = res.status();
        let body = res.into_body().collect().await.unwrap().to_bytes().to_vec();
        (status, body)
    }

    async fn get(&self, uri: &str) -> (StatusCode, Vec<u8>) {
        self.send(Request::get(uri).body(Body::empty()).unwrap()).await
    }

    async fn get_json(&self, uri: &str) -> Value {
        let (s, b) = self.get(uri).await;
        assert_eq!(s, StatusCode::OK, "{uri}: {}", String::from_utf8_lossy(&b));
        serde_json::from_slice(&b).unwrap()
    }

    async fn post(&self, uri: &str, body: Value) -> (StatusCode, Value) {
        self.post_raw(uri, body.to_string()).await
    }

    async fn post_raw(&self, uri: &str, body: String) -> (StatusCode, Value) {
        let req = Request::post(uri).header("content-type", "application/json").body(Body::from(body)).unwrap();
        let (s, b) = self.send(req).await;
        (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
    }

    async fn revision(&self) -> u64 {
        self.get_json("/profile").await["revision"].as_u64().unwrap()
    }
}

fn move_well(id: u32, dx: f64) -> Operation {
    Operation::Move { target: MoveTarget::Object(ObjectRef::Well(ObjectId(id))), delta: Vector::new(dx, 0.0) }
}

#[tokio::test]
async fn empty_directory_lists_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let c = Client::new(dir.path());
    assert_eq!(c.get_json("/prototypes").await, json!([]));
    assert_eq!(c.revision().await, 0);
}

#[tokio::test]
async fn edit_then_render_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let c = Client::new(dir.path());
    let (s, v) = c.post("/profile/new", json!({ "sample": true })).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["revision"], 1);

    let (s, svg) = c.get("/render.svg").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(svg, render_svg(&sample_profile()).unwrap());

    let op = move_well(4, 5000.0);
    let (s, v) = c.post("/profile/ops", json!({ "revision": 1, "op": op })).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["revision"], 2);
    assert_eq!(v["result"]["changed"][0], "well:4");

    let mut expected = sample_profile();
    op.apply(&mut expected).unwrap();
    let (_, svg) = c.get("/render.svg").await;
    assert_eq!(svg, render_svg(&expected).unwrap());

    let table = c.get_json("/table").await;
    assert_eq!(table["table"]["distance"][0]["value_m"], "20.00");
    assert_eq!(table["table"], serde_json::to_value(build_table(&expected)).unwrap());
    assert_eq!(table["rows"].as_array().unwrap().len(), 8);
    assert_eq!(table["rows"][2]["choices"].as_array().unwrap().len(), 4);
    assert_eq!(table["rows"][6]["choices"].as_array().unwrap().len(), 2);

    let profile: Profile = serde_json::from_value(c.get_json("/profile").await["profile"].clone()).unwrap();
    assert_eq!(profile, expected);
}

#[tokio::test]
async fn stale_revision_conflicts() {
    let dir = tempfile::tempdir().unwrap();
    let c = Client::new(dir.path());
    c.post("/profile/new", json!({ "sample": true })).await;
    let before = c.get_json("/profile").await;
    let (s, v) = c.post("/profile/ops", json!({ "revision": 0, "op": move_well(4, 1000.0) })).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["revision"], 1);
    assert_eq!(c.get_json("/profile").await, before);
}

#[tokio::test]
async fn rejected_edits_name_the_rule() {
    let dir = tempfile::tempdir().unwrap();
    let c = Client::new(dir.path());
    c.post("/profile/new", json!({ "sample": true })).await;
    let op = json!({ "op": "add", "object": { "kind": "leader", "text": 99, "target": "well:3" } });
    let (s, v) = c.post("/profile/ops", json!({ "revision": 1, "op": op })).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(v["rules"][0].as_str().unwrap().starts_with("dangling-ref"), "{v}");

    let op = json!({ "op": "merge_pipes", "pipe": 2, "end": "end" });
    let (s, v) = c.post("/profile/ops", json!({ "revision": 1, "op": op })).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "ends not coincident");
    assert_eq!(c.revision().await, 1);

    let (s, _) = c.post_raw("/profile/ops", "{".into()).await;
    assert!(s.is_client_error());
    let (s, _) = c.post("/profile/ops", json!({ "revision": 1, "op": { "op": "explode" } })).await;
    assert!(s.is_client_error());
}

#[tokio::test]
async fn save_load_and_preview() {
    let dir = tempfile::tempdir().unwrap();
    let c = Client::new(dir.path());
    c.post("/profile/new", json!({ "sample": true })).await;
    let (s, v) = c.post("/profile/save", json!({ "name": "main" })).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    let saved = store::load_profile(&dir.path().join("main.pns")).unwrap();
    assert_eq!(saved, sample_profile());
    assert_eq!(v["bytes"], std::fs::metadata(dir.path().join("main.pns")).unwrap().len());

    c.post("/profile/new", json!({})).await;
    let (s, v) = c.post("/profile/load", json!({ "name": "main" })).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["revision"], 3);
    let (_, svg) = c.get("/render.svg").await;
    let (s, preview) = c.get("/prototypes/main/render.svg").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(preview, svg);

    std::fs::write(dir.path().join("broken.pns"), b"PNS1\x01").unwrap();
    let list = c.get_json("/prototypes").await;
    assert_eq!(list.as_array().unwrap().len(), 2);
    assert!(list[0]["error"].is_string());
    assert!(list[1]["error"].is_null());

    let (s, _) = c.post("/profile/load", json!({ "name": "broken" })).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _) = c.post("/profile/load", json!({ "name": "absent" })).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (s, _) = c.post("/profile/save", json!({ "name": "../escape" })).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(c.revision().await, 3);
}

#[tokio::test]
async fn catalog_is_served() {
    let dir = tempfile::tempdir().unwrap();
    let c = Client::new(dir.path());
    let cat = c.get_json("/catalog").await;
    let first = &cat["groups"][0];
    assert_eq!(first["title"], "Трубы стальные электросварные прямошовные по ГОСТ 10704-76");
    assert!(first["entries"].as_array().unwrap().iter().any(|e| e["outer_diameter"] == 630.0));
}

#[tokio::test]
async fn concurrent_edits_serialize() {
    let dir = tempfile::tempdir().unwrap();
    let state = AppState::new(dir.path(), None);
    let app = router(Arc::clone(&state));
    let c = Client { app: app.clone() };
    c.post("/profile/new", json!({ "sample": true })).await;
    let mut tasks = Vec::new();
    for _ in 0..8 {
        let app = app.clone();
        tasks.push(tokio::spawn(async move {
            let body = json!({ "revision": 1, "op": move_well(4, 100.0) }).to_string();
            let req = Request::post("/profile/ops").header("content-type", "application/json").body(Body::from(body)).unwrap();
            app.oneshot(req).await.unwrap().status()
        }));
    }
    let mut ok = 0;
    for t in tasks {
        let s = t.await.unwrap();
        assert!(s == StatusCode::OK || s == StatusCode::CONFLICT);
        ok += (s == StatusCode::OK) as usize;
    }
    assert_eq!(ok, 1);
    assert_eq!(c.revision().await, 2);
}
