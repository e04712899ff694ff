use std::path::PathBuf;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use gae_core::gae::{read_annotations, GaeCategory};
use gae_core::store::AnnotationStore;
use gae_service::{router, shared, SharedStore};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

async fn call(store: &SharedStore, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value, String) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let resp = router(store.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let text = String::from_utf8(bytes.to_vec()).unwrap();
    let value = serde_json::from_str(&text).unwrap_or(Value::Null);
    (status, value, text)
}

fn items(n: usize) -> Value {
    Value::Array(
        (1..=n)
            .map(|i| {
                json!({
                    "sentence_id": format!("s{i}"),
                    "source_text": format!("source {i}"),
                    "reference_text": format!("reference {i}"),
                    "candidate_text": format!("candidate {i}"),
                })
            })
            .collect(),
    )
}

fn judgments(flawed: &[&str]) -> Value {
    let map: serde_json::Map<String, Value> = GaeCategory::ALL
        .iter()
        .map(|c| (c.key().to_string(), json!(if flawed.contains(&c.key()) { 0 } else { 1 })))
        .collect();
    Value::Object(map)
}

fn annotation(sid: &str, who: &str, flawed: &[&str]) -> Value {
    json!({
        "sentence_id": sid,
        "annotator_id": who,
        "timestamp": "2024-05-01T10:00:00Z",
        "judgments": judgments(flawed),
    })
}

async fn create(store: &SharedStore, n: usize) -> String {
    let (status, body, _) = call(
        store,
        Method::POST,
        "/sessions",
        Some(json!({"model_label": "EN-KO", "items": items(n)})),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED);
    body["session_id"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn create_fifty_item_session() {
    let store = shared(AnnotationStore::in_memory());
    let id = create(&store, 50).await;
    let (status, info, _) = call(&store, Method::GET, &format!("/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(info["model_label"], "EN-KO");
    assert_eq!(info["completion"]["total"], 50);
    assert_eq!(info["completion"]["annotated_sentences"], 0);

    let (status, list, _) = call(&store, Method::GET, "/sessions", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(list.as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn duplicate_ids_rejected() {
    let store = shared(AnnotationStore::in_memory());
    let mut dup = items(8);
    dup.as_array_mut().unwrap().push(json!({
        "sentence_id": "s7", "source_text": "", "reference_text": "", "candidate_text": ""
    }));
    let (status, body, _) = call(
        &store,
        Method::POST,
        "/sessions",
        Some(json!({"model_label": "m", "items": dup})),
    )
    .await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert!(body["error"].as_str().unwrap().contains("s7"));

    let (status, _, _) = call(&store, Method::POST, "/sessions", Some(json!({"model_label": "m"}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn per_annotator_progress() {
    let store = shared(AnnotationStore::in_memory());
    let id = create(&store, 2).await;
    let next = |who: &'static str| {
        let store = store.clone();
        let id = id.clone();
        async move { call(&store, Method::GET, &format!("/sessions/{id}/next?annotator={who}"), None).await.1 }
    };
    assert_eq!(next("A").await["item"]["sentence_id"], "s1");
    let (status, ack, _) = call(
        &store,
        Method::PUT,
        &format!("/sessions/{id}/annotations"),
        Some(annotation("s1", "A", &[])),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ack["sentence_score"], 100.0);
    assert_eq!(next("A").await["item"]["sentence_id"], "s2");
    assert_eq!(next("B").await["item"]["sentence_id"], "s1");
    call(&store, Method::PUT, &format!("/sessions/{id}/annotations"), Some(annotation("s2", "A", &[]))).await;
    let done = next("A").await;
    assert_eq!(done["status"], "done");
    assert_eq!(done["completed"], 2);

    let (status, _, _) = call(&store, Method::GET, &format!("/sessions/{id}/next"), None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn submission_errors() {
    let store = shared(AnnotationStore::in_memory());
    let id = create(&store, 3).await;
    let uri = format!("/sessions/{id}/annotations");

    let mut partial = annotation("s1", "A", &[]);
    partial["judgments"].as_object_mut().unwrap().remove("tense");
    let (status, body, _) = call(&store, Method::PUT, &uri, Some(partial)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["missing_categories"], json!(["tense"]));
    assert!(body["error"].as_str().unwrap().contains("tense"));

    let (status, _, _) = call(&store, Method::PUT, &uri, Some(annotation("nope", "A", &[]))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, _, _) = call(&store, Method::PUT, "/sessions/missing/annotations", Some(annotation("s1", "A", &[]))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _, _) = call(&store, Method::GET, "/sessions/missing/scores", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let mut bad = annotation("s1", "A", &[]);
    bad["judgments"]["tense"] = json!(5);
    let (status, _, _) = call(&store, Method::PUT, &uri, Some(bad)).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn replace_and_idempotence() {
    let store = shared(AnnotationStore::in_memory());
    let id = create(&store, 3).await;
    let uri = format!("/sessions/{id}/annotations");
    let pattern = ["vocabulary_selection", "misspelled_word", "sentence_structure"];

    let (_, ack, _) = call(&store, Method::PUT, &uri, Some(annotation("s3", "A", &pattern))).await;
    assert_eq!(ack["outcome"], "inserted");
    assert_eq!(gae_core::gae::display_pct(ack["sentence_score"].as_f64().unwrap()), "66.67");
    let scores_once = call(&store, Method::GET, &format!("/sessions/{id}/scores"), None).await.1;
    let seq = store.read().last_seq();

    let (_, ack, _) = call(&store, Method::PUT, &uri, Some(annotation("s3", "A", &pattern))).await;
    assert_eq!(ack["outcome"], "unchanged");
    assert_eq!(store.read().last_seq(), seq);
    let scores_twice = call(&store, Method::GET, &format!("/sessions/{id}/scores"), None).await.1;
    assert_eq!(scores_once, scores_twice);

    let (_, ack, _) = call(&store, Method::PUT, &uri, Some(annotation("s3", "A", &pattern[..2]))).await;
    assert_eq!(ack["outcome"], "replaced");
    assert_eq!(gae_core::gae::display_pct(ack["sentence_score"].as_f64().unwrap()), "77.78");
    assert_eq!(store.read().last_seq(), seq + 1);
}

#[tokio::test]
async fn worked_grid_session_scores_and_export() {
    let store = shared(AnnotationStore::in_memory());
    let items: Vec<Value> = std::fs::read_to_string(data("worked_grid_items.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let (_, created, _) = call(
        &store,
        Method::POST,
        "/sessions",
        Some(json!({"model_label": "KO-EN", "items": items, "session_id": "t1"})),
    )
    .await;
    assert_eq!(created["session_id"], "t1");

    let fixture = std::fs::read_to_string(data("worked_grid.jsonl")).unwrap();
    for (i, line) in fixture.lines().enumerate() {
        let body: Value = serde_json::from_str(line).unwrap();
        call(&store, Method::PUT, "/sessions/t1/annotations", Some(body)).await;
        if i == 4 {
            let (_, partial, _) = call(&store, Method::GET, "/sessions/t1/scores", None).await;
            assert_eq!(partial["partial"], true);
            assert_eq!(partial["pooled"]["sentence_count"], 5);
        }
    }
    let (status, scores, _) = call(&store, Method::GET, "/sessions/t1/scores", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(scores["partial"], false);
    let model = scores["pooled"]["model_score"].as_f64().unwrap();
    assert_eq!(gae_core::gae::display_pct(model), "85.56");
    assert_eq!(scores["per_annotator"][0]["category_scores"]["vocabulary_selection"], 40.0);
    assert_eq!(scores["completion"]["per_annotator"]["evaluator"], 10);

    let (status, _, text) = call(&store, Method::GET, "/sessions/t1/export", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(text, fixture);
    assert_eq!(read_annotations(text.as_bytes()).unwrap().len(), 10);
}

#[tokio::test]
async fn categories_match_core_strings() {
    let store = shared(AnnotationStore::in_memory());
    let (status, cats, _) = call(&store, Method::GET, "/categories", None).await;
    assert_eq!(status, StatusCode::OK);
    let cats = cats.as_array().unwrap();
    assert_eq!(cats.len(), 9);
    for (c, v) in GaeCategory::ALL.iter().zip(cats) {
        assert_eq!(v["key"], c.key());
        assert_eq!(v["criterion"], c.criterion());
        assert_eq!(v["shortcut"], c.shortcut());
    }
}

#[tokio::test]
async fn restart_replays_log() {
    let dir = tempfile::tempdir().unwrap();
    let (id, before) = {
        let store = shared(AnnotationStore::open(dir.path()).unwrap());
        let id = create(&store, 4).await;
        let uri = format!("/sessions/{id}/annotations");
        call(&store, Method::PUT, &uri, Some(annotation("s1", "A", &["tense"]))).await;
        call(&store, Method::PUT, &uri, Some(annotation("s2", "B", &[]))).await;
        call(&store, Method::PUT, &uri, Some(annotation("s1", "A", &["word_order"]))).await;
        let before = call(&store, Method::GET, &format!("/sessions/{id}/scores"), None).await.1;
        (id, before)
    };
    let store = shared(AnnotationStore::open(dir.path()).unwrap());
    let after = call(&store, Method::GET, &format!("/sessions/{id}/scores"), None).await.1;
    assert_eq!(before, after);
    assert_eq!(store.read().last_seq(), 4);
}
