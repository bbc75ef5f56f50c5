mod common;

use axum::http::StatusCode;
use common::*;
use rhetor_core::corpus::{Corpus, ComponentLabel};
use rhetor_core::{stub, Analyzer};
use rhetor_service::{router, AppState, SubmissionLog, SNAPSHOT_HEADER};
use serde_json::{json, Value};

#[tokio::test]
async fn topics_match_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir.path().join("log.jsonl"));
    let r = get(&app, "/topics").await;
    assert_eq!(r.status, StatusCode::OK);
    let body = r.json();
    let manifest: Value = serde_json::from_str(&read_fixture("mini.manifest.json")).unwrap();
    let expected: Vec<Value> = manifest["topics"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(t, n)| json!({"topic": t, "example_count": n}))
        .collect();
    assert_eq!(body, Value::Array(expected));
    let total: u64 = body.as_array().unwrap().iter().map(|t| t["example_count"].as_u64().unwrap()).sum();
    assert_eq!(total, manifest["posts"].as_u64().unwrap());
    assert_golden("topics", &body);
}

#[tokio::test]
async fn empty_corpus_has_no_topics() {
    let dir = tempfile::tempdir().unwrap();
    let state = AppState::new(
        &Corpus::default(),
        Analyzer::new(stub::lexicon_bundle(256, 0)).unwrap(),
        SubmissionLog::open(dir.path().join("log.jsonl")).unwrap(),
    );
    let app = router(std::sync::Arc::new(state));
    assert_eq!(get(&app, "/topics").await.json(), json!([]));
}

#[tokio::test]
async fn examples_are_ranked_and_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir.path().join("log.jsonl"));
    let body = get(&app, "/topics/abortion/examples").await.json();
    let ex = body["examples"].as_array().unwrap();
    let deltas: Vec<u64> = ex.iter().map(|e| e["delta"].as_u64().unwrap()).collect();
    assert_eq!(deltas, [14, 5]);

    // The average is the mean of the returned ratio vectors.
    for c in ["claim", "logos", "pathos", "ethos", "evidence"] {
        let mean: f64 = ex.iter().map(|e| e["portfolio"]["ratios"][c].as_f64().unwrap()).sum::<f64>() / ex.len() as f64;
        assert!((mean - body["average"][c].as_f64().unwrap()).abs() < 1e-12);
    }
    // Two points: symmetric about the origin, separated by their distance.
    let ratios = |e: &Value| -> Vec<f64> {
        ["claim", "logos", "pathos", "ethos", "evidence"].iter().map(|c| e["portfolio"]["ratios"][c].as_f64().unwrap()).collect()
    };
    let d: f64 = ratios(&ex[0]).iter().zip(ratios(&ex[1])).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    let (x0, x1) = (ex[0]["coordinates"]["x"].as_f64().unwrap(), ex[1]["coordinates"]["x"].as_f64().unwrap());
    assert!(((x0 - x1).abs() - d).abs() < 1e-9);
    assert!((x0 + x1).abs() < 1e-12);
    assert_golden("examples_abortion", &body);
}

#[tokio::test]
async fn single_example_sits_at_origin() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir.path().join("log.jsonl"));
    let body = get(&app, "/topics/parenthood/examples").await.json();
    assert_eq!(body["examples"].as_array().unwrap().len(), 1);
    assert_eq!(body["examples"][0]["coordinates"], json!({"x": 0.0, "y": 0.0}));
    assert_eq!(body["average"]["logos"], json!(0.4));
    assert_golden("examples_parenthood", &body);
}

#[tokio::test]
async fn unknown_topic_is_404() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir.path().join("log.jsonl"));
    let r = get(&app, "/topics/taxes/examples").await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
    assert_eq!(r.json()["error"], "unknown_topic");
    let r = post(&app, "/analyze", json!({"topic": "taxes", "body": "Taxes are fine."})).await;
    assert_eq!(r.json()["error"], "unknown_topic");
}

#[tokio::test]
async fn analyze_single_sentence() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir.path().join("log.jsonl"));
    let r = post(&app, "/analyze", json!({"topic": "parenthood", "body": "Parenthood is a burden."})).await;
    assert_eq!(r.status, StatusCode::OK);
    let body = r.json();
    assert_eq!(body["sentences"].as_array().unwrap().len(), 1);
    assert_eq!(body["sentences"][0]["component"], "claim");
    assert_eq!(body["portfolio"]["weights"]["claim"], json!(1.0));
    assert_eq!(body["portfolio"]["total_sentences"], json!(1));
    assert_eq!(body["flags"]["default_claim_applied"], json!(true));
    assert_golden("analyze_single", &body);
}

#[tokio::test]
async fn analyze_scenario_links_every_premise_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir.path().join("log.jsonl"));
    let req = json!({"topic": "parenthood", "body": read_fixture("scenario/revised.txt")});
    let a = post(&app, "/analyze", req.clone()).await;
    let b = post(&app, "/analyze", req).await;
    assert_eq!(a.bytes, b.bytes);
    let body = a.json();
    let sum: f64 = body["portfolio"]["ratios"].as_object().unwrap().values().map(|v| v.as_f64().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-9);
    let edges = body["tree"]["edges"].as_array().unwrap();
    for s in body["sentences"].as_array().unwrap() {
        if s["component"] == "premise" {
            assert!(edges.iter().any(|e| e["premise_index"] == s["index"]), "premise {} unlinked", s["index"]);
        }
    }
    assert!(body["projection"]["x"].is_number());
    assert_golden("analyze_revised", &body);
}

#[tokio::test]
async fn analyze_rejects_empty_and_malformed_bodies() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir.path().join("log.jsonl"));
    let r = post(&app, "/analyze", json!({"topic": "parenthood", "body": "  "})).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["error"], "validation");
    let r = post(&app, "/analyze", json!({"body": "No topic."})).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert!(r.json()["detail"].as_str().unwrap().contains("topic"));
}

#[tokio::test]
async fn all_premise_models_fall_back_to_a_first_sentence_claim() {
    let dir = tempfile::tempdir().unwrap();
    let app = app_with(stub::all_premise_bundle(256, 0), &dir.path().join("log.jsonl"));
    let body = post(&app, "/analyze", json!({"topic": "abortion", "body": "It is hard. Very hard."}))
        .await
        .json();
    assert_eq!(body["sentences"][0]["component"], json!(ComponentLabel::Claim));
    assert_eq!(body["flags"]["default_claim_applied"], json!(true));
}

#[tokio::test]
async fn compare_against_average_and_example() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir.path().join("log.jsonl"));
    let topic = get(&app, "/topics/abortion/examples").await.json();

    let same = post(&app, "/compare", json!({"user_ratios": topic["average"], "reference": "topic_average", "topic": "abortion"})).await;
    assert_eq!(same.status, StatusCode::OK);
    for b in same.json().as_array().unwrap() {
        assert_eq!(b["value"].as_f64().unwrap(), 0.0);
    }

    // Against a named example the bars are the client-side difference.
    let example = &topic["examples"][1];
    let user = json!({"claim": 0.5, "logos": 0.0, "pathos": 0.5, "ethos": 0.0, "evidence": 0.0});
    let r = post(&app, "/compare", json!({"user_ratios": user, "reference": example["post_id"], "topic": "abortion"})).await;
    let bars = r.json();
    for c in ["claim", "logos", "pathos", "ethos", "evidence"] {
        let expected = (user[c].as_f64().unwrap() - example["portfolio"]["ratios"][c].as_f64().unwrap()) * 100.0;
        assert!((bar(&bars, c) - expected).abs() < 1e-9);
    }
    let values: Vec<f64> = bars.as_array().unwrap().iter().map(|b| b["value"].as_f64().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
    assert_golden("compare_example", &bars);
}

#[tokio::test]
async fn compare_logos_poor_draft_lists_logos_first() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir.path().join("log.jsonl"));
    let user = json!({"claim": 0.2, "logos": 0.0, "pathos": 0.8, "ethos": 0.0, "evidence": 0.0});
    let bars = post(&app, "/compare", json!({"user_ratios": user, "reference": "parenthood-001", "topic": "parenthood"}))
        .await
        .json();
    assert_eq!(bars[0]["category"], "logos");
    assert_eq!(bars[0]["deficient"], json!(true));
}

#[tokio::test]
async fn compare_errors() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir.path().join("log.jsonl"));
    let user = json!({"claim": 1.0, "logos": 0.0, "pathos": 0.0, "ethos": 0.0, "evidence": 0.0});
    let r = post(&app, "/compare", json!({"user_ratios": user, "reference": "nope", "topic": "abortion"})).await;
    assert_eq!((r.status, r.json()["error"].clone()), (StatusCode::NOT_FOUND, json!("unknown_example")));
    // An example from another topic does not resolve.
    let r = post(&app, "/compare", json!({"user_ratios": user, "reference": "parenthood-001", "topic": "abortion"})).await;
    assert_eq!(r.json()["error"], "unknown_example");
    let r = post(&app, "/compare", json!({"user_ratios": user, "reference": "topic_average", "topic": "x"})).await;
    assert_eq!(r.json()["error"], "unknown_topic");
    let bad = json!({"claim": 0.7, "logos": 0.7, "pathos": 0.0, "ethos": 0.0, "evidence": 0.0});
    let r = post(&app, "/compare", json!({"user_ratios": bad, "reference": "topic_average", "topic": "abortion"})).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

fn submission(session: &str, body: &str) -> Value {
    json!({
        "session_id": session,
        "topic": "parenthood",
        "body": body,
        "ratios": {"claim": 0.5, "logos": 0.5, "pathos": 0.0, "ethos": 0.0, "evidence": 0.0}
    })
}

#[tokio::test]
async fn submissions_replay_in_order_across_restart() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.jsonl");
    {
        let app = app(&log);
        let a = post(&app, "/submissions", submission("s1", "first")).await;
        assert_eq!(a.status, StatusCode::CREATED);
        assert_eq!(a.json(), json!({"submission_id": 1}));
        post(&app, "/submissions", submission("s2", "other")).await;
        post(&app, "/submissions", submission("s1", "second")).await;
    }
    let app = app(&log);
    let replay = get(&app, "/submissions?session_id=s1").await.json();
    let bodies: Vec<&str> = replay.as_array().unwrap().iter().map(|r| r["body"].as_str().unwrap()).collect();
    assert_eq!(bodies, ["first", "second"]);
    let ts: Vec<u64> = replay.as_array().unwrap().iter().map(|r| r["timestamp_ms"].as_u64().unwrap()).collect();
    assert!(ts[0] < ts[1]);
    assert_eq!(replay[1]["submission_id"], json!(3));
}

#[tokio::test]
async fn malformed_submission_appends_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let log = dir.path().join("log.jsonl");
    let app = app(&log);
    let mut req = submission("s1", "text");
    req.as_object_mut().unwrap().remove("topic");
    let r = post(&app, "/submissions", req).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["error"], "validation");
    let r = post(&app, "/submissions", submission("", "text")).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(std::fs::read(&log).unwrap().len(), 0);
    let r = get(&app, "/submissions").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn every_response_carries_the_snapshot_hash() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = lexicon();
    let expected = bundle.snapshot_id();
    let app = app_with(bundle, &dir.path().join("log.jsonl"));
    for r in [
        get(&app, "/topics").await,
        get(&app, "/topics/none/examples").await,
        get(&app, "/no/such/route").await,
        post(&app, "/analyze", json!({"topic": "abortion", "body": "Fine."})).await,
    ] {
        assert_eq!(r.headers[SNAPSHOT_HEADER], expected.as_str());
    }
    let r = get(&app, "/no/such/route").await;
    assert_eq!((r.status, r.json()["error"].clone()), (StatusCode::NOT_FOUND, json!("not_found")));
}

#[tokio::test]
async fn startup_fails_without_models() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = rhetor_service::ServiceConfig {
        corpus: fixture("mini.jsonl"),
        models: dir.path().join("no-models"),
        port: 0,
        log: dir.path().join("log.jsonl"),
    };
    match AppState::load(&cfg) {
        Err(rhetor_service::StartupError::Models { path, .. }) => assert_eq!(path, cfg.models),
        Err(e) => panic!("wrong error {e}"),
        Ok(_) => panic!("started without models"),
    }
    // Saved stub models load.
    lexicon().save(&cfg.models).unwrap();
    assert!(AppState::load(&cfg).is_ok());
}
