use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use syncomplete::{build_et, parse_dictionary, parse_rules, CostModel, Index};
use syncomplete_bench::{desk_instance, StructureStats};
use syncomplete_cli::response::{views, CompletionResponse};
use syncomplete_cli::server::{self, AppState, Loaded};
use syncomplete_cli::Snapshot;

async fn start(state: AppState) -> String {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move {
        axum::serve(listener, server::router(state, None))
            .await
            .unwrap();
    });
    format!("http://{addr}")
}

fn abc_snapshot() -> Snapshot {
    let dict = parse_dictionary("abc\t5\ncde\t2\n").unwrap();
    let rules = parse_rules("bc\tmn\nc\tmp\n").unwrap();
    let index = Index::Et(build_et(&dict, &rules).unwrap());
    Snapshot::of(&index, &dict, &CostModel::default()).unwrap()
}

async fn get(url: &str) -> (u16, Value) {
    let r = reqwest::get(url).await.unwrap();
    let status = r.status().as_u16();
    (status, r.json().await.unwrap())
}

#[tokio::test]
async fn worked_example_over_the_wire() {
    let state = AppState::new(Loaded::from_snapshot(&abc_snapshot()).unwrap(), None);
    let base = start(state).await;
    let (status, body) = get(&format!("{base}/api/complete?q=abmp&k=1")).await;
    assert_eq!(status, 200);
    let r: CompletionResponse = serde_json::from_value(body).unwrap();
    assert_eq!(r.structure, "et");
    assert_eq!(r.completions.len(), 1);
    assert_eq!(r.completions[0].text, "abc");
    assert_eq!(r.completions[0].score, 5);
    assert_eq!(r.completions[0].rewrites[0].rule_rhs, "mp");
    assert_eq!(r.completions[0].rewrites[0].span, [2, 4]);

    let (_, body) = get(&format!("{base}/api/complete?q=&k=2")).await;
    let texts: Vec<&str> = body["completions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["text"].as_str().unwrap())
        .collect();
    assert_eq!(texts, ["abc", "cde"]);
}

#[tokio::test]
async fn bad_requests() {
    let state = AppState::new(Loaded::from_snapshot(&abc_snapshot()).unwrap(), None);
    let base = start(state).await;
    for path in [
        "/api/complete",
        "/api/complete?k=3",
        "/api/complete?q=a&k=-1",
        "/api/complete?q=a&k=1001",
        "/api/complete?q=a&k=ten",
    ] {
        let (status, body) = get(&format!("{base}{path}")).await;
        assert_eq!(status, 400, "{path}");
        assert_eq!(body["error"], "bad_request");
        assert!(body["message"].as_str().is_some_and(|m| !m.is_empty()));
    }
    let (status, _) = get(&format!("{base}/api/complete?q=a&k=1000")).await;
    assert_eq!(status, 200);
    let (status, body) = get(&format!("{base}/api/complete?q=a")).await;
    assert_eq!(status, 200);
    assert_eq!(body["k"], 10);
}

#[tokio::test]
async fn health_stats_and_cors() {
    let state = AppState::new(Loaded::from_snapshot(&abc_snapshot()).unwrap(), None);
    let base = start(state).await;
    let (status, _) = get(&format!("{base}/api/health")).await;
    assert_eq!(status, 200);
    let (status, body) = get(&format!("{base}/api/stats")).await;
    assert_eq!(status, 200);
    let stats: StructureStats = serde_json::from_value(body).unwrap();
    assert_eq!(stats.string_count, 2);
    assert_eq!(stats.structure, "et");
    let r = reqwest::Client::new()
        .get(format!("{base}/api/health"))
        .header("Origin", "http://example.test")
        .send()
        .await
        .unwrap();
    assert_eq!(r.headers()["access-control-allow-origin"], "*");
}

#[tokio::test]
async fn responses_match_library() {
    let (dict, rules) = desk_instance(11);
    let index = syncomplete::build_ht(&dict, &rules, 0.5, &Default::default()).unwrap();
    let index = Index::Ht(index);
    let snap = Snapshot::of(&index, &dict, &CostModel::default()).unwrap();
    let state = AppState::new(Loaded::from_snapshot(&snap).unwrap(), None);
    let base = start(state).await;
    let client = reqwest::Client::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let s = &dict[rng.gen_range(0..dict.len())].text;
        let q: String = s.chars().take(rng.gen_range(0..=s.len())).collect();
        let k = rng.gen_range(0..12usize);
        let r: CompletionResponse = client
            .get(format!("{base}/api/complete"))
            .query(&[("q", q.as_str()), ("k", &k.to_string())])
            .send()
            .await
            .unwrap()
            .json()
            .await
            .unwrap();
        assert_eq!(r.query, q);
        assert_eq!(
            r.completions,
            views(&index.topk(&q, k), index.rules()),
            "{q:?}"
        );
    }
}

#[tokio::test]
async fn reload_swaps_index() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("idx.snap");
    abc_snapshot().save(&path).unwrap();
    let state = AppState::new(Loaded::from_path(&path).unwrap(), Some(path.clone()));
    let base = start(state.clone()).await;
    let before = Arc::clone(&state.current());

    let dict = parse_dictionary("abc\t5\ncde\t2\nabd\t9\n").unwrap();
    let rules = parse_rules("bc\tmn\n").unwrap();
    let index = Index::Et(build_et(&dict, &rules).unwrap());
    Snapshot::of(&index, &dict, &CostModel::default())
        .unwrap()
        .save(&path)
        .unwrap();
    let r = reqwest::Client::new()
        .post(format!("{base}/api/admin/reload"))
        .send()
        .await
        .unwrap();
    assert_eq!(r.status().as_u16(), 200);
    let (_, body) = get(&format!("{base}/api/complete?q=ab&k=1")).await;
    assert_eq!(body["completions"][0]["text"], "abd");
    // Readers holding the old index keep a consistent view.
    assert_eq!(before.index.topk("ab", 1)[0].text, "abc");
}
