use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use freight_tco::engine::Engine;
use freight_tco::{dataset, service};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(method: &str, uri: &str, body: &str) -> (StatusCode, String) {
    let engine = Arc::new(Engine::from(dataset::load_default()));
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = service::router(engine).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn post(uri: &str, body: Value) -> (StatusCode, Value) {
    let (s, b) = call("POST", uri, &body.to_string()).await;
    (s, serde_json::from_str(&b).unwrap())
}

#[tokio::test]
async fn lists_variants() {
    let (s, b) = call("GET", "/api/variants", "").await;
    assert_eq!(s, StatusCode::OK);
    let v: Value = serde_json::from_str(&b).unwrap();
    assert_eq!(v["variants"].as_array().unwrap().len(), 12);
    assert_eq!(v["dataset_sha256"].as_str().unwrap().len(), 64);
}

#[tokio::test]
async fn identical_series_break_even_in_the_first_year() {
    let series = json!({"years": [2025, 2026, 2027], "alt_usd_per_mile": [2.0, 1.9, 1.8], "baseline_usd_per_mile": [2.0, 1.9, 1.8]});
    let (s, v) = post("/api/breakeven", json!({ "series": series })).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["breakeven_year"], 2025);
}

#[tokio::test]
async fn zero_delta_leaves_cost_unchanged() {
    let (s, v) = post("/api/sensitivity", json!({"variant": "D-ICE", "factors": ["diesel_price"], "delta": 0.0})).await;
    assert_eq!(s, StatusCode::OK);
    let r = &v["results"][0];
    assert_eq!(r["baseline_usd_per_mile"], r["perturbed_usd_per_mile"]);
}

#[tokio::test]
async fn diesel_adder_near_five_cents() {
    let (s, v) = post("/api/system-tco", json!({"variant": "D-ICE", "year": 2023})).await;
    assert_eq!(s, StatusCode::OK);
    let a = v["adder_usd_per_mile"].as_f64().unwrap();
    assert!((a - 0.05).abs() <= 0.05, "{a}");
}

#[tokio::test]
async fn bev_curve_with_infrastructure_sits_above() {
    let (s, v) = post("/api/project", json!({"variants": ["BEV700"]})).await;
    assert_eq!(s, StatusCode::OK);
    for p in v["series"][0]["points"].as_array().unwrap() {
        assert!(p["with_infra_usd_per_mile"].as_f64().unwrap() > p["without_infra_usd_per_mile"].as_f64().unwrap());
    }
}

#[tokio::test]
async fn malformed_requests_name_the_field() {
    let (s, v) = post("/api/system-tco", json!({"variant": "D-ICE", "year": "soon"})).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["diagnostics"][0]["field"], "year");

    let (s, v) = post("/api/sensitivity", json!({"variant": "D-ICE", "colour": 1})).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert!(v["diagnostics"][0]["message"].as_str().unwrap().contains("colour"));

    let (s, v) = post("/api/project", json!({"variants": ["BEV9000"]})).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"], "invalid_request");

    let (s, _) = call("POST", "/api/breakeven", "{not json").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn infeasible_fleet_is_unprocessable() {
    let fleet = json!({"vehicles": [{"id": "x", "arrival_h": 1.0, "dwell_h": 0.1, "daily_miles": 600.0}]});
    let (s, v) = post("/api/system-tco", json!({"variant": "BEV700", "fleet": fleet})).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "infeasible");
}

#[tokio::test]
async fn service_and_cli_agree_byte_for_byte() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_freight-tco"))
        .args(["system-tco", "--variant", "NZEV-NG", "--year", "2030", "--format", "structured"])
        .output()
        .unwrap();
    let (s, body) = call("POST", "/api/system-tco", r#"{"variant":"NZEV-NG","year":2030}"#).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), body);
}
