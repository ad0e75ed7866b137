use polychain_web::api;
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn extremal_lists_chains_with_cells() {
    let doc = parse(api::extremal("azi", 6, false).unwrap());
    assert_eq!(doc["value"]["exact"], "10790359/54000");
    assert_eq!(doc["chains"][0]["text"], "1,2,2,1");
    assert_eq!(doc["chains"][0]["cells"].as_array().unwrap().len(), 6);
    assert_eq!(doc["chains"][0]["cells"][2], serde_json::json!([2, 0]));
    assert_eq!(doc["distinct_up_to_reversal"], 1);
    assert_eq!(doc["truncated"], false);

    let doc = parse(api::extremal("azi", 10, true).unwrap());
    assert_eq!(doc["chains"][0]["text"], "1,1,1,1,1,1,1,1");
    assert_eq!(doc["objective"], "min");
}

#[test]
fn extremal_truncates_large_optimal_sets() {
    let doc = parse(api::extremal("azi", 80, false).unwrap());
    assert_eq!(doc["labeled_count"], "38");
    assert_eq!(doc["chains"].as_array().unwrap().len(), api::CHAIN_LIMIT);
    assert_eq!(doc["truncated"], true);
    assert!(doc["distinct_up_to_reversal"].is_null());
}

#[test]
fn curve_matches_single_queries() {
    let doc = parse(api::value_curve("harmonic", 3, 30).unwrap());
    let points = doc["points"].as_array().unwrap();
    assert_eq!(points.len(), 28);
    let single = parse(api::extremal("harmonic", 17, false).unwrap());
    assert_eq!(points[14]["max"], single["value"]);
    assert!(api::value_curve("azi", 9, 8).is_err());
    assert!(api::value_curve("azi", 2, 8).is_err());
}

#[test]
fn chain_values() {
    let doc = parse(api::chain_value("azi", "1,2,2,1").unwrap());
    assert_eq!(doc["value"]["exact"], "10790359/54000");
    assert_eq!(doc["segments"], serde_json::json!([3, 2, 3]));
    let domino = parse(api::chain_value("azi", "").unwrap());
    assert_eq!(domino["value"]["exact"], "3801/64");
    assert_eq!(api::chain_value("azi", "1,3").unwrap_err(), "invalid link '3'");
    assert!(api::chain_value("nope", "1").is_err());
    let float = parse(api::chain_value("abc", "1,1").unwrap());
    assert!(float["value"]["exact"].is_null());
}

#[test]
fn preset_list() {
    let names = parse(api::presets());
    assert!(names.as_array().unwrap().iter().any(|n| n == "azi"));
}
