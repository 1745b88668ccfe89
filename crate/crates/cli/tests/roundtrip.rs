//! Canonical problem files survive parse and serialize byte for byte.

mod common;

use dgweight_cli::schema::{
    canonical_json, canonicalize, BlowupPayload, CategoryPayload, ComplexPayload, Kind, KsPayload, ProblemFile,
    SncPayload, TwistedPayload,
};
use serde_json::Value;

fn typed_roundtrip(file: &ProblemFile) -> Value {
    fn again<T: serde::de::DeserializeOwned + serde::Serialize>(v: &Value) -> Value {
        serde_json::to_value(serde_json::from_value::<T>(v.clone()).expect("payload parses")).unwrap()
    }
    let v = &file.payload;
    match file.kind {
        Kind::Category => again::<CategoryPayload>(v),
        Kind::TwistedComplex => again::<TwistedPayload>(v),
        Kind::Complex => again::<ComplexPayload>(v),
        Kind::Snc => again::<SncPayload>(v),
        Kind::Blowup => again::<BlowupPayload>(v),
        Kind::Ks => again::<KsPayload>(v),
    }
}

#[test]
fn ok_fixtures_are_canonical() {
    let dir = common::fixtures().join("ok");
    let mut seen = 0;
    let mut kinds = std::collections::BTreeSet::new();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let file: ProblemFile = serde_json::from_str(&text).unwrap();
        assert_eq!(canonicalize(&file), text, "{}", path.display());
        let typed = typed_roundtrip(&file);
        assert_eq!(typed, file.payload, "{}", path.display());
        let rebuilt = ProblemFile { payload: typed, ..file.clone() };
        assert_eq!(canonicalize(&rebuilt), text, "{}", path.display());
        kinds.insert(file.kind.as_str());
        seen += 1;
    }
    assert!(seen >= 12, "only {seen} fixtures");
    assert_eq!(kinds.len(), 6, "{kinds:?}");
}

#[test]
fn canonical_form_sorts_keys() {
    let text = r#"{"version":"1","payload":{"strata":[{"tuple":[0],"count":1}],"components":1},"kind":"snc","coefficient":{"type":"Z"}}"#;
    let file: ProblemFile = serde_json::from_str(text).unwrap();
    let canon = canonicalize(&file);
    let keys: Vec<usize> =
        ["coefficient", "kind", "payload", "version"].iter().map(|k| canon.find(k).unwrap()).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    let reparsed: ProblemFile = serde_json::from_str(&canon).unwrap();
    assert_eq!(canonicalize(&reparsed), canon);
    assert_eq!(canonical_json(&serde_json::json!({"b": 1, "a": [2]})), "{\n  \"a\": [\n    2\n  ],\n  \"b\": 1\n}\n");
}

#[test]
fn degree_keys_must_be_canonical_integers() {
    let payload = r#"{"base":{"lowest":0,"ranks":[],"boundaries":[]},"closure":{"lowest":0,"ranks":[1],"boundaries":[]},"phi":{"+0":[[1]]},"rho":{}}"#;
    assert!(serde_json::from_str::<KsPayload>(payload).is_err());
    let payload = payload.replace("+0", "0");
    assert!(serde_json::from_str::<KsPayload>(&payload).is_ok());
}
