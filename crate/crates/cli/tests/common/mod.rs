//! The fixture corpus and helpers shared by the integration targets.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// `(fixture under ok/, report name, arguments before --input)`.
pub const OK_CASES: &[(&str, &str, &[&str])] = &[
    ("category_additive", "validate", &["validate"]),
    ("category_chain", "validate", &["validate"]),
    ("category_explicit", "validate", &["validate"]),
    ("one_slot", "homology", &["homology"]),
    ("one_slot", "homology_window", &["homology", "--degree-range", "-2..2"]),
    ("one_slot", "triangles", &["check-triangles"]),
    ("twisted_additive", "validate", &["validate"]),
    ("twisted_additive", "homology", &["homology"]),
    ("twisted_additive", "triangles", &["check-triangles"]),
    ("twisted_additive_mod3", "homology", &["homology"]),
    ("twisted_chain", "homology", &["homology"]),
    ("twisted_chain", "witnesses", &["homology", "--witnesses"]),
    ("twisted_chain", "triangles", &["check-triangles"]),
    ("twisted_explicit", "homology", &["homology"]),
    ("twisted_explicit", "text", &["homology", "--format", "text"]),
    ("complex", "homology", &["homology"]),
    ("complex_mod4", "homology", &["homology", "--witnesses"]),
    ("triangle", "snc", &["snc"]),
    ("triangle", "witnesses", &["snc", "--witnesses"]),
    ("triangle_mod5", "snc", &["snc"]),
    ("two_points", "snc", &["snc"]),
    ("single_component", "snc", &["snc", "--degree-range", "-1..2"]),
    ("blowup_triangle", "blowup", &["blowup"]),
    ("blowup_triangle_mod5", "blowup", &["blowup", "--degree-range", "0..3"]),
    ("ks_point", "ks", &["ks"]),
    ("ks_six_mod5", "ks", &["ks"]),
];

/// `(fixture under malformed/, command, substrings every diagnostic list must contain)`.
pub const MALFORMED_CASES: &[(&str, &str, &[&str])] = &[
    ("bad_mc", "validate", &["MaurerCartanViolation", "(i, j) = (0, 2)"]),
    ("bad_category", "validate", &["UnitalityViolation"]),
    ("bad_shape", "homology", &["is 1x1, expected 2x1"]),
    ("bad_complex", "homology", &["compose to zero"]),
    ("bad_version", "snc", &["unsupported version \"2\""]),
    ("bad_modulus", "snc", &["modulus must be at least 2"]),
    ("bad_unknown_field", "snc", &["unknown field `extra`"]),
    ("bad_unknown_object", "homology", &["unknown object \"W\""]),
    ("bad_incidence", "snc", &["inconsistent incidence", "[0, 2] -> [2]"]),
    ("bad_blowup", "blowup", &["inconsistent incidence"]),
    ("bad_ks_phi", "ks", &["not a chain map", "φ"]),
    ("bad_functor", "homology", &["FunctorInvalid"]),
    ("bad_json", "validate", &["malformed problem file"]),
];

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn dgweight(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_dgweight")).args(args).output().expect("binary runs");
    Output {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 output"),
    }
}

pub fn run_case(dir: &str, fixture: &str, args: &[&str]) -> Output {
    let path = fixtures().join(dir).join(format!("{fixture}.json"));
    let mut all: Vec<&str> = args.to_vec();
    let p = path.to_str().expect("utf-8 path").to_string();
    all.push("--input");
    all.push(&p);
    dgweight(&all)
}
