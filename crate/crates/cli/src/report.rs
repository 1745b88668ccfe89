//! Report files and their JSON and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use dgweight_core::{FgAbGroup, Int};
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::schema::canonical_json;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Invalid,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Invalid => "invalid",
            Status::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Invalid => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub status: Status,
    pub command: String,
    pub kind: Option<String>,
    pub results: Map<String, Value>,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(status: Status, command: &str) -> Self {
        Report { status, command: command.to_string(), kind: None, results: Map::new(), diagnostics: Vec::new() }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "status": self.status.as_str(),
            "command": self.command,
            "kind": self.kind,
            "results": self.results,
            "diagnostics": self.diagnostics,
        })
    }

    pub fn to_json(&self) -> String {
        canonical_json(&self.to_value())
    }

    /// Status line, one fixed-width degree/group table per homology map in
    /// the results, remaining results as `key: value`, then diagnostics.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let kind = self.kind.as_deref().unwrap_or("-");
        writeln!(out, "status: {}  command: {}  kind: {kind}", self.status.as_str(), self.command).unwrap();
        for (key, value) in &self.results {
            match value.as_object().filter(|m| is_group_table(m)) {
                Some(table) => {
                    writeln!(out, "\n{key}").unwrap();
                    writeln!(out, "{:>8}  group", "degree").unwrap();
                    let mut rows: Vec<(i64, &Value)> =
                        table.iter().map(|(d, g)| (d.parse().expect("numeric degree"), g)).collect();
                    rows.sort_by_key(|r| r.0);
                    for (d, g) in rows {
                        writeln!(out, "{d:>8}  {}", group_string(g)).unwrap();
                    }
                }
                None => writeln!(out, "\n{key}: {value}").unwrap(),
            }
        }
        if !self.diagnostics.is_empty() {
            writeln!(out, "\ndiagnostics").unwrap();
            for d in &self.diagnostics {
                writeln!(out, "  {d}").unwrap();
            }
        }
        out
    }
}

fn is_group_table(m: &Map<String, Value>) -> bool {
    !m.is_empty() && m.iter().all(|(k, v)| k.parse::<i64>().is_ok() && v.is_array())
}

/// `Z/d1 + ... + Z^r` from an invariant-factor list, `0` for the zero group.
fn group_string(factors: &Value) -> String {
    let mut torsion = Vec::new();
    let mut rank = 0;
    for f in factors.as_array().into_iter().flatten() {
        match f {
            Value::Number(n) if n.as_i64() == Some(0) => rank += 1,
            Value::Number(n) => torsion.push(format!("Z/{n}")),
            Value::String(s) => torsion.push(format!("Z/{s}")),
            other => torsion.push(other.to_string()),
        }
    }
    match rank {
        0 => {}
        1 => torsion.push("Z".into()),
        r => torsion.push(format!("Z^{r}")),
    }
    if torsion.is_empty() {
        "0".into()
    } else {
        torsion.join(" + ")
    }
}

/// An integer as a JSON number when it fits in `i64`, else as a decimal string.
pub fn int_value(x: &Int) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

/// Invariant factors with `0` for each free summand.
pub fn group_value(g: &FgAbGroup) -> Value {
    Value::Array(g.invariant_factors().iter().map(int_value).collect())
}

pub fn groups_value(groups: &BTreeMap<i64, FgAbGroup>) -> Value {
    Value::Object(groups.iter().map(|(d, g)| (d.to_string(), group_value(g))).collect())
}

pub fn vectors_value(vs: &[Vec<Int>]) -> Value {
    Value::Array(vs.iter().map(|v| Value::Array(v.iter().map(int_value).collect())).collect())
}
