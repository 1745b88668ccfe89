//! One function per subcommand, each filling in a report.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use dgweight_core::exactlinalg::Complex;
use dgweight_core::kshom::ks_homology;
use dgweight_core::sncweight::{blowup_weight_homology, build_gamma_complex, snc_weight_homology};
use dgweight_core::twisted::{
    cone_triangle, geq_triangle, leq_triangle, truncate_geq, truncate_leq, truncation_triangle, Triangle,
};
use dgweight_core::weighthom::{evaluate, long_exact_check, weight_homology, WeightHomologyResult};
use dgweight_core::{Coefficient, FgAbGroup, TwistedComplex, TwistedMorphism};
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

use crate::build::{self, Built, Invalid};
use crate::report::{group_value, groups_value, vectors_value, Report, Status};
use crate::schema::{Kind, ProblemFile, VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Homology,
    Snc,
    Blowup,
    Ks,
    CheckTriangles,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Homology => "homology",
            Command::Snc => "snc",
            Command::Blowup => "blowup",
            Command::Ks => "ks",
            Command::CheckTriangles => "check-triangles",
        }
    }

    fn accepts(self) -> &'static [Kind] {
        use Kind::*;
        match self {
            Command::Validate => &[Category, TwistedComplex, Complex, Snc, Blowup, Ks],
            Command::Homology => &[TwistedComplex, Complex],
            Command::Snc => &[Snc],
            Command::Blowup => &[Blowup],
            Command::Ks => &[Ks],
            Command::CheckTriangles => &[TwistedComplex],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub window: Option<RangeInclusive<i64>>,
    pub witnesses: bool,
}

/// Parses `a..b` (inclusive) with optional signs.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a..b, got \"{s}\""))?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start \"{a}\""))?;
    let b: i64 = b.trim_start_matches('=').trim().parse().map_err(|_| format!("bad range end \"{b}\""))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

fn payload<T: DeserializeOwned>(file: &ProblemFile) -> Built<T> {
    T::deserialize(&file.payload).map_err(|e| Invalid::one(format!("payload of kind {}: {e}", file.kind.as_str())))
}

/// Parses the envelope and runs `cmd`; never panics on malformed text.
pub fn run_text(cmd: Command, text: &str, opts: &Options) -> Report {
    let mut report = Report::new(Status::Ok, cmd.name());
    let file: ProblemFile = match serde_json::from_str(text) {
        Ok(f) => f,
        Err(e) => {
            report.status = Status::Invalid;
            report.diagnostics.push(format!("malformed problem file: {e}"));
            return report;
        }
    };
    report.kind = Some(file.kind.as_str().to_string());
    match run_file(cmd, &file, opts, &mut report) {
        Ok(()) => {}
        Err(Invalid(msgs)) => {
            report.status = Status::Invalid;
            report.results.clear();
            report.diagnostics.extend(msgs);
        }
    }
    report
}

fn run_file(cmd: Command, file: &ProblemFile, opts: &Options, report: &mut Report) -> Built<()> {
    if file.version != VERSION {
        return Err(Invalid::one(format!("unsupported version \"{}\", expected \"{VERSION}\"", file.version)));
    }
    if !cmd.accepts().contains(&file.kind) {
        let kinds: Vec<&str> = cmd.accepts().iter().map(|k| k.as_str()).collect();
        return Err(Invalid::one(format!(
            "{} expects kind {}, got {}",
            cmd.name(),
            kinds.join(" or "),
            file.kind.as_str()
        )));
    }
    let coeff = build::coefficient(file.coefficient)?;
    let out = &mut report.results;
    match (cmd, file.kind) {
        (Command::Validate, kind) => validate(kind, file, coeff, out)?,
        (Command::Homology, Kind::TwistedComplex) => {
            let t = build::twisted(&payload(file)?, coeff)?;
            let window = opts.window.clone().unwrap_or_else(|| support(&t.complex));
            let r = weight_homology(&t.functor, &t.complex, window, opts.witnesses)
                .map_err(|e| Invalid::one(e.to_string()))?;
            put_homology(out, &r, opts.witnesses);
        }
        (Command::Homology, Kind::Complex) => {
            let c = build::complex(&payload(file)?, coeff)?;
            let window = opts.window.clone().unwrap_or(c.lowest()..=c.highest());
            put_complex_homology(out, &c, window, opts.witnesses, |d| d);
        }
        (Command::Snc, _) => {
            let e = build::snc(&payload(file)?)?;
            match (&opts.window, opts.witnesses) {
                (None, false) => put_homology(out, &snc_weight_homology(&e, coeff), false),
                _ => {
                    let window = opts.window.clone().unwrap_or(0..=e.dimension().map_or(-1, |d| d as i64));
                    // Homological degree a sits in cohomological degree -a.
                    put_complex_homology(out, &build_gamma_complex(&e, coeff), window, opts.witnesses, |a| -a);
                }
            }
        }
        (Command::Blowup, _) => {
            let d = build::blowup(&payload(file)?)?;
            let top = d.e.dimension().map_or(0, |t| t as i64);
            let window = opts.window.clone().unwrap_or(1..=top + 2);
            let r = blowup_weight_homology(&d, coeff, window);
            out.insert("homology".into(), groups_value(&r.groups));
            out.insert("out_of_range".into(), json!(r.out_of_range));
            out.insert("wh1_kernel".into(), vectors_value(&r.wh1_kernel.columns()));
        }
        (Command::Ks, _) => {
            let input = build::ks(&payload(file)?, coeff)?;
            let r = ks_homology(&input);
            let fill = |m: &BTreeMap<i64, FgAbGroup>| match &opts.window {
                None => groups_value(m),
                Some(w) => {
                    groups_value(&w.clone().map(|d| (d, m.get(&d).cloned().unwrap_or_else(FgAbGroup::zero))).collect())
                }
            };
            out.insert("ks".into(), fill(&r.ks));
            out.insert("arithmetic".into(), fill(&r.ar));
            out.insert("base".into(), fill(&r.base));
            let seq: Map<String, Value> = r
                .sequence_report
                .degrees
                .iter()
                .filter(|d| opts.window.as_ref().is_none_or(|w| w.contains(&d.degree)))
                .map(|d| {
                    (
                        d.degree.to_string(),
                        json!({
                            "coinvariants": group_value(&d.coinvariants),
                            "arithmetic": group_value(&d.arithmetic),
                            "invariants": group_value(&d.invariants),
                        }),
                    )
                })
                .collect();
            out.insert("sequence".into(), Value::Object(seq));
            out.insert(
                "checks".into(),
                json!({
                    "sequence_exact": r.sequence_report.is_exact(),
                    "cone_exact": r.cone_report.is_exact(),
                    "cone_positions": r.cone_report.positions_checked,
                }),
            );
            for d in &r.sequence_report.degrees {
                for f in &d.failures {
                    report.diagnostics.push(format!("sequence in degree {}: {f}", d.degree));
                }
            }
            for f in &r.cone_report.failures {
                report.diagnostics.push(format!("cone triangle: {f}"));
            }
            if !report.diagnostics.is_empty() {
                report.status = Status::Error;
            }
        }
        (Command::CheckTriangles, _) => {
            let t = build::twisted(&payload(file)?, coeff)?;
            check_triangles(&t, opts.window.clone(), report)?;
        }
        _ => unreachable!("kinds are checked above"),
    }
    Ok(())
}

fn validate(kind: Kind, file: &ProblemFile, coeff: Coefficient, out: &mut Map<String, Value>) -> Built<()> {
    match kind {
        Kind::Category => {
            let c = build::category(&payload::<crate::schema::CategoryPayload>(file)?.category)?;
            out.insert("objects".into(), json!(c.dg().object_count()));
        }
        Kind::TwistedComplex => {
            let t = build::twisted(&payload(file)?, coeff)?;
            out.insert("slots".into(), json!(t.complex.support().collect::<Vec<_>>()));
        }
        Kind::Complex => {
            let c = build::complex(&payload(file)?, coeff)?;
            out.insert("degrees".into(), json!([c.lowest(), c.highest()]));
        }
        Kind::Snc => {
            let e = build::snc(&payload(file)?)?;
            out.insert("dimension".into(), json!(e.dimension()));
        }
        Kind::Blowup => {
            let d = build::blowup(&payload(file)?)?;
            out.insert("dimension".into(), json!(d.e.dimension()));
        }
        Kind::Ks => {
            build::ks(&payload(file)?, coeff)?;
        }
    }
    out.insert("valid".into(), json!(true));
    Ok(())
}

fn support(p: &TwistedComplex) -> RangeInclusive<i64> {
    match (p.min_slot(), p.max_slot()) {
        (Some(lo), Some(hi)) => lo..=hi,
        _ => RangeInclusive::new(0, -1),
    }
}

fn put_homology(out: &mut Map<String, Value>, r: &WeightHomologyResult, witnesses: bool) {
    out.insert("homology".into(), groups_value(&r.groups));
    if witnesses {
        let w: Map<String, Value> = r
            .witnesses
            .iter()
            .map(|(d, w)| {
                (d.to_string(), json!({"cycles": vectors_value(&w.cycles), "boundaries": vectors_value(&w.boundaries)}))
            })
            .collect();
        out.insert("witnesses".into(), Value::Object(w));
    }
}

/// Homology of `c` at `to_cohomological(d)` for every `d` in `window`, keyed by `d`.
fn put_complex_homology(
    out: &mut Map<String, Value>,
    c: &Complex,
    window: RangeInclusive<i64>,
    witnesses: bool,
    to_cohomological: impl Fn(i64) -> i64,
) {
    let mut r = WeightHomologyResult::default();
    for d in window {
        let k = to_cohomological(d);
        r.groups.insert(d, c.homology(k));
        if witnesses {
            let w = dgweight_core::weighthom::Witness {
                cycles: c.cocycles(k).basis().to_vec(),
                boundaries: c.coboundaries(k).basis().to_vec(),
            };
            r.witnesses.insert(d, w);
        }
    }
    put_homology(out, &r, witnesses);
}

fn check_triangles(t: &build::Twisted, window: Option<RangeInclusive<i64>>, report: &mut Report) -> Built<()> {
    let (j, gamma, p) = (t.category.dg(), &t.functor, &t.complex);
    let s = support(p);
    let window = window.unwrap_or((s.start() - 1)..=(s.end() + 1));
    let mut families: Vec<(String, i64, Triangle)> = Vec::new();
    for n in window.clone() {
        families.push(("truncation".into(), n, truncation_triangle(j, p, n)));
        families.push(("geq".into(), n, geq_triangle(j, p, n)));
        families.push(("leq".into(), n, leq_triangle(j, p, n)));
    }
    let id = TwistedMorphism::identity(j, p);
    families.push(("cone_of_identity".into(), 0, cone_triangle(j, &id).map_err(|e| Invalid::one(e.to_string()))?));
    let mut rows = Vec::new();
    let mut positions = 0usize;
    for (family, n, tri) in &families {
        let les = long_exact_check(j, gamma, tri, Some(window.clone())).map_err(|e| Invalid::one(e.to_string()))?;
        positions += les.positions_checked;
        for f in &les.failures {
            report.diagnostics.push(format!("{family} triangle at n = {n}: {f}"));
        }
        rows.push(json!({"family": family, "n": n, "exact": les.is_exact()}));
    }
    let mut vanishing = 0usize;
    for n in window.clone() {
        let (leq, geq) = (truncate_leq(p, n), truncate_geq(p, n));
        for k in window.clone().filter(|&k| k != n) {
            let (part, name) = if k > n { (&leq, "P_{<=n}") } else { (&geq, "P_{>=n}") };
            vanishing += 1;
            let g = evaluate(gamma, part, k).map_err(|e| Invalid::one(e.to_string()))?;
            if !g.is_zero() {
                report.diagnostics.push(format!("{name} at n = {n} is {g} in degree {k}, expected 0"));
            }
        }
    }
    report.results.insert("triangles".into(), Value::Array(rows));
    report.results.insert(
        "summary".into(),
        json!({
            "triangles": families.len(),
            "exactness_positions": positions,
            "vanishing_checks": vanishing,
            "failures": report.diagnostics.len(),
        }),
    );
    if !report.diagnostics.is_empty() {
        report.status = Status::Error;
    }
    Ok(())
}
