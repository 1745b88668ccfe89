use std::fmt;

use super::{HomElement, NegDgCategory};
use crate::exactlinalg::Int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    Negativity,
    DifferentialSquare,
    IdentityNotClosed,
    Unitality,
    Leibniz,
    Associativity,
    Degree,
    MaurerCartan,
    Functor,
    Structure,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::Negativity => "NegativityViolation",
            ViolationKind::DifferentialSquare => "DifferentialSquareNonzero",
            ViolationKind::IdentityNotClosed => "IdentityNotClosed",
            ViolationKind::Unitality => "UnitalityViolation",
            ViolationKind::Leibniz => "LeibnizViolation",
            ViolationKind::Associativity => "AssociativityViolation",
            ViolationKind::Degree => "DegreeViolation",
            ViolationKind::MaurerCartan => "MaurerCartanViolation",
            ViolationKind::Functor => "FunctorInvalid",
            ViolationKind::Structure => "StructureViolation",
        };
        f.write_str(s)
    }
}

/// One failed axiom together with a human-readable witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

/// Every violated axiom; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, kind: ViolationKind, message: impl Into<String>) {
        self.violations.push(Violation { kind, message: message.into() });
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

pub(crate) fn coords_string(v: &[Int]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn sign(k: i64) -> Int {
    if k.rem_euclid(2) == 0 {
        Int::from(1)
    } else {
        Int::from(-1)
    }
}

fn degrees_of(j: &NegDgCategory, x: usize, y: usize) -> Vec<i64> {
    j.hom(x, y).degrees().collect()
}

/// Checks negativity, `d^2 = 0`, `d(id) = 0`, unitality, the Leibniz rule
/// `d(g f) = (dg) f + (-1)^{deg g} g (df)` and associativity on generators.
pub fn validate_category(j: &NegDgCategory) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let n = j.object_count();
    for x in 0..n {
        for y in 0..n {
            let h = j.hom(x, y);
            for d in h.degrees() {
                if d > 0 {
                    rep.push(
                        ViolationKind::Negativity,
                        format!("hom^{d}({}, {}) has rank {}", j.name(x), j.name(y), h.rank(d)),
                    );
                }
                let dd = &h.differential(d + 1) * &h.differential(d);
                if !dd.is_zero() {
                    rep.push(
                        ViolationKind::DifferentialSquare,
                        format!("d∘d ≠ 0 on hom^{d}({}, {})", j.name(x), j.name(y)),
                    );
                }
            }
        }
        let did = j.differential(&j.identity(x));
        if !did.is_zero() {
            rep.push(ViolationKind::IdentityNotClosed, format!("d(id_{}) = {}", j.name(x), coords_string(&did.coords)));
        }
    }
    if !rep.is_valid() {
        // Later checks assume well-formed hom complexes.
        return rep;
    }
    for x in 0..n {
        for y in 0..n {
            for d in degrees_of(j, x, y) {
                for k in 0..j.rank(x, y, d) {
                    let f = j.generator(x, y, d, k);
                    let left = j.compose_unchecked(&j.identity(y), &f);
                    let right = j.compose_unchecked(&f, &j.identity(x));
                    if left != f || right != f {
                        rep.push(
                            ViolationKind::Unitality,
                            format!(
                                "generator {k} of hom^{d}({}, {}) is not fixed by identities",
                                j.name(x),
                                j.name(y)
                            ),
                        );
                    }
                }
            }
        }
    }
    check_leibniz(j, &mut rep);
    check_associativity(j, &mut rep);
    rep
}

fn check_leibniz(j: &NegDgCategory, rep: &mut ValidationReport) {
    let n = j.object_count();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for e in degrees_of(j, y, z) {
                    for d in degrees_of(j, x, y) {
                        for a in 0..j.rank(y, z, e) {
                            let g = j.generator(y, z, e, a);
                            let dg = j.differential(&g);
                            for b in 0..j.rank(x, y, d) {
                                let f = j.generator(x, y, d, b);
                                let lhs = j.differential(&j.compose_unchecked(&g, &f));
                                let mut rhs = j.compose_unchecked(&dg, &f);
                                let t = j.compose_unchecked(&g, &j.differential(&f)).scale(&sign(e));
                                rhs.add_assign(&t);
                                if lhs != rhs {
                                    rep.push(
                                        ViolationKind::Leibniz,
                                        format!(
                                            "g = gen {a} of hom^{e}({}, {}), f = gen {b} of hom^{d}({}, {}): d(gf) = {} but (dg)f ± g(df) = {}",
                                            j.name(y),
                                            j.name(z),
                                            j.name(x),
                                            j.name(y),
                                            coords_string(&lhs.coords),
                                            coords_string(&rhs.coords)
                                        ),
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

fn check_associativity(j: &NegDgCategory, rep: &mut ValidationReport) {
    let n = j.object_count();
    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for dh in degrees_of(j, y, z) {
                        for dg in degrees_of(j, x, y) {
                            for df in degrees_of(j, w, x) {
                                if j.rank(w, z, dh + dg + df) == 0 {
                                    continue;
                                }
                                associativity_block(j, (w, x, y, z), (dh, dg, df), rep);
                            }
                        }
                    }
                }
            }
        }
    }
}

fn associativity_block(
    j: &NegDgCategory,
    (w, x, y, z): (usize, usize, usize, usize),
    (dh, dg, df): (i64, i64, i64),
    rep: &mut ValidationReport,
) {
    let fs: Vec<HomElement> = (0..j.rank(w, x, df)).map(|k| j.generator(w, x, df, k)).collect();
    for a in 0..j.rank(y, z, dh) {
        let h = j.generator(y, z, dh, a);
        for b in 0..j.rank(x, y, dg) {
            let g = j.generator(x, y, dg, b);
            let hg = j.compose_unchecked(&h, &g);
            for (c, f) in fs.iter().enumerate() {
                let gf = j.compose_unchecked(&g, f);
                let left = j.compose_unchecked(&h, &gf);
                let right = j.compose_unchecked(&hg, f);
                if left != right {
                    rep.push(
                        ViolationKind::Associativity,
                        format!(
                            "generators ({a}, {b}, {c}) over {} -> {} -> {} -> {}: {} vs {}",
                            j.name(w),
                            j.name(x),
                            j.name(y),
                            j.name(z),
                            coords_string(&left.coords),
                            coords_string(&right.coords)
                        ),
                    );
                }
            }
        }
    }
}
