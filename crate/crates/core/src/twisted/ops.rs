use std::collections::BTreeMap;

use super::{sign, BlockMap, TwistedComplex, TwistedError, TwistedMorphism};
use crate::dgcore::{NegDgCategory, ObjId};

/// `P[n]`: slot `i` holds `P^{i+n}` and `q[n]_ij = (-1)^n q_{i+n, j+n}`.
pub fn shift(p: &TwistedComplex, n: i64) -> TwistedComplex {
    let s = sign(n);
    let slots = p.slots().iter().map(|(&i, x)| (i - n, x.clone())).collect();
    let q = p.q_blocks().iter().map(|(&(i, k), b)| ((i - n, k - n), b.scale(&s))).collect();
    TwistedComplex::from_parts(slots, q)
}

/// `f[n]` with `f[n]_ab = f_{a+n, b+n}`.
pub fn shift_morphism(f: &TwistedMorphism, n: i64) -> TwistedMorphism {
    let comps = f.components().iter().map(|(&(a, b), blk)| ((a - n, b - n), blk.clone())).collect();
    TwistedMorphism::from_parts(f.degree, shift(&f.source, n), shift(&f.target, n), comps)
}

/// A cone with its structural maps `P' -> Cone(f) -> P[1]`.
#[derive(Clone, Debug)]
pub struct ConeData {
    pub cone: TwistedComplex,
    pub inclusion: TwistedMorphism,
    pub projection: TwistedMorphism,
}

/// `Cone(f)` for a twisted morphism `f: P -> P'`: slot `i` is
/// `P^{i+1} ⊕ P'^i` and `q''_ij = [[-q_{i+1,j+1}, 0], [f_{i+1,j}, q'_ij]]`.
pub fn cone(j: &NegDgCategory, f: &TwistedMorphism) -> Result<ConeData, TwistedError> {
    if f.degree != 0 {
        return Err(TwistedError::NotATwistedMorphism(format!("degree is {}, not 0", f.degree)));
    }
    if !f.is_twisted(j) {
        return Err(TwistedError::NotATwistedMorphism("the morphism differential does not vanish".into()));
    }
    let (p, pp) = (&f.source, &f.target);
    let keys: std::collections::BTreeSet<i64> = p.support().map(|i| i - 1).chain(pp.support()).collect();
    let part = |i: i64| -> (Vec<ObjId>, Vec<ObjId>) { (p.slot(i + 1).to_vec(), pp.slot(i).to_vec()) };
    let slots: BTreeMap<i64, Vec<ObjId>> = keys
        .iter()
        .map(|&i| {
            let (a, b) = part(i);
            (i, [a, b].concat())
        })
        .collect();
    let mut q = BTreeMap::new();
    for &i in &keys {
        for &k in keys.iter().filter(|&&k| k > i) {
            let (si, ti) = part(i);
            let (sk, tk) = part(k);
            let top = p.q_or_zero(j, i + 1, k + 1).neg();
            let low = f.component_or_zero(j, i + 1, k);
            let right = pp.q_or_zero(j, i, k);
            let blk = BlockMap::assemble(
                j,
                i - k + 1,
                &[&si, &ti],
                &[&sk, &tk],
                &[(0, 0, &top), (1, 0, &low), (1, 1, &right)],
            );
            q.insert((i, k), blk);
        }
    }
    let c = TwistedComplex::from_parts(slots, q);
    let p1 = shift(p, 1);
    let mut inc = BTreeMap::new();
    for a in pp.support() {
        let (s, t) = part(a);
        let id = BlockMap::identity(j, &t);
        inc.insert((a, a), BlockMap::assemble(j, 0, &[&t], &[&s, &t], &[(1, 0, &id)]));
    }
    let mut proj = BTreeMap::new();
    for a in p1.support() {
        let (s, t) = part(a);
        let id = BlockMap::identity(j, &s);
        proj.insert((a, a), BlockMap::assemble(j, 0, &[&s, &t], &[&s], &[(0, 0, &id)]));
    }
    Ok(ConeData {
        inclusion: TwistedMorphism::from_parts(0, pp.clone(), c.clone(), inc),
        projection: TwistedMorphism::from_parts(0, c.clone(), p1, proj),
        cone: c,
    })
}

fn restrict(p: &TwistedComplex, keep: impl Fn(i64) -> bool) -> TwistedComplex {
    let slots = p.slots().iter().filter(|(i, _)| keep(**i)).map(|(&i, s)| (i, s.clone())).collect();
    let q = p.q_blocks().iter().filter(|((i, k), _)| keep(*i) && keep(*k)).map(|(&key, b)| (key, b.clone())).collect();
    TwistedComplex::from_parts(slots, q)
}

/// `P_{>=n}`.
pub fn truncate_geq(p: &TwistedComplex, n: i64) -> TwistedComplex {
    restrict(p, |i| i >= n)
}

/// `P_{<=n}`.
pub fn truncate_leq(p: &TwistedComplex, n: i64) -> TwistedComplex {
    restrict(p, |i| i <= n)
}

fn restrict_morphism(f: &TwistedMorphism, keep: impl Fn(i64) -> bool + Copy) -> TwistedMorphism {
    let comps =
        f.components().iter().filter(|((a, b), _)| keep(*a) && keep(*b)).map(|(&k, blk)| (k, blk.clone())).collect();
    TwistedMorphism::from_parts(f.degree, restrict(&f.source, keep), restrict(&f.target, keep), comps)
}

/// `f^{>=n}: P_{>=n} -> P'_{>=n}`.
pub fn restrict_geq(f: &TwistedMorphism, n: i64) -> TwistedMorphism {
    restrict_morphism(f, |i| i >= n)
}

/// `f^{<=n}: P_{<=n} -> P'_{<=n}`.
pub fn restrict_leq(f: &TwistedMorphism, n: i64) -> TwistedMorphism {
    restrict_morphism(f, |i| i <= n)
}

/// The bête truncation of `P` at `n` with its structural maps
/// `ι: P_{>=n} -> P`, `π: P -> P_{<=n-1}` and `δ: P_{<=n-1} -> P_{>=n}[1]`.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub n: i64,
    pub geq: TwistedComplex,
    pub leq: TwistedComplex,
    pub iota: TwistedMorphism,
    pub pi: TwistedMorphism,
    pub delta: TwistedMorphism,
}

pub fn truncation(j: &NegDgCategory, p: &TwistedComplex, n: i64) -> Truncation {
    let geq = truncate_geq(p, n);
    let leq = truncate_leq(p, n - 1);
    let iota = geq.slots().iter().map(|(&a, s)| ((a, a), BlockMap::identity(j, s))).collect();
    let pi = leq.slots().iter().map(|(&a, s)| ((a, a), BlockMap::identity(j, s))).collect();
    // δ_ab = q_{a, b+1} from slot a of P_{<=n-1} to slot b of P_{>=n}[1].
    let delta = p
        .q_blocks()
        .iter()
        .filter(|((a, k), _)| *a < n && *k >= n)
        .map(|(&(a, k), b)| ((a, k - 1), b.clone()))
        .collect();
    let geq1 = shift(&geq, 1);
    Truncation {
        n,
        iota: TwistedMorphism::from_parts(0, geq.clone(), p.clone(), iota),
        pi: TwistedMorphism::from_parts(0, p.clone(), leq.clone(), pi),
        delta: TwistedMorphism::from_parts(0, leq.clone(), geq1, delta),
        geq,
        leq,
    }
}

/// Whether `ι_{P'} f^{>=n} = f ι_P` and `f^{<=n-1} π_P = π_{P'} f` hold for a
/// twisted morphism `f: P -> P'`.
pub fn naturality_squares_commute(j: &NegDgCategory, f: &TwistedMorphism, n: i64) -> Result<bool, TwistedError> {
    let (t, tp) = (truncation(j, &f.source, n), truncation(j, &f.target, n));
    let agree = |x: TwistedMorphism, y: TwistedMorphism| x.add(j, &y.neg()).is_zero();
    let iota_square =
        agree(TwistedMorphism::compose(j, &tp.iota, &restrict_geq(f, n))?, TwistedMorphism::compose(j, f, &t.iota)?);
    let pi_square =
        agree(TwistedMorphism::compose(j, &restrict_leq(f, n - 1), &t.pi)?, TwistedMorphism::compose(j, &tp.pi, f)?);
    Ok(iota_square && pi_square)
}

/// A triangle `A -u-> B -v-> C -w-> A[1]` of twisted morphisms.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub a: TwistedComplex,
    pub b: TwistedComplex,
    pub c: TwistedComplex,
    pub u: TwistedMorphism,
    pub v: TwistedMorphism,
    pub w: TwistedMorphism,
}

impl Triangle {
    /// Whether the three maps are composable twisted morphisms with the right ends.
    pub fn is_well_formed(&self, j: &NegDgCategory) -> bool {
        self.u.source == self.a
            && self.u.target == self.b
            && self.v.source == self.b
            && self.v.target == self.c
            && self.w.source == self.c
            && self.w.target == shift(&self.a, 1)
            && [&self.u, &self.v, &self.w].iter().all(|m| m.is_twisted(j))
    }
}

/// `P -f-> P' -> Cone(f) -> P[1]`.
pub fn cone_triangle(j: &NegDgCategory, f: &TwistedMorphism) -> Result<Triangle, TwistedError> {
    let c = cone(j, f)?;
    Ok(Triangle { a: f.source.clone(), b: f.target.clone(), c: c.cone, u: f.clone(), v: c.inclusion, w: c.projection })
}

/// `P_{>=n} -ι-> P -π-> P_{<=n-1} -δ-> P_{>=n}[1]`.
pub fn truncation_triangle(j: &NegDgCategory, p: &TwistedComplex, n: i64) -> Triangle {
    let t = truncation(j, p, n);
    Triangle { a: t.geq, b: p.clone(), c: t.leq, u: t.iota, v: t.pi, w: t.delta }
}

/// `P_{>=m} -> P^m[-m] -> P_{>=m+1}[1] -> P_{>=m}[1]`: the truncation
/// triangle of `P_{>=m}` at `m + 1`, rotated once.
pub fn geq_triangle(j: &NegDgCategory, p: &TwistedComplex, m: i64) -> Triangle {
    let q = truncate_geq(p, m);
    let t = truncation(j, &q, m + 1);
    Triangle { a: q, b: t.leq, c: shift(&t.geq, 1), u: t.pi, v: t.delta, w: shift_morphism(&t.iota, 1).neg() }
}

/// `P_{<=m} -> P^{m+1}[-m] -> P_{<=m+1}[1] -> P_{<=m}[1]`: the truncation
/// triangle of `P_{<=m+1}` at `m + 1`, rotated twice.
pub fn leq_triangle(j: &NegDgCategory, p: &TwistedComplex, m: i64) -> Triangle {
    let q = truncate_leq(p, m + 1);
    let t = truncation(j, &q, m + 1);
    Triangle {
        a: t.leq,
        b: shift(&t.geq, 1),
        c: shift(&q, 1),
        u: t.delta,
        v: shift_morphism(&t.iota, 1).neg(),
        w: shift_morphism(&t.pi, 1).neg(),
    }
}
