//! Twisted complexes over a negative dg-category and their morphisms.
//!
//! Conventions (all checked at runtime by the property suites):
//! * `q_ij` has degree `i - j + 1` and vanishes unless `j > i`;
//! * Maurer-Cartan reads `(-1)^j d q_ij + Σ_m q_mj q_im = 0`;
//! * for `f` of degree `l`,
//!   `(df)_ab = (-1)^b d f_ab + Σ_c q'_cb f_ac - (-1)^l Σ_c f_cb q_ac`;
//! * composition of morphisms carries no sign.
//!
//! These are the formulas obtained by realizing a twisted complex as the
//! total complex with internal differential `(-1)^i d` on slot `i`.

mod ops;
mod totalize;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::dgcore::{DgError, HomElement, NegDgCategory, ObjId, ValidationReport, ViolationKind};
use crate::exactlinalg::Int;

pub use ops::{
    cone, cone_triangle, geq_triangle, leq_triangle, naturality_squares_commute, restrict_geq, restrict_leq, shift,
    shift_morphism, truncate_geq, truncate_leq, truncation, truncation_triangle, ConeData, Triangle, Truncation,
};
pub use totalize::{totalize, totalize_morphism};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistedError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a twisted morphism: {0}")]
    NotATwistedMorphism(String),
    #[error("totalization is not a complex: {0}")]
    SignInconsistency(String),
    #[error("invalid twisted complex: {0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Category(#[from] DgError),
}

pub(crate) fn sign(k: i64) -> Int {
    if k.rem_euclid(2) == 0 {
        Int::from(1)
    } else {
        Int::from(-1)
    }
}

/// A map between formal direct sums of objects with all components of one
/// degree. `entries[t * source.len() + s]` holds the coordinates of the
/// component from `source[s]` to `target[t]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockMap {
    pub degree: i64,
    pub source: Vec<ObjId>,
    pub target: Vec<ObjId>,
    pub entries: Vec<Vec<Int>>,
}

impl BlockMap {
    pub fn zero(j: &NegDgCategory, degree: i64, source: &[ObjId], target: &[ObjId]) -> Self {
        let mut entries = Vec::with_capacity(source.len() * target.len());
        for &t in target {
            for &s in source {
                entries.push(vec![Int::zero(); j.rank(s, t, degree)]);
            }
        }
        BlockMap { degree, source: source.to_vec(), target: target.to_vec(), entries }
    }

    pub fn identity(j: &NegDgCategory, slot: &[ObjId]) -> Self {
        let mut m = Self::zero(j, 0, slot, slot);
        let n = slot.len();
        for (k, &x) in slot.iter().enumerate() {
            m.entries[k * n + k] = j.identity(x).coords;
        }
        m
    }

    pub fn from_element(e: &HomElement) -> Self {
        BlockMap { degree: e.degree, source: vec![e.source], target: vec![e.target], entries: vec![e.coords.clone()] }
    }

    /// Checks that every entry has the rank of its hom module.
    pub fn check_shape(&self, j: &NegDgCategory) -> Result<(), TwistedError> {
        if self.entries.len() != self.source.len() * self.target.len() {
            return Err(TwistedError::ShapeMismatch(format!(
                "{} entries for a {}x{} block",
                self.entries.len(),
                self.target.len(),
                self.source.len()
            )));
        }
        for (t, &y) in self.target.iter().enumerate() {
            for (s, &x) in self.source.iter().enumerate() {
                let want = j.rank(x, y, self.degree);
                let got = self.entries[t * self.source.len() + s].len();
                if got != want {
                    return Err(TwistedError::ShapeMismatch(format!(
                        "component {} -> {} of degree {} has {got} coordinates, expected {want}",
                        j.name(x),
                        j.name(y),
                        self.degree
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn entry(&self, t: usize, s: usize) -> HomElement {
        HomElement {
            source: self.source[s],
            target: self.target[t],
            degree: self.degree,
            coords: self.entries[t * self.source.len() + s].clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.iter().all(Zero::is_zero))
    }

    pub fn scale(&self, k: &Int) -> BlockMap {
        let entries = self.entries.iter().map(|e| e.iter().map(|c| c * k).collect()).collect();
        BlockMap { entries, ..self.clone() }
    }

    pub fn neg(&self) -> BlockMap {
        self.scale(&Int::from(-1))
    }

    pub fn add_assign(&mut self, other: &BlockMap) {
        assert_eq!(
            (self.degree, &self.source, &self.target),
            (other.degree, &other.source, &other.target),
            "adding block maps of different shapes"
        );
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    /// `g ∘ f`.
    pub fn compose(j: &NegDgCategory, g: &BlockMap, f: &BlockMap) -> BlockMap {
        assert_eq!(g.source, f.target, "composing block maps through different sums");
        let mut out = Self::zero(j, g.degree + f.degree, &f.source, &g.target);
        if g.degree + f.degree > 0 {
            return out;
        }
        let (ns, nm) = (f.source.len(), f.target.len());
        for t in 0..g.target.len() {
            for s in 0..ns {
                let mut acc = j.zero(f.source[s], g.target[t], out.degree);
                for m in 0..nm {
                    let ge = &g.entries[t * nm + m];
                    let fe = &f.entries[m * ns + s];
                    if ge.iter().all(Zero::is_zero) || fe.iter().all(Zero::is_zero) {
                        continue;
                    }
                    let c = j.compose_unchecked(&g.entry(t, m), &f.entry(m, s));
                    acc.add_assign(&c);
                }
                out.entries[t * ns + s] = acc.coords;
            }
        }
        out
    }

    /// Entrywise differential of `J`.
    pub fn differential(j: &NegDgCategory, f: &BlockMap) -> BlockMap {
        let mut out = Self::zero(j, f.degree + 1, &f.source, &f.target);
        let ns = f.source.len();
        for t in 0..f.target.len() {
            for s in 0..ns {
                if out.entries[t * ns + s].is_empty() {
                    continue;
                }
                out.entries[t * ns + s] = j.differential(&f.entry(t, s)).coords;
            }
        }
        out
    }

    /// Assembles a block map between concatenated sums from sub-blocks
    /// `(target part, source part, block)`; unspecified parts are zero.
    pub fn assemble(
        j: &NegDgCategory,
        degree: i64,
        source_parts: &[&[ObjId]],
        target_parts: &[&[ObjId]],
        blocks: &[(usize, usize, &BlockMap)],
    ) -> BlockMap {
        let source: Vec<ObjId> = source_parts.concat();
        let target: Vec<ObjId> = target_parts.concat();
        let mut out = Self::zero(j, degree, &source, &target);
        let soff: Vec<usize> = source_parts
            .iter()
            .scan(0, |o, p| {
                let r = *o;
                *o += p.len();
                Some(r)
            })
            .collect();
        let toff: Vec<usize> = target_parts
            .iter()
            .scan(0, |o, p| {
                let r = *o;
                *o += p.len();
                Some(r)
            })
            .collect();
        let ns = source.len();
        for &(tp, sp, b) in blocks {
            assert_eq!(b.degree, degree, "sub-block degree mismatch");
            assert_eq!(b.source, source_parts[sp], "sub-block source mismatch");
            assert_eq!(b.target, target_parts[tp], "sub-block target mismatch");
            let bs = b.source.len();
            for t in 0..b.target.len() {
                for s in 0..bs {
                    out.entries[(toff[tp] + t) * ns + soff[sp] + s] = b.entries[t * bs + s].clone();
                }
            }
        }
        out
    }
}

/// A twisted complex `{(P^i), q_ij}`; slots hold formal direct sums of
/// objects. Empty slots and zero `q` blocks are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistedComplex {
    slots: BTreeMap<i64, Vec<ObjId>>,
    q: BTreeMap<(i64, i64), BlockMap>,
}

impl TwistedComplex {
    pub fn new(
        j: &NegDgCategory,
        slots: BTreeMap<i64, Vec<ObjId>>,
        q: BTreeMap<(i64, i64), BlockMap>,
    ) -> Result<Self, TwistedError> {
        let slots: BTreeMap<i64, Vec<ObjId>> = slots.into_iter().filter(|(_, s)| !s.is_empty()).collect();
        for s in slots.values() {
            if let Some(&x) = s.iter().find(|&&x| x >= j.object_count()) {
                return Err(TwistedError::ShapeMismatch(format!("unknown object id {x}")));
            }
        }
        let empty: Vec<ObjId> = Vec::new();
        let mut kept = BTreeMap::new();
        for ((i, k), b) in q {
            let si = slots.get(&i).unwrap_or(&empty);
            let sk = slots.get(&k).unwrap_or(&empty);
            if b.source != *si || b.target != *sk {
                return Err(TwistedError::ShapeMismatch(format!("q_({i},{k}) does not match the slots")));
            }
            b.check_shape(j)?;
            if !b.is_zero() {
                kept.insert((i, k), b);
            }
        }
        Ok(TwistedComplex { slots, q: kept })
    }

    pub(crate) fn from_parts(slots: BTreeMap<i64, Vec<ObjId>>, q: BTreeMap<(i64, i64), BlockMap>) -> Self {
        let slots = slots.into_iter().filter(|(_, s)| !s.is_empty()).collect();
        let q = q.into_iter().filter(|(_, b)| !b.is_zero()).collect();
        TwistedComplex { slots, q }
    }

    /// An object of `J` placed in a single slot.
    pub fn single(x: ObjId, slot: i64) -> Self {
        TwistedComplex { slots: BTreeMap::from([(slot, vec![x])]), q: BTreeMap::new() }
    }

    /// A formal sum of objects placed in a single slot.
    pub fn concentrated(objects: Vec<ObjId>, slot: i64) -> Self {
        Self::from_parts(BTreeMap::from([(slot, objects)]), BTreeMap::new())
    }

    pub fn zero() -> Self {
        TwistedComplex { slots: BTreeMap::new(), q: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn slots(&self) -> &BTreeMap<i64, Vec<ObjId>> {
        &self.slots
    }

    pub fn slot(&self, i: i64) -> &[ObjId] {
        self.slots.get(&i).map_or(&[], |s| s.as_slice())
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.slots.keys().copied()
    }

    pub fn min_slot(&self) -> Option<i64> {
        self.slots.keys().next().copied()
    }

    pub fn max_slot(&self) -> Option<i64> {
        self.slots.keys().next_back().copied()
    }

    pub fn q_blocks(&self) -> &BTreeMap<(i64, i64), BlockMap> {
        &self.q
    }

    pub fn q(&self, i: i64, k: i64) -> Option<&BlockMap> {
        self.q.get(&(i, k))
    }

    /// `q_ik`, materialized as a zero block when absent.
    pub fn q_or_zero(&self, j: &NegDgCategory, i: i64, k: i64) -> BlockMap {
        self.q.get(&(i, k)).cloned().unwrap_or_else(|| BlockMap::zero(j, i - k + 1, self.slot(i), self.slot(k)))
    }

    /// Slotwise direct sum.
    pub fn direct_sum(j: &NegDgCategory, a: &TwistedComplex, b: &TwistedComplex) -> TwistedComplex {
        let keys: std::collections::BTreeSet<i64> = a.support().chain(b.support()).collect();
        let slots: BTreeMap<i64, Vec<ObjId>> = keys.iter().map(|&i| (i, [a.slot(i), b.slot(i)].concat())).collect();
        let mut q = BTreeMap::new();
        for &i in &keys {
            for &k in keys.iter().filter(|&&k| k > i) {
                let (qa, qb) = (a.q_or_zero(j, i, k), b.q_or_zero(j, i, k));
                let blk = BlockMap::assemble(
                    j,
                    i - k + 1,
                    &[a.slot(i), b.slot(i)],
                    &[a.slot(k), b.slot(k)],
                    &[(0, 0, &qa), (1, 1, &qb)],
                );
                q.insert((i, k), blk);
            }
        }
        Self::from_parts(slots, q)
    }

    /// Number of nonempty slots.
    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }
}

impl fmt::Display for TwistedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.slots.iter().map(|(i, s)| format!("{i}:{s:?}")).collect();
        write!(f, "slots {{{}}}, {} q-blocks", parts.join(", "), self.q.len())
    }
}

/// Maurer-Cartan residual `(-1)^k d q_ik + Σ_m q_mk q_im` at `(i, k)`.
pub fn maurer_cartan_residual(j: &NegDgCategory, p: &TwistedComplex, i: i64, k: i64) -> BlockMap {
    let mut r = BlockMap::differential(j, &p.q_or_zero(j, i, k)).scale(&sign(k));
    for m in p.support().filter(|&m| m > i && m < k) {
        let (qm, qi) = (p.q(m, k), p.q(i, m));
        if let (Some(a), Some(b)) = (qm, qi) {
            r.add_assign(&BlockMap::compose(j, a, b));
        }
    }
    r
}

/// Reports degree and Maurer-Cartan failures with their residuals.
pub fn validate_twisted(j: &NegDgCategory, p: &TwistedComplex) -> ValidationReport {
    let mut rep = ValidationReport::default();
    for (&(i, k), b) in &p.q {
        if k <= i {
            rep.push(ViolationKind::Degree, format!("q_({i},{k}) is nonzero but {k} <= {i}"));
        }
        if b.degree != i - k + 1 {
            rep.push(ViolationKind::Degree, format!("q_({i},{k}) has degree {}, expected {}", b.degree, i - k + 1));
        }
        if b.source != p.slot(i) || b.target != p.slot(k) {
            rep.push(ViolationKind::Structure, format!("q_({i},{k}) does not match its slots"));
        }
    }
    if !rep.is_valid() {
        return rep;
    }
    let support: Vec<i64> = p.support().collect();
    for (a, &i) in support.iter().enumerate() {
        for &k in &support[a + 1..] {
            let r = maurer_cartan_residual(j, p, i, k);
            if !r.is_zero() {
                rep.push(
                    ViolationKind::MaurerCartan,
                    format!("at (i, j) = ({i}, {k}): residual {}", block_string(j, &r)),
                );
            }
        }
    }
    rep
}

pub(crate) fn block_string(j: &NegDgCategory, b: &BlockMap) -> String {
    let ns = b.source.len();
    let mut parts = Vec::new();
    for (t, &y) in b.target.iter().enumerate() {
        for (s, &x) in b.source.iter().enumerate() {
            let e = &b.entries[t * ns + s];
            if e.iter().any(|c| !c.is_zero()) {
                let cs: Vec<String> = e.iter().map(|c| c.to_string()).collect();
                parts.push(format!("{}->{}: [{}]", j.name(x), j.name(y), cs.join(", ")));
            }
        }
    }
    parts.join("; ")
}

/// A morphism of twisted complexes of pure degree `degree`; the component
/// `(a, b)` goes from slot `a` of the source to slot `b` of the target and
/// has degree `degree + a - b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedMorphism {
    pub degree: i64,
    pub source: TwistedComplex,
    pub target: TwistedComplex,
    components: BTreeMap<(i64, i64), BlockMap>,
}

impl TwistedMorphism {
    pub fn new(
        j: &NegDgCategory,
        degree: i64,
        source: TwistedComplex,
        target: TwistedComplex,
        components: BTreeMap<(i64, i64), BlockMap>,
    ) -> Result<Self, TwistedError> {
        let mut kept = BTreeMap::new();
        for ((a, b), blk) in components {
            if blk.is_zero() {
                continue;
            }
            if blk.source != source.slot(a) || blk.target != target.slot(b) {
                return Err(TwistedError::ShapeMismatch(format!("component ({a},{b}) does not match the slots")));
            }
            if blk.degree != degree + a - b {
                return Err(TwistedError::ShapeMismatch(format!(
                    "component ({a},{b}) has degree {}, expected {}",
                    blk.degree,
                    degree + a - b
                )));
            }
            blk.check_shape(j)?;
            kept.insert((a, b), blk);
        }
        Ok(TwistedMorphism { degree, source, target, components: kept })
    }

    pub(crate) fn from_parts(
        degree: i64,
        source: TwistedComplex,
        target: TwistedComplex,
        components: BTreeMap<(i64, i64), BlockMap>,
    ) -> Self {
        let components = components.into_iter().filter(|(_, b)| !b.is_zero()).collect();
        TwistedMorphism { degree, source, target, components }
    }

    pub fn identity(j: &NegDgCategory, p: &TwistedComplex) -> Self {
        let comps = p.slots.iter().map(|(&a, s)| ((a, a), BlockMap::identity(j, s))).collect();
        Self::from_parts(0, p.clone(), p.clone(), comps)
    }

    pub fn zero(degree: i64, source: &TwistedComplex, target: &TwistedComplex) -> Self {
        Self::from_parts(degree, source.clone(), target.clone(), BTreeMap::new())
    }

    pub fn components(&self) -> &BTreeMap<(i64, i64), BlockMap> {
        &self.components
    }

    pub fn component(&self, a: i64, b: i64) -> Option<&BlockMap> {
        self.components.get(&(a, b))
    }

    pub fn component_or_zero(&self, j: &NegDgCategory, a: i64, b: i64) -> BlockMap {
        self.components
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| BlockMap::zero(j, self.degree + a - b, self.source.slot(a), self.target.slot(b)))
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn neg(&self) -> Self {
        let comps = self.components.iter().map(|(k, b)| (*k, b.neg())).collect();
        Self::from_parts(self.degree, self.source.clone(), self.target.clone(), comps)
    }

    pub fn scale(&self, k: &Int) -> Self {
        let comps = self.components.iter().map(|(key, b)| (*key, b.scale(k))).collect();
        Self::from_parts(self.degree, self.source.clone(), self.target.clone(), comps)
    }

    pub fn add(&self, j: &NegDgCategory, other: &TwistedMorphism) -> Self {
        assert_eq!(self.degree, other.degree, "adding morphisms of different degrees");
        let mut comps = self.components.clone();
        for (&(a, b), blk) in &other.components {
            comps
                .entry((a, b))
                .or_insert_with(|| BlockMap::zero(j, blk.degree, &blk.source, &blk.target))
                .add_assign(blk);
        }
        Self::from_parts(self.degree, self.source.clone(), self.target.clone(), comps)
    }

    /// `g ∘ f` with `(gf)_ab = Σ_c g_cb f_ac`.
    pub fn compose(j: &NegDgCategory, g: &TwistedMorphism, f: &TwistedMorphism) -> Result<Self, TwistedError> {
        if g.source != f.target {
            return Err(TwistedError::ShapeMismatch("composing morphisms through different complexes".into()));
        }
        let mut comps: BTreeMap<(i64, i64), BlockMap> = BTreeMap::new();
        for (&(a, c), fb) in &f.components {
            for (&(c2, b), gb) in g.components.range((c, i64::MIN)..=(c, i64::MAX)) {
                debug_assert_eq!(c, c2);
                let t = BlockMap::compose(j, gb, fb);
                match comps.get_mut(&(a, b)) {
                    Some(acc) => acc.add_assign(&t),
                    None => {
                        comps.insert((a, b), t);
                    }
                }
            }
        }
        Ok(Self::from_parts(g.degree + f.degree, f.source.clone(), g.target.clone(), comps))
    }

    /// Degree 0 and killed by the morphism differential.
    pub fn is_twisted(&self, j: &NegDgCategory) -> bool {
        self.degree == 0 && morphism_differential(j, self).is_zero()
    }
}

/// The differential of the dg-category of twisted complexes.
pub fn morphism_differential(j: &NegDgCategory, f: &TwistedMorphism) -> TwistedMorphism {
    let l = f.degree;
    let (p, pp) = (&f.source, &f.target);
    let mut comps = BTreeMap::new();
    for a in p.support() {
        for b in pp.support() {
            let deg = l + 1 + a - b;
            if deg > 0 {
                continue;
            }
            let mut acc = BlockMap::zero(j, deg, p.slot(a), pp.slot(b));
            if let Some(fab) = f.component(a, b) {
                acc.add_assign(&BlockMap::differential(j, fab).scale(&sign(b)));
            }
            for c in pp.support() {
                if let (Some(q), Some(fac)) = (pp.q(c, b), f.component(a, c)) {
                    acc.add_assign(&BlockMap::compose(j, q, fac));
                }
            }
            let s = sign(l + 1);
            for c in p.support() {
                if let (Some(fcb), Some(q)) = (f.component(c, b), p.q(a, c)) {
                    acc.add_assign(&BlockMap::compose(j, fcb, q).scale(&s));
                }
            }
            comps.insert((a, b), acc);
        }
    }
    TwistedMorphism::from_parts(l + 1, p.clone(), pp.clone(), comps)
}

#[cfg(test)]
mod tests;
