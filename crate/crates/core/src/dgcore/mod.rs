//! Finitely presented negative dg-categories.
//!
//! Hom complexes are free modules in each degree with explicit differential
//! matrices; composition is a table of structure constants on generators.
//! Composition is written `g ∘ f` (first `f`, then `g`).

mod chain;
mod validate;

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use thiserror::Error;

use crate::exactlinalg::{Int, IntMatrix};

pub use chain::{build_dgchain_instance, ChainCategory, ChainObject};
pub use validate::{validate_category, ValidationReport, Violation, ViolationKind};

pub type ObjId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgError {
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("malformed category data: {0}")]
    Malformed(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("category axioms fail: {0}")]
    Invalid(ValidationReport),
}

/// The graded hom module `hom(X, Y)` with its differential.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomComplex {
    ranks: BTreeMap<i64, usize>,
    differentials: BTreeMap<i64, IntMatrix>,
}

impl HomComplex {
    /// `ranks` maps degrees to ranks; `differentials[d]` maps degree `d` to `d + 1`.
    pub fn new(ranks: BTreeMap<i64, usize>, differentials: BTreeMap<i64, IntMatrix>) -> Result<Self, DgError> {
        let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        let rank = |d: i64| ranks.get(&d).copied().unwrap_or(0);
        for (&d, m) in &differentials {
            if m.rows() != rank(d + 1) || m.cols() != rank(d) {
                return Err(DgError::Malformed(format!(
                    "differential from degree {d} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    rank(d + 1),
                    rank(d)
                )));
            }
        }
        let differentials =
            differentials.into_iter().filter(|(_, m)| !m.is_zero()).map(|(d, m)| (d, m.lift())).collect();
        Ok(HomComplex { ranks, differentials })
    }

    /// Rank-`r` hom concentrated in degree 0 with zero differential.
    pub fn degree_zero(r: usize) -> Self {
        let mut ranks = BTreeMap::new();
        if r > 0 {
            ranks.insert(0, r);
        }
        HomComplex { ranks, differentials: BTreeMap::new() }
    }

    pub fn rank(&self, d: i64) -> usize {
        self.ranks.get(&d).copied().unwrap_or(0)
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    pub fn differential(&self, d: i64) -> IntMatrix {
        self.differentials.get(&d).cloned().unwrap_or_else(|| IntMatrix::zeros(self.rank(d + 1), self.rank(d)))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.ranks.keys().copied()
    }
}

/// Key of a composition table: `g ∈ hom^e(y, z)`, `f ∈ hom^d(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompositionKey {
    pub x: ObjId,
    pub y: ObjId,
    pub z: ObjId,
    pub e: i64,
    pub d: i64,
}

/// A finitely presented negative dg-category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegDgCategory {
    names: Vec<String>,
    homs: Vec<HomComplex>,
    /// Column `a * rank_f + b` holds the coordinates of `g_a ∘ f_b`.
    composition: HashMap<CompositionKey, IntMatrix>,
    identities: Vec<Vec<Int>>,
}

/// An element of `hom^degree(source, target)` in generator coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomElement {
    pub source: ObjId,
    pub target: ObjId,
    pub degree: i64,
    pub coords: Vec<Int>,
}

impl HomElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &Int) -> HomElement {
        HomElement { coords: self.coords.iter().map(|c| c * k).collect(), ..self.clone() }
    }

    pub fn neg(&self) -> HomElement {
        HomElement { coords: self.coords.iter().map(|c| -c).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &HomElement) -> HomElement {
        assert_eq!(
            (self.source, self.target, self.degree),
            (other.source, other.target, other.degree),
            "adding elements of different hom modules"
        );
        HomElement { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(), ..self.clone() }
    }

    pub fn add_assign(&mut self, other: &HomElement) {
        assert_eq!(self.coords.len(), other.coords.len(), "adding elements of different hom modules");
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += b;
        }
    }
}

impl NegDgCategory {
    /// Assembles a category after shape checks and full axiom validation.
    pub fn new(
        names: Vec<String>,
        homs: Vec<HomComplex>,
        composition: HashMap<CompositionKey, IntMatrix>,
        identities: Vec<Vec<Int>>,
    ) -> Result<Self, DgError> {
        let cat = Self::from_parts_unchecked(names, homs, composition, identities)?;
        let report = validate_category(&cat);
        if !report.is_valid() {
            return Err(DgError::Invalid(report));
        }
        Ok(cat)
    }

    /// Shape checks only; the axioms can then be inspected with [`validate_category`].
    pub fn from_parts_unchecked(
        names: Vec<String>,
        homs: Vec<HomComplex>,
        composition: HashMap<CompositionKey, IntMatrix>,
        identities: Vec<Vec<Int>>,
    ) -> Result<Self, DgError> {
        let n = names.len();
        if homs.len() != n * n {
            return Err(DgError::Malformed(format!("{} hom complexes for {n} objects", homs.len())));
        }
        if identities.len() != n {
            return Err(DgError::Malformed(format!("{} identities for {n} objects", identities.len())));
        }
        for (x, id) in identities.iter().enumerate() {
            if id.len() != homs[x * n + x].rank(0) {
                return Err(DgError::Malformed(format!("identity of {} has wrong length", names[x])));
            }
        }
        for (k, t) in &composition {
            if k.x >= n || k.y >= n || k.z >= n {
                return Err(DgError::Malformed("composition table refers to unknown object".into()));
            }
            let rg = homs[k.y * n + k.z].rank(k.e);
            let rf = homs[k.x * n + k.y].rank(k.d);
            let rt = homs[k.x * n + k.z].rank(k.e + k.d);
            if t.rows() != rt || t.cols() != rg * rf {
                return Err(DgError::Malformed(format!(
                    "composition table for {:?} is {}x{}, expected {}x{}",
                    k,
                    t.rows(),
                    t.cols(),
                    rt,
                    rg * rf
                )));
            }
        }
        let composition = composition.into_iter().filter(|(_, t)| !t.is_zero()).map(|(k, t)| (k, t.lift())).collect();
        Ok(NegDgCategory { names, homs, composition, identities })
    }

    /// The additive category of finite free abelian groups `Z^r`, seen as a
    /// dg-category concentrated in degree 0. Hom generators are matrix units
    /// `E_{ij}` in row-major order.
    pub fn additive_free_modules(ranks: &[usize]) -> Self {
        let n = ranks.len();
        let mut homs = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                homs.push(HomComplex::degree_zero(ranks[x] * ranks[y]));
            }
        }
        let mut composition = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let (rx, ry, rz) = (ranks[x], ranks[y], ranks[z]);
                    let (rg, rf) = (rz * ry, ry * rx);
                    if rg == 0 || rf == 0 || rz * rx == 0 {
                        continue;
                    }
                    let mut t = IntMatrix::zeros(rz * rx, rg * rf);
                    // E_{ij} (y -> z) after E_{kl} (x -> y) is E_{il} when j = k.
                    for i in 0..rz {
                        for j in 0..ry {
                            for l in 0..rx {
                                let a = i * ry + j;
                                let b = j * rx + l;
                                t.set(i * rx + l, a * rf + b, Int::from(1));
                            }
                        }
                    }
                    composition.insert(CompositionKey { x, y, z, e: 0, d: 0 }, t);
                }
            }
        }
        let identities = ranks
            .iter()
            .map(|&r| {
                let mut v = vec![Int::zero(); r * r];
                for i in 0..r {
                    v[i * r + i] = Int::from(1);
                }
                v
            })
            .collect();
        let names = (0..n).map(|i| format!("Z{}_{i}", ranks[i])).collect();
        NegDgCategory { names, homs, composition, identities }
    }

    pub fn object_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, x: ObjId) -> &str {
        &self.names[x]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn hom(&self, x: ObjId, y: ObjId) -> &HomComplex {
        &self.homs[x * self.names.len() + y]
    }

    pub fn rank(&self, x: ObjId, y: ObjId, d: i64) -> usize {
        self.hom(x, y).rank(d)
    }

    pub fn composition_table(&self, key: &CompositionKey) -> Option<&IntMatrix> {
        self.composition.get(key)
    }

    pub fn composition_keys(&self) -> impl Iterator<Item = &CompositionKey> {
        self.composition.keys()
    }

    pub fn zero(&self, x: ObjId, y: ObjId, d: i64) -> HomElement {
        HomElement { source: x, target: y, degree: d, coords: vec![Int::zero(); self.rank(x, y, d)] }
    }

    pub fn generator(&self, x: ObjId, y: ObjId, d: i64, k: usize) -> HomElement {
        let mut e = self.zero(x, y, d);
        e.coords[k] = Int::from(1);
        e
    }

    pub fn identity(&self, x: ObjId) -> HomElement {
        HomElement { source: x, target: x, degree: 0, coords: self.identities[x].clone() }
    }

    pub fn element(&self, x: ObjId, y: ObjId, d: i64, coords: Vec<Int>) -> Result<HomElement, DgError> {
        if coords.len() != self.rank(x, y, d) {
            return Err(DgError::Malformed(format!(
                "{} coordinates for hom^{d}({}, {}) of rank {}",
                coords.len(),
                self.name(x),
                self.name(y),
                self.rank(x, y, d)
            )));
        }
        Ok(HomElement { source: x, target: y, degree: d, coords })
    }

    /// `g ∘ f`; lands in degree `deg f + deg g` (zero when that is positive).
    pub fn compose(&self, g: &HomElement, f: &HomElement) -> Result<HomElement, DgError> {
        if f.target != g.source {
            return Err(DgError::ObjectMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.name(g.source),
                self.name(g.target),
                self.name(f.source),
                self.name(f.target)
            )));
        }
        Ok(self.compose_unchecked(g, f))
    }

    pub(crate) fn compose_unchecked(&self, g: &HomElement, f: &HomElement) -> HomElement {
        let degree = g.degree + f.degree;
        let mut out = self.zero(f.source, g.target, degree);
        if out.coords.is_empty() {
            return out;
        }
        let key = CompositionKey { x: f.source, y: f.target, z: g.target, e: g.degree, d: f.degree };
        let Some(t) = self.composition.get(&key) else { return out };
        let rf = f.coords.len();
        for (a, ga) in g.coords.iter().enumerate() {
            if ga.is_zero() {
                continue;
            }
            for (b, fb) in f.coords.iter().enumerate() {
                if fb.is_zero() {
                    continue;
                }
                let col = a * rf + b;
                let w = ga * fb;
                for (r, o) in out.coords.iter_mut().enumerate() {
                    let c = t.get(r, col);
                    if !c.is_zero() {
                        *o += c * &w;
                    }
                }
            }
        }
        out
    }

    /// `d f`, of degree `deg f + 1`.
    pub fn differential(&self, f: &HomElement) -> HomElement {
        let h = self.hom(f.source, f.target);
        let m = h.differential(f.degree);
        HomElement { source: f.source, target: f.target, degree: f.degree + 1, coords: m.mul_vec(&f.coords) }
    }
}
