//! Weight homology of simple normal crossing configurations from their
//! combinatorics, and the blow-up formulas built on it.
//!
//! Components are numbered `0..n`; a stratum is a strictly increasing tuple
//! of component indices together with its number of connected components.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::Rng;
use thiserror::Error;

use crate::dgcore::{NegDgCategory, ObjId};
use crate::exactlinalg::{kernel_basis, Coefficient, Complex, FgAbGroup, Int, IntMatrix, Subquotient, SubquotientMap};
use crate::samples::additive_block;
use crate::twisted::TwistedComplex;
use crate::weighthom::{matrix_functor, AdditiveFunctor, WeightError, WeightHomologyResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SncError {
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("inconsistent incidence: {0}")]
    InconsistentIncidence(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

pub type Stratum = Vec<usize>;

/// Strata with component counts and, optionally, the component maps
/// `E_T -> E_F` for codimension-one faces `F` of `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SncConfiguration {
    n: usize,
    strata: BTreeMap<Stratum, usize>,
    /// `incidence[(T, F)][k]` is the component of `E_F` containing component `k` of `E_T`.
    incidence: BTreeMap<(Stratum, Stratum), Vec<usize>>,
}

fn face(t: &[usize], nu: usize) -> Stratum {
    t.iter().enumerate().filter(|&(i, _)| i != nu).map(|(_, &x)| x).collect()
}

impl SncConfiguration {
    /// Validates the strata and fills in incidence maps into connected faces.
    /// Maps into a face with several components must be supplied.
    pub fn new(
        n: usize,
        strata: BTreeMap<Stratum, usize>,
        incidence: BTreeMap<(Stratum, Stratum), Vec<usize>>,
    ) -> Result<Self, SncError> {
        for (t, &c) in &strata {
            if t.is_empty() || t.len() > n {
                return Err(SncError::Invalid(format!("stratum {t:?} has length outside 1..={n}")));
            }
            if !t.windows(2).all(|w| w[0] < w[1]) || t.iter().any(|&i| i >= n) {
                return Err(SncError::Invalid(format!("stratum {t:?} is not an increasing tuple in 0..{n}")));
            }
            if c == 0 {
                return Err(SncError::Invalid(format!("stratum {t:?} is present with c = 0")));
            }
            if t.len() > 1 {
                for nu in 0..t.len() {
                    let f = face(t, nu);
                    if !strata.contains_key(&f) {
                        return Err(SncError::Invalid(format!("stratum {t:?} is present but its face {f:?} is not")));
                    }
                }
            }
        }
        let mut full = BTreeMap::new();
        for ((t, f), m) in &incidence {
            let (Some(&ct), Some(&cf)) = (strata.get(t), strata.get(f)) else {
                return Err(SncError::InconsistentIncidence(format!("map {t:?} -> {f:?} between absent strata")));
            };
            if f.len() + 1 != t.len() || !f.iter().all(|x| t.contains(x)) {
                return Err(SncError::InconsistentIncidence(format!("{f:?} is not a face of {t:?}")));
            }
            if m.len() != ct || m.iter().any(|&k| k >= cf) {
                return Err(SncError::InconsistentIncidence(format!(
                    "map {t:?} -> {f:?} must send {ct} components into {cf}"
                )));
            }
            full.insert((t.clone(), f.clone()), m.clone());
        }
        for (t, &ct) in &strata {
            if t.len() < 2 {
                continue;
            }
            for nu in 0..t.len() {
                let f = face(t, nu);
                if full.contains_key(&(t.clone(), f.clone())) {
                    continue;
                }
                if strata[&f] != 1 {
                    return Err(SncError::InconsistentIncidence(format!(
                        "no component map {t:?} -> {f:?} although {f:?} has {} components",
                        strata[&f]
                    )));
                }
                full.insert((t.clone(), f), vec![0; ct]);
            }
        }
        let cfg = SncConfiguration { n, strata, incidence: full };
        cfg.check_commuting_faces()?;
        Ok(cfg)
    }

    /// Builds from strata alone; every incidence map must be the unique map
    /// into a connected face.
    pub fn from_strata(n: usize, strata: BTreeMap<Stratum, usize>) -> Result<Self, SncError> {
        Self::new(n, strata, BTreeMap::new())
    }

    /// Component maps must commute on codimension-two faces.
    fn check_commuting_faces(&self) -> Result<(), SncError> {
        for (t, &ct) in &self.strata {
            if t.len() < 3 {
                continue;
            }
            for i in 0..t.len() {
                for j in i + 1..t.len() {
                    let (fi, fj) = (face(t, i), face(t, j));
                    let g = face(&fi, j - 1);
                    for k in 0..ct {
                        let via_i =
                            self.incidence[&(fi.clone(), g.clone())][self.incidence[&(t.clone(), fi.clone())][k]];
                        let via_j =
                            self.incidence[&(fj.clone(), g.clone())][self.incidence[&(t.clone(), fj.clone())][k]];
                        if via_i != via_j {
                            return Err(SncError::InconsistentIncidence(format!(
                                "component {k} of {t:?} reaches different components of {g:?}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn component_count(&self) -> usize {
        self.n
    }

    pub fn strata(&self) -> &BTreeMap<Stratum, usize> {
        &self.strata
    }

    pub fn incidence(&self) -> &BTreeMap<(Stratum, Stratum), Vec<usize>> {
        &self.incidence
    }

    /// Highest `a` with `E^{[a]}` nonempty, or `None` without strata.
    pub fn dimension(&self) -> Option<usize> {
        self.strata.keys().map(|t| t.len() - 1).max()
    }

    /// `c(E^{[a]})`: the total component count of the `(a+1)`-fold intersections.
    pub fn count(&self, a: usize) -> usize {
        self.strata.iter().filter(|(t, _)| t.len() == a + 1).map(|(_, &c)| c).sum()
    }

    /// Strata of length `a + 1` with the offset of their first component.
    fn level(&self, a: usize) -> Vec<(&Stratum, usize, usize)> {
        let mut off = 0;
        let mut out = Vec::new();
        for (t, &c) in self.strata.iter().filter(|(t, _)| t.len() == a + 1) {
            out.push((t, c, off));
            off += c;
        }
        out
    }

    /// `∂_a: Z^{c(E^{[a]})} -> Z^{c(E^{[a-1]})}`, the alternating sum of the
    /// component maps of the faces.
    pub fn boundary(&self, a: usize) -> IntMatrix {
        assert!(a >= 1, "the boundary starts in degree 1");
        let lower: BTreeMap<&Stratum, usize> = self.level(a - 1).into_iter().map(|(t, _, o)| (t, o)).collect();
        let mut m = IntMatrix::zeros(self.count(a - 1), self.count(a));
        for (t, c, off) in self.level(a) {
            for nu in 0..=a {
                let f = face(t, nu);
                let map = &self.incidence[&(t.clone(), f.clone())];
                let s = if nu % 2 == 0 { 1 } else { -1 };
                for (k, &target) in map.iter().enumerate().take(c) {
                    let (r, col) = (lower[&f] + target, off + k);
                    let v = m.get(r, col) + Int::from(s);
                    m.set(r, col, v);
                }
            }
        }
        m
    }
}

/// The complex `Γ(E)`: `A^{c(E^{[a]})}` in homological degree `a` (stored
/// in cohomological degree `-a`).
pub fn build_gamma_complex(e: &SncConfiguration, coeff: Coefficient) -> Complex {
    let Some(top) = e.dimension() else {
        return Complex::free(coeff, 0, &[], Vec::new()).expect("empty complex");
    };
    let ranks: Vec<usize> = (0..=top).map(|a| e.count(a)).collect();
    let boundaries = (1..=top).map(|a| e.boundary(a).over(coeff)).collect();
    Complex::from_homological(coeff, 0, &ranks, boundaries).expect("faces commute, so the boundary squares to zero")
}

/// `H_a(Γ(E))` for every `a` from 0 to the dimension, keyed by `a`.
pub fn snc_weight_homology(e: &SncConfiguration, coeff: Coefficient) -> WeightHomologyResult {
    let c = build_gamma_complex(e, coeff);
    let mut out = WeightHomologyResult::default();
    for a in 0..=e.dimension().map_or(0, |d| d as i64) {
        out.groups.insert(a, c.homology_homological(a));
    }
    out
}

/// The same complex as a twisted complex over the additive category of the
/// strata (one object of rank `c(T)` per stratum `T`, slot `-a` holding the
/// strata of length `a + 1`), together with the functor `Γ_A` sending a
/// stratum to `A^{c(T)}`. Evaluating in degree
/// `-a` recovers `H_a(Γ(E))`.
pub fn as_twisted(
    e: &SncConfiguration,
    coeff: Coefficient,
) -> Result<(NegDgCategory, TwistedComplex, AdditiveFunctor), SncError> {
    let counts: Vec<usize> = e.strata.values().copied().collect();
    let index: BTreeMap<&Stratum, ObjId> = e.strata.keys().enumerate().map(|(i, t)| (t, i)).collect();
    let j = NegDgCategory::additive_free_modules(&counts);
    let top = e.dimension().unwrap_or(0);
    let mut slots = BTreeMap::new();
    for a in 0..=top {
        let objs: Vec<ObjId> = e.level(a).into_iter().map(|(t, _, _)| index[t]).collect();
        slots.insert(-(a as i64), objs);
    }
    let mut q = BTreeMap::new();
    for a in 1..=top {
        let (src, tgt) = (&slots[&-(a as i64)], &slots[&(1 - a as i64)]);
        q.insert((-(a as i64), 1 - a as i64), additive_block(&counts, src, tgt, &e.boundary(a)));
    }
    let p = TwistedComplex::new(&j, slots, q).map_err(|err| SncError::Weight(WeightError::Twisted(err)))?;
    let gamma = matrix_functor(&counts, coeff);
    Ok((j, p, gamma))
}

/// A random configuration on `n` components whose strata form a simplicial
/// complex; component counts grow along inclusions and each component maps
/// to the component of the same index in a face, clamped to its count.
pub fn random_configuration<R: Rng>(rng: &mut R, n: usize, all_connected: bool) -> SncConfiguration {
    let mut strata: BTreeMap<Stratum, usize> = BTreeMap::new();
    for i in 0..n {
        strata.insert(vec![i], if all_connected { 1 } else { rng.gen_range(1..=2) });
    }
    for len in 2..=n.min(4) {
        let prev: Vec<Stratum> = strata.keys().filter(|t| t.len() == len - 1).cloned().collect();
        for t in prev {
            for x in t.last().unwrap() + 1..n {
                let mut s = t.clone();
                s.push(x);
                let faces: Vec<Stratum> = (0..len).map(|nu| face(&s, nu)).collect();
                if faces.iter().all(|f| strata.contains_key(f)) && rng.gen_bool(0.5) {
                    let c = if all_connected {
                        1
                    } else {
                        faces.iter().map(|f| strata[f]).max().unwrap() + rng.gen_range(0..=1)
                    };
                    strata.insert(s, c.min(3));
                }
            }
        }
    }
    let mut incidence = BTreeMap::new();
    for (t, &c) in &strata {
        if t.len() < 2 {
            continue;
        }
        for nu in 0..t.len() {
            let f = face(t, nu);
            let cf = strata[&f];
            incidence.insert((t.clone(), f), (0..c).map(|k| k.min(cf - 1)).collect());
        }
    }
    SncConfiguration::new(n, strata, incidence).expect("counts grow along inclusions, so the clamped maps commute")
}

/// A blow-up along `Z` with exceptional configuration `E`; `to_z[k]` and
/// `to_xz[k]` are the components of `Z` and of `X_Z` receiving the `k`-th
/// component of `E^{[0]}` (in the order of the singleton strata).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupData {
    pub e: SncConfiguration,
    pub c_z: usize,
    pub c_xz: usize,
    pub to_z: Vec<usize>,
    pub to_xz: Vec<usize>,
}

impl BlowupData {
    pub fn new(
        e: SncConfiguration,
        c_z: usize,
        c_xz: usize,
        to_z: Vec<usize>,
        to_xz: Vec<usize>,
    ) -> Result<Self, SncError> {
        let c0 = e.count(0);
        if c_z == 0 || c_xz == 0 {
            return Err(SncError::Invalid("c(Z) and c(X_Z) must be positive".into()));
        }
        if to_z.len() != c0 || to_xz.len() != c0 {
            return Err(SncError::InconsistentIncidence(format!(
                "incidence maps must be total on the {c0} components of E^[0]"
            )));
        }
        if to_z.iter().any(|&k| k >= c_z) || to_xz.iter().any(|&k| k >= c_xz) {
            return Err(SncError::InconsistentIncidence("incidence map points past the last component".into()));
        }
        Ok(BlowupData { e, c_z, c_xz, to_z, to_xz })
    }

    /// `Z^{c(E^{[0]})} -> Z^{c(Z)} ⊕ Z^{c(X_Z)}` assembled from the incidence maps.
    pub fn restriction_matrix(&self) -> IntMatrix {
        let c0 = self.e.count(0);
        let mut m = IntMatrix::zeros(self.c_z + self.c_xz, c0);
        for k in 0..c0 {
            m.set(self.to_z[k], k, Int::from(1));
            m.set(self.c_z + self.to_xz[k], k, Int::from(1));
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupResult {
    /// Values in the degrees covered by the formulas.
    pub groups: BTreeMap<i64, FgAbGroup>,
    /// Degrees of the requested window not covered by the formulas.
    pub out_of_range: Vec<i64>,
    /// Generators of the degree-1 kernel, as columns.
    pub wh1_kernel: IntMatrix,
}

/// `WH_1 = ker(Λ^{c(E)} -> Λ^{c(Z)} ⊕ Λ^{c(X_Z)})` and `WH_{a+1} = H_a(Γ_E(Λ))`
/// for `a >= 1`; other degrees of `window` are reported as out of range.
pub fn blowup_weight_homology(d: &BlowupData, coeff: Coefficient, window: RangeInclusive<i64>) -> BlowupResult {
    let m = d.restriction_matrix().over(coeff);
    let map = SubquotientMap::new(Subquotient::free(m.cols(), coeff), Subquotient::free(m.rows(), coeff), m.clone())
        .expect("shapes match");
    let gamma = build_gamma_complex(&d.e, coeff);
    let top = d.e.dimension().unwrap_or(0) as i64;
    let mut groups = BTreeMap::new();
    let mut out_of_range = Vec::new();
    for k in window {
        if k == 1 {
            groups.insert(1, map.kernel_group());
        } else if k >= 2 && k <= top + 1 {
            groups.insert(k, gamma.homology_homological(k - 1));
        } else if k >= 2 {
            groups.insert(k, FgAbGroup::zero());
        } else {
            out_of_range.push(k);
        }
    }
    BlowupResult { groups, out_of_range, wh1_kernel: kernel_basis(&m) }
}

#[cfg(test)]
mod tests;
