//! Homological functors on twisted complexes computed from an additive
//! functor `Γ` on `H^0(J)` by the kernel/image formula: the value of `P` in
//! degree `n` is the cohomology at slot `n` of the complex `Γ(P^i)` with
//! differentials `Γ(q_{i,i+1})`.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use thiserror::Error;

use crate::dgcore::{ChainCategory, HomElement, NegDgCategory, ObjId, ValidationReport, ViolationKind};
use crate::exactlinalg::{
    check_long_exact, Coefficient, Complex, DegreeMaps, FgAbGroup, Int, IntMatrix, Lattice, LesReport, LinalgError,
    Subquotient, SubquotientMap,
};
use crate::twisted::{BlockMap, Triangle, TwistedComplex, TwistedError, TwistedMorphism};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("invalid functor: {0}")]
    FunctorInvalid(ValidationReport),
    #[error("not a twisted morphism: {0}")]
    NotATwistedMorphism(String),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An additive functor from `H^0(J)` to finitely generated abelian groups.
/// `Γ(X)` is a subquotient of some `Z^c`; hom generators of degree 0 act by
/// integer matrices on representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveFunctor {
    objects: Vec<Subquotient>,
    /// `images[x * n + y][k]` is `Γ` of generator `k` of `hom^0(x, y)`.
    images: Vec<Vec<IntMatrix>>,
}

impl AdditiveFunctor {
    /// Builds and validates a functor on `j`.
    pub fn new(j: &NegDgCategory, objects: Vec<Subquotient>, images: Vec<Vec<IntMatrix>>) -> Result<Self, WeightError> {
        let f = Self::from_parts(j, objects, images)?;
        let rep = f.validate(j);
        if !rep.is_valid() {
            return Err(WeightError::FunctorInvalid(rep));
        }
        Ok(f)
    }

    /// Shape checks only.
    pub fn from_parts(
        j: &NegDgCategory,
        objects: Vec<Subquotient>,
        images: Vec<Vec<IntMatrix>>,
    ) -> Result<Self, WeightError> {
        let n = j.object_count();
        let bad = |msg: String| {
            let mut rep = ValidationReport::default();
            rep.push(ViolationKind::Functor, msg);
            WeightError::FunctorInvalid(rep)
        };
        if objects.len() != n || images.len() != n * n {
            return Err(bad(format!(
                "{} object values and {} image lists for {n} objects",
                objects.len(),
                images.len()
            )));
        }
        for x in 0..n {
            for y in 0..n {
                let list = &images[x * n + y];
                if list.len() != j.rank(x, y, 0) {
                    return Err(bad(format!(
                        "{} images for the {} generators of hom^0({}, {})",
                        list.len(),
                        j.rank(x, y, 0),
                        j.name(x),
                        j.name(y)
                    )));
                }
                for m in list {
                    if m.rows() != objects[y].ambient() || m.cols() != objects[x].ambient() {
                        return Err(bad(format!(
                            "image of a generator {} -> {} is {}x{}, expected {}x{}",
                            j.name(x),
                            j.name(y),
                            m.rows(),
                            m.cols(),
                            objects[y].ambient(),
                            objects[x].ambient()
                        )));
                    }
                }
            }
        }
        let images = images.into_iter().map(|l| l.into_iter().map(|m| m.lift()).collect()).collect();
        Ok(AdditiveFunctor { objects, images })
    }

    /// Checks on generators that `Γ` is well defined, preserves identities
    /// and composition, and kills boundaries `d(hom^{-1})`.
    pub fn validate(&self, j: &NegDgCategory) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let n = j.object_count();
        for x in 0..n {
            for y in 0..n {
                for k in 0..j.rank(x, y, 0) {
                    if !self.map_of(x, y, self.images[x * n + y][k].clone()).is_well_defined() {
                        rep.push(
                            ViolationKind::Functor,
                            format!(
                                "image of generator {k} of hom^0({}, {}) is not well defined",
                                j.name(x),
                                j.name(y)
                            ),
                        );
                    }
                }
            }
        }
        if !rep.is_valid() {
            return rep;
        }
        for x in 0..n {
            let id = self.map_of(x, x, self.on_element(&j.identity(x)));
            let one = self.map_of(x, x, IntMatrix::identity(self.objects[x].ambient()));
            if !id.eq_mod(&one) {
                rep.push(ViolationKind::Functor, format!("Γ(id_{}) is not the identity", j.name(x)));
            }
            for y in 0..n {
                for k in 0..j.rank(x, y, -1) {
                    let b = j.differential(&j.generator(x, y, -1, k));
                    if !self.map_of(x, y, self.on_element(&b)).is_zero() {
                        rep.push(
                            ViolationKind::Functor,
                            format!("Γ does not kill d of generator {k} of hom^-1({}, {})", j.name(x), j.name(y)),
                        );
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for a in 0..j.rank(y, z, 0) {
                        let g = j.generator(y, z, 0, a);
                        for b in 0..j.rank(x, y, 0) {
                            let f = j.generator(x, y, 0, b);
                            let gf = self.map_of(x, z, self.on_element(&j.compose_unchecked(&g, &f)));
                            let prod = self.map_of(x, z, &self.on_element(&g) * &self.on_element(&f));
                            if !gf.eq_mod(&prod) {
                                rep.push(
                                    ViolationKind::Functor,
                                    format!(
                                        "Γ(g f) ≠ Γ(g) Γ(f) for generators {a} of hom^0({}, {}) and {b} of hom^0({}, {})",
                                        j.name(y),
                                        j.name(z),
                                        j.name(x),
                                        j.name(y)
                                    ),
                                );
                            }
                        }
                    }
                }
            }
        }
        rep
    }

    fn map_of(&self, x: ObjId, y: ObjId, m: IntMatrix) -> SubquotientMap {
        SubquotientMap::new(self.objects[x].clone(), self.objects[y].clone(), m).expect("shape checked")
    }

    pub fn object(&self, x: ObjId) -> &Subquotient {
        &self.objects[x]
    }

    pub fn objects(&self) -> &[Subquotient] {
        &self.objects
    }

    /// The generator images of `hom^0(x, y)`.
    pub fn images(&self, x: ObjId, y: ObjId) -> &[IntMatrix] {
        &self.images[x * self.objects.len() + y]
    }

    /// `Γ(Σ c_k g_k) = Σ c_k Γ(g_k)` for a degree-0 element.
    pub fn on_element(&self, e: &HomElement) -> IntMatrix {
        assert_eq!(e.degree, 0, "functor applied to an element of nonzero degree");
        let (r, c) = (self.objects[e.target].ambient(), self.objects[e.source].ambient());
        let mut out = IntMatrix::zeros(r, c);
        for (k, ck) in e.coords.iter().enumerate() {
            if num_traits::Zero::is_zero(ck) {
                continue;
            }
            out = &out + &self.images(e.source, e.target)[k].scale(ck);
        }
        out
    }

    /// `Γ` of a formal direct sum of objects.
    pub fn on_slot(&self, objs: &[ObjId]) -> Subquotient {
        Subquotient::direct_sum_all(objs.iter().map(|&x| &self.objects[x]))
    }

    /// `Γ` of a degree-0 block map, as one matrix on the direct sums.
    pub fn on_block(&self, b: &BlockMap) -> IntMatrix {
        let rows: usize = b.target.iter().map(|&y| self.objects[y].ambient()).sum();
        let cols: usize = b.source.iter().map(|&x| self.objects[x].ambient()).sum();
        let mut out = IntMatrix::zeros(rows, cols);
        if b.degree != 0 {
            return out;
        }
        let mut r0 = 0;
        for (t, &y) in b.target.iter().enumerate() {
            let mut c0 = 0;
            for (s, &x) in b.source.iter().enumerate() {
                out.paste(r0, c0, &self.on_element(&b.entry(t, s)));
                c0 += self.objects[x].ambient();
            }
            r0 += self.objects[y].ambient();
        }
        out
    }
}

/// `Γ_A` with `Γ_A(X) = A^{c(X)}`; `images[x * n + y][k]` is the
/// `c(y) x c(x)` integer matrix of generator `k` of `hom^0(x, y)`.
pub fn gamma_a(
    j: &NegDgCategory,
    component_counts: &[usize],
    coeff: Coefficient,
    images: Vec<Vec<IntMatrix>>,
) -> Result<AdditiveFunctor, WeightError> {
    let objects = component_counts.iter().map(|&c| Subquotient::free(c, coeff)).collect();
    AdditiveFunctor::new(j, objects, images)
}

/// The tautological functor on `NegDgCategory::additive_free_modules(ranks)`
/// with values in free `A`-modules: `Z^r ↦ A^r`, matrix units to matrix units.
pub fn matrix_functor(ranks: &[usize], coeff: Coefficient) -> AdditiveFunctor {
    let n = ranks.len();
    let mut images = Vec::with_capacity(n * n);
    for &rx in ranks {
        for &ry in ranks {
            let mut list = Vec::with_capacity(rx * ry);
            for i in 0..ry {
                for l in 0..rx {
                    let mut m = IntMatrix::zeros(ry, rx);
                    m.set(i, l, Int::from(1));
                    list.push(m);
                }
            }
            images.push(list);
        }
    }
    let objects = ranks.iter().map(|&r| Subquotient::free(r, coeff)).collect();
    AdditiveFunctor { objects, images }
}

/// `H^0` on a category of chain complexes: `X ↦ ker d^0 / im d^{-1}` and a
/// chain map acts through its degree-0 block.
pub fn h0_functor(cc: &ChainCategory) -> AdditiveFunctor {
    let j = &cc.category;
    let n = j.object_count();
    let objects = cc
        .objects()
        .iter()
        .map(|o| {
            let r = o.rank_at(0);
            let cycles = Lattice::full(r).preimage(&o.d(0), &Lattice::zero(o.rank_at(1)));
            Subquotient::new(cycles, Lattice::column_span(&o.d(-1))).expect("boundaries are cycles")
        })
        .collect();
    let mut images = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let (r, c) = (cc.object(y).rank_at(0), cc.object(x).rank_at(0));
            images.push(
                (0..j.rank(x, y, 0))
                    .map(|k| cc.graded(&j.generator(x, y, 0, k)).remove(&0).unwrap_or_else(|| IntMatrix::zeros(r, c)))
                    .collect(),
            );
        }
    }
    AdditiveFunctor { objects, images }
}

/// The complex `Γ(P^i)` with differentials `Γ(q_{i,i+1})` on slots `lo..=hi`.
pub fn slot_complex(gamma: &AdditiveFunctor, p: &TwistedComplex, lo: i64, hi: i64) -> Result<Complex, WeightError> {
    if lo > hi {
        return Ok(Complex::new(0, Vec::new(), Vec::new())?);
    }
    let terms: Vec<Subquotient> = (lo..=hi).map(|i| gamma.on_slot(p.slot(i))).collect();
    let maps = (lo..hi)
        .map(|i| match p.q(i, i + 1) {
            Some(b) => gamma.on_block(b),
            None => IntMatrix::zeros(terms[(i + 1 - lo) as usize].ambient(), terms[(i - lo) as usize].ambient()),
        })
        .collect();
    Complex::new(lo, terms, maps).map_err(|e| {
        let mut rep = ValidationReport::default();
        rep.push(ViolationKind::Functor, format!("Γ applied to the slot differentials: {e}"));
        WeightError::FunctorInvalid(rep)
    })
}

/// The slot complex over the support of `p`.
pub fn full_slot_complex(gamma: &AdditiveFunctor, p: &TwistedComplex) -> Result<Complex, WeightError> {
    match (p.min_slot(), p.max_slot()) {
        (Some(lo), Some(hi)) => slot_complex(gamma, p, lo, hi),
        _ => slot_complex(gamma, p, 0, -1),
    }
}

/// The value in degree `n`, i.e. at slot 0 of `P[n]`:
/// `ker Γ(q_{n,n+1}) / im Γ(q_{n-1,n})`. Slots outside the support give 0.
pub fn evaluate(gamma: &AdditiveFunctor, p: &TwistedComplex, n: i64) -> Result<FgAbGroup, WeightError> {
    if p.slot(n).is_empty() {
        return Ok(FgAbGroup::zero());
    }
    Ok(slot_complex(gamma, p, n - 1, n + 1)?.homology(n))
}

/// Kernel and image representatives behind one value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub cycles: Vec<Vec<Int>>,
    pub boundaries: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightHomologyResult {
    pub groups: BTreeMap<i64, FgAbGroup>,
    pub witnesses: BTreeMap<i64, Witness>,
}

impl WeightHomologyResult {
    pub fn get(&self, n: i64) -> FgAbGroup {
        self.groups.get(&n).cloned().unwrap_or_else(FgAbGroup::zero)
    }
}

/// Values in every degree of `window`, optionally with witnesses.
pub fn weight_homology(
    gamma: &AdditiveFunctor,
    p: &TwistedComplex,
    window: RangeInclusive<i64>,
    witnesses: bool,
) -> Result<WeightHomologyResult, WeightError> {
    let c = slot_complex(gamma, p, *window.start() - 1, *window.end() + 1)?;
    let mut out = WeightHomologyResult::default();
    for n in window {
        out.groups.insert(n, c.homology(n));
        if witnesses {
            out.witnesses.insert(
                n,
                Witness { cycles: c.cocycles(n).basis().to_vec(), boundaries: c.coboundaries(n).basis().to_vec() },
            );
        }
    }
    Ok(out)
}

fn slot_maps(gamma: &AdditiveFunctor, f: &TwistedMorphism, shift: i64) -> DegreeMaps {
    let mut out = DegreeMaps::new(shift);
    for (&(a, b), blk) in f.components() {
        if a == b {
            out.insert(a, gamma.on_block(blk));
        }
    }
    out
}

fn require_twisted(j: &NegDgCategory, f: &TwistedMorphism, what: &str) -> Result<(), WeightError> {
    if f.is_twisted(j) {
        Ok(())
    } else {
        Err(WeightError::NotATwistedMorphism(format!("{what} is not closed of degree 0")))
    }
}

/// The map on degree-`n` values induced by `Γ(f_nn)`.
pub fn induced_map(
    j: &NegDgCategory,
    gamma: &AdditiveFunctor,
    f: &TwistedMorphism,
    n: i64,
) -> Result<SubquotientMap, WeightError> {
    require_twisted(j, f, "the morphism")?;
    let a = slot_complex(gamma, &f.source, n - 1, n + 1)?;
    let b = slot_complex(gamma, &f.target, n - 1, n + 1)?;
    Ok(slot_maps(gamma, f, 0).induced(&a, &b, n))
}

fn support_window(ps: &[&TwistedComplex]) -> RangeInclusive<i64> {
    let lo = ps.iter().filter_map(|p| p.min_slot()).min().unwrap_or(0);
    let hi = ps.iter().filter_map(|p| p.max_slot()).max().unwrap_or(-1);
    (lo - 1)..=(hi + 1)
}

/// Exactness of `… → H^n(A) → H^n(B) → H^n(C) → H^{n+1}(A) → …` for a
/// triangle `A → B → C → A[1]`, checked at every position of `window`
/// (default: the joint support widened by one).
pub fn long_exact_check(
    j: &NegDgCategory,
    gamma: &AdditiveFunctor,
    t: &Triangle,
    window: Option<RangeInclusive<i64>>,
) -> Result<LesReport, WeightError> {
    require_twisted(j, &t.u, "the first map")?;
    require_twisted(j, &t.v, "the second map")?;
    require_twisted(j, &t.w, "the connecting map")?;
    let window = window.unwrap_or_else(|| support_window(&[&t.a, &t.b, &t.c]));
    let a = full_slot_complex(gamma, &t.a)?;
    let b = full_slot_complex(gamma, &t.b)?;
    let c = full_slot_complex(gamma, &t.c)?;
    Ok(check_long_exact(
        &a,
        &b,
        &c,
        &slot_maps(gamma, &t.u, 0),
        &slot_maps(gamma, &t.v, 0),
        &slot_maps(gamma, &t.w, 1),
        window,
    ))
}

#[cfg(test)]
mod tests;
