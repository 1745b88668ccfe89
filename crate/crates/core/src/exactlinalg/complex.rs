use std::collections::BTreeMap;
use std::fmt;

use super::group::FgAbGroup;
use super::lattice::{Lattice, Subquotient, SubquotientMap};
use super::matrix::{Coefficient, IntMatrix};
use super::LinalgError;

/// A bounded cochain complex of subquotients, `maps[k]` going from term
/// `lowest + k` to term `lowest + k + 1`. Terms outside the stored range are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    lowest: i64,
    terms: Vec<Subquotient>,
    maps: Vec<IntMatrix>,
}

impl Complex {
    pub fn new(lowest: i64, terms: Vec<Subquotient>, maps: Vec<IntMatrix>) -> Result<Self, LinalgError> {
        if maps.len() != terms.len().saturating_sub(1) {
            return Err(LinalgError::ShapeMismatch(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                maps.len()
            )));
        }
        let maps: Vec<IntMatrix> = maps.into_iter().map(|m| m.lift()).collect();
        for (k, m) in maps.iter().enumerate() {
            let f = SubquotientMap::new(terms[k].clone(), terms[k + 1].clone(), m.clone())?;
            if !f.is_well_defined() {
                return Err(LinalgError::NotWellDefined(format!(
                    "differential in degree {} does not respect the subquotients",
                    lowest + k as i64
                )));
            }
        }
        for k in 1..maps.len() {
            let dd = &maps[k] * &maps[k - 1];
            if !terms[k + 1].denominator().contains(&terms[k - 1].numerator().image(&dd)) {
                return Err(LinalgError::CompositionNotZero(lowest + k as i64 - 1));
            }
        }
        Ok(Complex { lowest, terms, maps })
    }

    /// A complex of free modules over `coeff` with ranks read off the matrices.
    pub fn free(coeff: Coefficient, lowest: i64, ranks: &[usize], maps: Vec<IntMatrix>) -> Result<Self, LinalgError> {
        let terms = ranks.iter().map(|&r| Subquotient::free(r, coeff)).collect();
        Self::new(lowest, terms, maps)
    }

    /// Builds a complex from homological data: `ranks[i]` is the rank in
    /// degree `low + i` and `boundaries[i]` maps degree `low + i + 1` to
    /// `low + i`. Homological degree `a` becomes cohomological degree `-a`.
    pub fn from_homological(
        coeff: Coefficient,
        low: i64,
        ranks: &[usize],
        boundaries: Vec<IntMatrix>,
    ) -> Result<Self, LinalgError> {
        let n = ranks.len();
        if n == 0 {
            return Self::free(coeff, 0, &[], Vec::new());
        }
        let high = low + n as i64 - 1;
        let rev_ranks: Vec<usize> = ranks.iter().rev().copied().collect();
        let rev_maps: Vec<IntMatrix> = boundaries.into_iter().rev().collect();
        Self::free(coeff, -high, &rev_ranks, rev_maps)
    }

    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    /// Highest stored degree; below `lowest` for an empty complex.
    pub fn highest(&self) -> i64 {
        self.lowest + self.terms.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn index(&self, k: i64) -> Option<usize> {
        let i = k - self.lowest;
        (i >= 0 && (i as usize) < self.terms.len()).then_some(i as usize)
    }

    pub fn term(&self, k: i64) -> Subquotient {
        self.index(k).map_or_else(|| Subquotient::zero(0), |i| self.terms[i].clone())
    }

    pub fn ambient(&self, k: i64) -> usize {
        self.index(k).map_or(0, |i| self.terms[i].ambient())
    }

    /// The differential from degree `k` to `k + 1` (a zero matrix outside the range).
    pub fn map(&self, k: i64) -> IntMatrix {
        match self.index(k) {
            Some(i) if i < self.maps.len() => self.maps[i].clone(),
            _ => IntMatrix::zeros(self.ambient(k + 1), self.ambient(k)),
        }
    }

    pub fn maps(&self) -> &[IntMatrix] {
        &self.maps
    }

    pub fn terms(&self) -> &[Subquotient] {
        &self.terms
    }

    pub fn cocycles(&self, k: i64) -> Lattice {
        self.term(k).numerator().preimage(&self.map(k), self.term(k + 1).denominator())
    }

    pub fn coboundaries(&self, k: i64) -> Lattice {
        self.term(k - 1).numerator().image(&self.map(k - 1)).sum(self.term(k).denominator())
    }

    /// `H^k` as a subquotient of the ambient lattice of degree `k`.
    pub fn homology_subquotient(&self, k: i64) -> Subquotient {
        Subquotient::new(self.cocycles(k), self.coboundaries(k)).expect("d^2 = 0 was checked")
    }

    pub fn homology(&self, k: i64) -> FgAbGroup {
        if self.index(k).is_none() {
            return FgAbGroup::zero();
        }
        self.homology_subquotient(k).group()
    }

    /// `H_a` in homological indexing, i.e. `H^(-a)`.
    pub fn homology_homological(&self, a: i64) -> FgAbGroup {
        self.homology(-a)
    }

    pub fn all_homology(&self) -> BTreeMap<i64, FgAbGroup> {
        (self.lowest..=self.highest()).map(|k| (k, self.homology(k))).collect()
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " -> ")?;
            }
            write!(f, "[{}]{}", self.lowest + i as i64, t.group())?;
        }
        Ok(())
    }
}

/// Degreewise matrices of a map of complexes; missing degrees are zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DegreeMaps {
    /// Target degree minus source degree.
    pub shift: i64,
    pub maps: BTreeMap<i64, IntMatrix>,
}

impl DegreeMaps {
    pub fn new(shift: i64) -> Self {
        DegreeMaps { shift, maps: BTreeMap::new() }
    }

    pub fn insert(&mut self, k: i64, m: IntMatrix) {
        self.maps.insert(k, m.lift());
    }

    pub fn at(&self, k: i64, source: &Complex, target: &Complex) -> IntMatrix {
        self.maps
            .get(&k)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(target.ambient(k + self.shift), source.ambient(k)))
    }

    /// Checks `d f = f d` up to the target denominators.
    pub fn is_chain_map(&self, source: &Complex, target: &Complex) -> bool {
        let lo = source.lowest().min(target.lowest() - self.shift) - 1;
        let hi = source.highest().max(target.highest() - self.shift) + 1;
        (lo..=hi).all(|k| {
            let f = self.at(k, source, target);
            let g = self.at(k + 1, source, target);
            let left = &target.map(k + self.shift) * &f;
            let right = &g * &source.map(k);
            let diff = &left - &right;
            let sq = source.term(k);
            let tq = target.term(k + 1 + self.shift);
            f.rows() == target.ambient(k + self.shift) && tq.denominator().contains(&sq.numerator().image(&diff))
        })
    }

    /// The map `H^k(source) -> H^(k+shift)(target)`.
    pub fn induced(&self, source: &Complex, target: &Complex, k: i64) -> SubquotientMap {
        SubquotientMap::new(
            source.homology_subquotient(k),
            target.homology_subquotient(k + self.shift),
            self.at(k, source, target),
        )
        .expect("shapes follow the complexes")
    }
}

/// Position in a long exact sequence `H^k(A) -> H^k(B) -> H^k(C) -> H^(k+1)(A)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LesSpot {
    B,
    C,
    ANext,
}

impl fmt::Display for LesSpot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LesSpot::B => write!(f, "middle term"),
            LesSpot::C => write!(f, "third term"),
            LesSpot::ANext => write!(f, "first term of the next degree"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesFailure {
    pub degree: i64,
    pub spot: LesSpot,
    pub image: FgAbGroup,
    pub kernel: FgAbGroup,
}

impl fmt::Display for LesFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "not exact at the {} in degree {}: image {} vs kernel {}",
            self.spot, self.degree, self.image, self.kernel
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LesReport {
    pub positions_checked: usize,
    pub failures: Vec<LesFailure>,
}

impl LesReport {
    pub fn is_exact(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_spot(f: &SubquotientMap, g: &SubquotientMap, degree: i64, spot: LesSpot, report: &mut LesReport) {
    report.positions_checked += 1;
    let im = f.image();
    let ker = g.kernel();
    if im != ker {
        let den = g.source.denominator().clone();
        report.failures.push(LesFailure {
            degree,
            spot,
            image: Subquotient::new(im.clone(), den.clone()).map(|s| s.group()).unwrap_or_else(|_| FgAbGroup::zero()),
            kernel: Subquotient::new(ker, den).map(|s| s.group()).unwrap_or_else(|_| FgAbGroup::zero()),
        });
    }
}

/// Verifies exactness of the long sequence induced by `u: A -> B`,
/// `v: B -> C` and a connecting map `w: C^k -> A^(k+1)` for every `k` in `window`.
pub fn check_long_exact(
    a: &Complex,
    b: &Complex,
    c: &Complex,
    u: &DegreeMaps,
    v: &DegreeMaps,
    w: &DegreeMaps,
    window: std::ops::RangeInclusive<i64>,
) -> LesReport {
    assert_eq!((u.shift, v.shift, w.shift), (0, 0, 1), "unexpected degree shifts");
    let mut report = LesReport::default();
    for k in window {
        let uk = u.induced(a, b, k);
        let vk = v.induced(b, c, k);
        let wk = w.induced(c, a, k);
        let uk1 = u.induced(a, b, k + 1);
        check_spot(&uk, &vk, k, LesSpot::B, &mut report);
        check_spot(&vk, &wk, k, LesSpot::C, &mut report);
        check_spot(&wk, &uk1, k, LesSpot::ANext, &mut report);
    }
    report
}

/// `ker(d_out) / im(d_in)` over the common coefficient ring of the matrices.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<FgAbGroup, LinalgError> {
    if d_out.cols() != d_in.rows() {
        return Err(LinalgError::ShapeMismatch(format!(
            "outgoing map has {} columns but incoming map has {} rows",
            d_out.cols(),
            d_in.rows()
        )));
    }
    if d_in.coeff() != d_out.coeff() {
        return Err(LinalgError::CoefficientMismatch(d_in.coeff(), d_out.coeff()));
    }
    let coeff = d_in.coeff();
    let ranks = [d_in.cols(), d_in.rows(), d_out.rows()];
    let c = Complex::free(coeff, -1, &ranks, vec![d_in.clone(), d_out.clone()]).map_err(|e| match e {
        LinalgError::CompositionNotZero(_) => LinalgError::CompositionNotZero(0),
        other => other,
    })?;
    Ok(c.homology(0))
}
