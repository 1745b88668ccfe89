//! Kato-Suslin and arithmetic homology of finite complexes carrying a
//! Frobenius-like endomorphism.
//!
//! Indexing is homological throughout. With `C` the complex over the base,
//! `B` the complex over the closure, `φ: B -> B` and `ρ: C -> B`:
//!
//! * the arithmetic total has `Ar_m = B_{m-1} ⊕ B_m` and
//!   `d(y, z) = (-dy, (1 - φ)y + dz)`, so that `H_m(Ar)` sits in
//!   `0 -> H_m(B)_φ -> H_m(Ar) -> H_{m-1}(B)^φ -> 0`;
//! * the Kato-Suslin total has `KS_i = C_{i-2} ⊕ B_{i-1} ⊕ B_i` and
//!   `d(x, y, z) = (dx, ρx - dy, (1 - φ)y + dz)`. It is the cone of
//!   `C[1] -> Ar`, `x ↦ (ρx, 0)`, where `C[1]_j = C_{j-1}` with differential `-d`.
//!
//! `d² = 0` on the Kato-Suslin total needs `(1 - φ)ρ = 0`, which the input
//! check enforces. Complexes are stored cohomologically (degree `i` at `-i`)
//! inside [`Complex`].

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::exactlinalg::{
    check_long_exact, exact_at, kernel_basis, Coefficient, Complex, DegreeMaps, FgAbGroup, Int, IntMatrix, LesReport,
    LinalgError, Subquotient, SubquotientMap,
};
use crate::samples::random_matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KsError {
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A bounded complex of free abelian groups in homological indexing:
/// `ranks[i]` sits in degree `low + i` and `boundaries[i]` maps degree
/// `low + i + 1` to `low + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeChain {
    pub low: i64,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<IntMatrix>,
}

impl FreeChain {
    pub fn new(low: i64, ranks: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self, KsError> {
        if boundaries.len() + 1 != ranks.len().max(1) {
            return Err(KsError::Invalid(format!(
                "{} terms need {} boundaries",
                ranks.len(),
                ranks.len().saturating_sub(1)
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows() != ranks[i] || b.cols() != ranks[i + 1] {
                return Err(KsError::Invalid(format!(
                    "boundary out of degree {} is {}x{}, expected {}x{}",
                    low + i as i64 + 1,
                    b.rows(),
                    b.cols(),
                    ranks[i],
                    ranks[i + 1]
                )));
            }
        }
        Ok(FreeChain { low, ranks, boundaries: boundaries.into_iter().map(|b| b.lift()).collect() })
    }

    pub fn zero() -> Self {
        FreeChain { low: 0, ranks: Vec::new(), boundaries: Vec::new() }
    }

    /// A single group `Z^rank` in degree `degree`.
    pub fn concentrated(rank: usize, degree: i64) -> Self {
        FreeChain { low: degree, ranks: vec![rank], boundaries: Vec::new() }
    }

    pub fn high(&self) -> i64 {
        self.low + self.ranks.len() as i64 - 1
    }

    pub fn rank(&self, i: i64) -> usize {
        if i < self.low || i > self.high() {
            0
        } else {
            self.ranks[(i - self.low) as usize]
        }
    }

    /// `d: C_i -> C_{i-1}`.
    pub fn d(&self, i: i64) -> IntMatrix {
        if i > self.low && i <= self.high() {
            self.boundaries[(i - self.low - 1) as usize].clone()
        } else {
            IntMatrix::zeros(self.rank(i - 1), self.rank(i))
        }
    }

    /// `C ⊗ A` as a complex.
    pub fn tensor(&self, coeff: Coefficient) -> Complex {
        build(coeff, self.low, self.high(), |i| self.rank(i), |i| self.d(i))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsInput {
    pub coeff: Coefficient,
    pub base: FreeChain,
    pub closure: FreeChain,
    /// `φ_i: B_i -> B_i`; missing degrees are zero.
    pub phi: BTreeMap<i64, IntMatrix>,
    /// `ρ_i: C_i -> B_i`; missing degrees are zero.
    pub rho: BTreeMap<i64, IntMatrix>,
}

fn degreewise(map: &BTreeMap<i64, IntMatrix>, i: i64, rows: usize, cols: usize) -> IntMatrix {
    map.get(&i).map(|m| m.lift()).unwrap_or_else(|| IntMatrix::zeros(rows, cols))
}

/// Assembles a block matrix from `(block row, block column, matrix)` parts.
fn blocks(rows: &[usize], cols: &[usize], parts: &[(usize, usize, IntMatrix)]) -> IntMatrix {
    let (ro, co) = (offsets(rows), offsets(cols));
    let mut m = IntMatrix::zeros(rows.iter().sum(), cols.iter().sum());
    for (bi, bj, part) in parts {
        debug_assert_eq!((part.rows(), part.cols()), (rows[*bi], cols[*bj]));
        for r in 0..part.rows() {
            for c in 0..part.cols() {
                m.set(ro[*bi] + r, co[*bj] + c, part.get(r, c).clone());
            }
        }
    }
    m
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .scan(0, |acc, &s| {
            let o = *acc;
            *acc += s;
            Some(o)
        })
        .collect()
}

/// A free complex over `coeff` on homological degrees `lo..=hi` with the
/// given ranks and boundaries `d(i): degree i -> degree i - 1`.
fn build(coeff: Coefficient, lo: i64, hi: i64, rank: impl Fn(i64) -> usize, d: impl Fn(i64) -> IntMatrix) -> Complex {
    if hi < lo {
        return Complex::free(coeff, 0, &[], Vec::new()).expect("empty complex");
    }
    let ranks: Vec<usize> = (lo..=hi).map(&rank).collect();
    let boundaries = (lo + 1..=hi).map(|i| d(i).over(coeff)).collect();
    Complex::from_homological(coeff, lo, &ranks, boundaries).expect("d² = 0 was checked on the input")
}

fn identity_minus(m: &IntMatrix) -> IntMatrix {
    &IntMatrix::identity(m.rows()) - m
}

impl KsInput {
    pub fn new(
        coeff: Coefficient,
        base: FreeChain,
        closure: FreeChain,
        phi: BTreeMap<i64, IntMatrix>,
        rho: BTreeMap<i64, IntMatrix>,
    ) -> Result<Self, KsError> {
        let input = KsInput { coeff, base, closure, phi, rho };
        input.validate()?;
        Ok(input)
    }

    fn zero_over(&self, m: &IntMatrix) -> bool {
        m.clone().over(self.coeff).is_zero()
    }

    fn validate(&self) -> Result<(), KsError> {
        let (c, b) = (&self.base, &self.closure);
        for (name, map, rows, cols) in [("φ", &self.phi, b as &FreeChain, b), ("ρ", &self.rho, b, c)] {
            for (&i, m) in map {
                if (m.rows(), m.cols()) != (rows.rank(i), cols.rank(i)) {
                    return Err(KsError::Invalid(format!(
                        "{name} in degree {i} is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        rows.rank(i),
                        cols.rank(i)
                    )));
                }
            }
        }
        for (name, chain) in [("base", c), ("closure", b)] {
            for i in chain.low + 2..=chain.high() {
                if !self.zero_over(&(&chain.d(i - 1) * &chain.d(i))) {
                    return Err(KsError::Invalid(format!("the {name} complex has d² ≠ 0 out of degree {i}")));
                }
            }
        }
        let lo = c.low.min(b.low);
        let hi = c.high().max(b.high());
        for i in lo..=hi + 1 {
            let (phi_i, phi_j) = (self.phi(i), self.phi(i - 1));
            if !self.zero_over(&(&(&b.d(i) * &phi_i) - &(&phi_j * &b.d(i)))) {
                return Err(KsError::NotChainMap(format!("φ does not commute with d out of degree {i}")));
            }
            let (rho_i, rho_j) = (self.rho(i), self.rho(i - 1));
            if !self.zero_over(&(&(&b.d(i) * &rho_i) - &(&rho_j * &c.d(i)))) {
                return Err(KsError::NotChainMap(format!("ρ does not commute with d out of degree {i}")));
            }
            if !self.zero_over(&(&identity_minus(&phi_i) * &rho_i)) {
                return Err(KsError::NotChainMap(format!("(1 - φ)ρ ≠ 0 in degree {i}")));
            }
        }
        Ok(())
    }

    pub fn phi(&self, i: i64) -> IntMatrix {
        let r = self.closure.rank(i);
        degreewise(&self.phi, i, r, r)
    }

    pub fn rho(&self, i: i64) -> IntMatrix {
        degreewise(&self.rho, i, self.closure.rank(i), self.base.rank(i))
    }

    fn ar_rank(&self, m: i64) -> usize {
        self.closure.rank(m - 1) + self.closure.rank(m)
    }

    fn ar_range(&self) -> (i64, i64) {
        (self.closure.low, self.closure.high() + 1)
    }

    fn ar_d(&self, m: i64) -> IntMatrix {
        let b = &self.closure;
        blocks(
            &[b.rank(m - 2), b.rank(m - 1)],
            &[b.rank(m - 1), b.rank(m)],
            &[(0, 0, -&b.d(m - 1)), (1, 0, identity_minus(&self.phi(m - 1))), (1, 1, b.d(m))],
        )
    }

    fn ks_sizes(&self, i: i64) -> [usize; 3] {
        [self.base.rank(i - 2), self.closure.rank(i - 1), self.closure.rank(i)]
    }

    fn ks_range(&self) -> (i64, i64) {
        let (c, b) = (&self.base, &self.closure);
        if c.ranks.is_empty() {
            return self.ar_range();
        }
        (c.low.min(b.low - 2) + 2, (c.high() + 2).max(b.high() + 1))
    }

    fn ks_d(&self, i: i64) -> IntMatrix {
        let (c, b) = (&self.base, &self.closure);
        blocks(
            &self.ks_sizes(i - 1),
            &self.ks_sizes(i),
            &[
                (0, 0, c.d(i - 2)),
                (1, 0, self.rho(i - 2)),
                (1, 1, -&b.d(i - 1)),
                (2, 1, identity_minus(&self.phi(i - 1))),
                (2, 2, b.d(i)),
            ],
        )
    }

    /// `C[1]` with `C[1]_j = C_{j-1}` and differential `-d`.
    fn shifted_base(&self) -> Complex {
        let c = &self.base;
        if c.ranks.is_empty() {
            return build(self.coeff, 0, -1, |_| 0, |_| IntMatrix::zeros(0, 0));
        }
        build(self.coeff, c.low + 1, c.high() + 1, |j| c.rank(j - 1), |j| -&c.d(j - 1))
    }
}

/// The Kato-Suslin total complex.
pub fn ks_total(input: &KsInput) -> Complex {
    let (lo, hi) = input.ks_range();
    build(input.coeff, lo, hi, |i| input.ks_sizes(i).iter().sum(), |i| input.ks_d(i))
}

/// The arithmetic total complex `Tot(B --(1 - φ)--> B)`.
pub fn ar_total(input: &KsInput) -> Complex {
    let (lo, hi) = input.ar_range();
    build(input.coeff, lo, hi, |m| input.ar_rank(m), |m| input.ar_d(m))
}

fn homological_groups(c: &Complex, lo: i64, hi: i64) -> BTreeMap<i64, FgAbGroup> {
    (lo..=hi).map(|i| (i, c.homology_homological(i))).filter(|(_, g)| !g.is_zero()).collect()
}

/// One degree `m` of `0 -> H_m(B)_φ -> H_m(Ar) -> H_{m-1}(B)^φ -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceDegree {
    pub degree: i64,
    pub coinvariants: FgAbGroup,
    pub arithmetic: FgAbGroup,
    pub invariants: FgAbGroup,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SequenceReport {
    pub degrees: Vec<SequenceDegree>,
}

impl SequenceReport {
    pub fn is_exact(&self) -> bool {
        self.degrees.iter().all(|d| d.failures.is_empty())
    }
}

/// Computes `φ`-coinvariants and invariants on `H_*(B ⊗ A)` and checks the
/// short exact sequences against the arithmetic homology degreewise.
pub fn check_invariants_coinvariants(input: &KsInput) -> SequenceReport {
    let b = &input.closure;
    let bc = b.tensor(input.coeff);
    let ar = ar_total(input);
    let (lo, hi) = input.ar_range();
    let mut report = SequenceReport::default();
    for m in lo..=hi {
        let mut failures = Vec::new();
        let h_m = bc.homology_subquotient(-m);
        let h_prev = bc.homology_subquotient(-(m - 1));
        let one_minus = |k: i64| identity_minus(&input.phi(k)).over(input.coeff);
        let act_m = SubquotientMap::new(h_m.clone(), h_m.clone(), one_minus(m)).expect("square");
        let act_prev = SubquotientMap::new(h_prev.clone(), h_prev.clone(), one_minus(m - 1)).expect("square");

        let coinv = Subquotient::new(h_m.numerator().clone(), act_m.image()).expect("image contains the boundaries");
        let inv =
            Subquotient::new(act_prev.kernel(), h_prev.denominator().clone()).expect("kernel contains the boundaries");
        let ar_m = ar.homology_subquotient(-m);
        let (r_prev, r_m) = (b.rank(m - 1), b.rank(m));
        let include = blocks(&[r_prev, r_m], &[r_m], &[(1, 0, IntMatrix::identity(r_m))]);
        let project = blocks(&[r_prev], &[r_prev, r_m], &[(0, 0, IntMatrix::identity(r_prev))]);
        let f = SubquotientMap::new(coinv.clone(), ar_m.clone(), include).expect("shapes follow the blocks");
        let g = SubquotientMap::new(ar_m.clone(), inv.clone(), project).expect("shapes follow the blocks");

        let (coinv_g, inv_g) = (coinv.group(), inv.group());
        if coinv_g != act_m.cokernel_group() {
            failures.push(format!("coinvariants {coinv_g} disagree with coker(1 - φ) = {}", act_m.cokernel_group()));
        }
        if inv_g != act_prev.kernel_group() {
            failures.push(format!("invariants {inv_g} disagree with ker(1 - φ) = {}", act_prev.kernel_group()));
        }
        if !f.is_well_defined() || !g.is_well_defined() {
            failures.push("assembled maps are not well defined".into());
        } else {
            if !f.is_injective() {
                failures.push(format!("coinvariants do not inject: kernel {}", f.kernel_group()));
            }
            if !exact_at(&f, &g) {
                failures.push("not exact in the middle".into());
            }
            if !g.is_surjective() {
                failures.push(format!("projection to invariants has cokernel {}", g.cokernel_group()));
            }
        }
        report.degrees.push(SequenceDegree {
            degree: m,
            coinvariants: coinv_g,
            arithmetic: ar_m.group(),
            invariants: inv_g,
            failures,
        });
    }
    report
}

/// The triangle `C[1] -> Ar -> KS -> C` as complexes with chain maps in the
/// cohomological storage, ready for [`check_long_exact`].
pub struct KsTriangle {
    pub shifted_base: Complex,
    pub ar: Complex,
    pub ks: Complex,
    pub u: DegreeMaps,
    pub v: DegreeMaps,
    pub w: DegreeMaps,
}

pub fn ks_triangle(input: &KsInput) -> KsTriangle {
    let (c, b) = (&input.base, &input.closure);
    let (shifted_base, ar, ks) = (input.shifted_base(), ar_total(input), ks_total(input));
    let (klo, khi) = input.ks_range();
    let lo = (c.low + 1).min(b.low).min(klo) - 1;
    let hi = (c.high() + 2).max(b.high() + 1).max(khi) + 1;
    let (mut u, mut v, mut w) = (DegreeMaps::new(0), DegreeMaps::new(0), DegreeMaps::new(1));
    for j in lo..=hi {
        let cj = c.rank(j - 1);
        let (b_prev, b_j) = (b.rank(j - 1), b.rank(j));
        u.insert(-j, blocks(&[b_prev, b_j], &[cj], &[(0, 0, input.rho(j - 1))]));
        let ks_j = input.ks_sizes(j);
        v.insert(
            -j,
            blocks(&ks_j, &[b_prev, b_j], &[(1, 0, IntMatrix::identity(b_prev)), (2, 1, IntMatrix::identity(b_j))]),
        );
        w.insert(-j, blocks(&[c.rank(j - 2)], &ks_j, &[(0, 0, IntMatrix::identity(ks_j[0]))]));
    }
    KsTriangle { shifted_base, ar, ks, u, v, w }
}

impl KsTriangle {
    /// Exactness of `H_{j-1}(C) -> H_j(Ar) -> H_j(KS) -> H_{j-2}(C) -> ...`.
    pub fn long_exact_check(&self) -> LesReport {
        let lo = self.shifted_base.lowest().min(self.ar.lowest()).min(self.ks.lowest()) - 1;
        let hi = self.shifted_base.highest().max(self.ar.highest()).max(self.ks.highest()) + 1;
        check_long_exact(&self.shifted_base, &self.ar, &self.ks, &self.u, &self.v, &self.w, lo..=hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsResult {
    /// Nonzero Kato-Suslin homology by degree.
    pub ks: BTreeMap<i64, FgAbGroup>,
    /// Nonzero arithmetic homology by degree.
    pub ar: BTreeMap<i64, FgAbGroup>,
    /// Nonzero homology of `C ⊗ A`.
    pub base: BTreeMap<i64, FgAbGroup>,
    pub sequence_report: SequenceReport,
    pub cone_report: LesReport,
}

pub fn ks_homology(input: &KsInput) -> KsResult {
    let tri = ks_triangle(input);
    let (klo, khi) = input.ks_range();
    let (alo, ahi) = input.ar_range();
    let base = input.base.tensor(input.coeff);
    KsResult {
        ks: homological_groups(&tri.ks, klo, khi),
        ar: homological_groups(&tri.ar, alo, ahi),
        base: homological_groups(&base, input.base.low, input.base.high()),
        sequence_report: check_invariants_coinvariants(input),
        cone_report: tri.long_exact_check(),
    }
}

/// A random free complex with ranks at most `max_rank` on up to three degrees.
pub fn random_free_chain<R: Rng>(rng: &mut R, max_rank: usize) -> FreeChain {
    let len = rng.gen_range(1..=3);
    let low = rng.gen_range(-1..=1);
    let ranks: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_rank)).collect();
    let mut boundaries: Vec<IntMatrix> = Vec::new();
    for i in 1..len {
        let d = match boundaries.last() {
            None => random_matrix(rng, ranks[0], ranks[1], 3),
            Some(prev) => {
                let ker = kernel_basis(prev);
                &ker * &random_matrix(rng, ker.cols(), ranks[i], 2)
            }
        };
        boundaries.push(d);
    }
    FreeChain::new(low, ranks, boundaries).expect("sized by construction")
}

/// `k + dh + hd` for a random degree-one `h`: a chain map homotopic to `k`.
fn random_homotopic_scalar<R: Rng>(rng: &mut R, x: &FreeChain, k: i64) -> BTreeMap<i64, IntMatrix> {
    let h: BTreeMap<i64, IntMatrix> =
        (x.low - 1..=x.high()).map(|i| (i, random_matrix(rng, x.rank(i + 1), x.rank(i), 1))).collect();
    let hz = |i: i64| h.get(&i).cloned().unwrap_or_else(|| IntMatrix::zeros(x.rank(i + 1), x.rank(i)));
    (x.low..=x.high())
        .map(|i| {
            let dh = &x.d(i + 1) * &hz(i);
            let hd = &hz(i - 1) * &x.d(i);
            (i, &(&IntMatrix::scalar(x.rank(i), &Int::from(k)) + &dh) + &hd)
        })
        .collect()
}

/// A random valid input of one of three shapes: `B = X ⊕ X` with `φ` the
/// swap and `ρ` the diagonal; `φ` homotopic to a scalar with `ρ = 0`; or
/// `φ = 1` with `ρ` homotopic to a scalar.
pub fn random_ks_input<R: Rng>(rng: &mut R, coeff: Coefficient) -> KsInput {
    let shape = rng.gen_range(0..3);
    // Each complex keeps total rank at most 6.
    let x = random_free_chain(rng, if shape == 0 { 1 } else { 2 });
    let (closure, phi, rho) = match shape {
        0 => {
            let ranks: Vec<usize> = x.ranks.iter().map(|r| 2 * r).collect();
            let boundaries = x
                .boundaries
                .iter()
                .map(|d| blocks(&[d.rows(); 2], &[d.cols(); 2], &[(0, 0, d.clone()), (1, 1, d.clone())]))
                .collect();
            let b = FreeChain::new(x.low, ranks, boundaries).expect("doubled shapes");
            let mut phi = BTreeMap::new();
            let mut rho = BTreeMap::new();
            for i in x.low..=x.high() {
                let r = x.rank(i);
                let id = IntMatrix::identity(r);
                phi.insert(i, blocks(&[r, r], &[r, r], &[(0, 1, id.clone()), (1, 0, id.clone())]));
                rho.insert(i, blocks(&[r, r], &[r], &[(0, 0, id.clone()), (1, 0, id)]));
            }
            (b, phi, rho)
        }
        1 => {
            let k = rng.gen_range(-2..=3);
            let phi = random_homotopic_scalar(rng, &x, k);
            (x.clone(), phi, BTreeMap::new())
        }
        _ => {
            let phi = (x.low..=x.high()).map(|i| (i, IntMatrix::identity(x.rank(i)))).collect();
            let k = rng.gen_range(-2..=2);
            let rho = random_homotopic_scalar(rng, &x, k);
            (x.clone(), phi, rho)
        }
    };
    KsInput::new(coeff, x, closure, phi, rho).expect("valid by construction")
}

#[cfg(test)]
mod tests;
