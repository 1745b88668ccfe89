use num_integer::Integer;
use num_traits::Zero;

use super::group::FgAbGroup;
use super::matrix::{Coefficient, Int, IntMatrix};
use super::smith::{echelon, smith_diagonal};
use super::LinalgError;

/// A subgroup of `Z^ambient`, stored by its Hermite basis so that equal
/// lattices have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<Vec<Int>>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn zero(ambient: usize) -> Self {
        Lattice { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::scaled_full(ambient, &Int::from(1))
    }

    /// `n Z^ambient`; the zero lattice when `n = 0`.
    pub fn scaled_full(ambient: usize, n: &Int) -> Self {
        if n.is_zero() {
            return Self::zero(ambient);
        }
        let n = num_traits::Signed::abs(n);
        let basis = (0..ambient)
            .map(|i| {
                let mut e = vec![Int::zero(); ambient];
                e[i] = n.clone();
                e
            })
            .collect();
        Lattice { ambient, basis, pivots: (0..ambient).collect() }
    }

    pub fn from_generators(ambient: usize, gens: impl IntoIterator<Item = Vec<Int>>) -> Self {
        let rows: Vec<Vec<Int>> = gens
            .into_iter()
            .inspect(|g| assert_eq!(g.len(), ambient, "generator length mismatch"))
            .filter(|g| g.iter().any(|x| !x.is_zero()))
            .collect();
        let e = echelon(rows, ambient, false);
        Lattice { ambient, basis: e.rows, pivots: e.pivots }
    }

    /// Lattice generated by the columns of `m` (entries read as integers).
    pub fn column_span(m: &IntMatrix) -> Self {
        Self::from_generators(m.rows(), m.columns())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Int>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Basis vectors as the columns of an `ambient x rank` matrix.
    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.ambient, &self.basis)
    }

    /// Coordinates of `v` in the Hermite basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut rest = v.to_vec();
        let mut out = Vec::with_capacity(self.basis.len());
        let mut next = 0;
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if rest[next..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, b) in rest[p..].iter_mut().zip(&row[p..]) {
                    if !b.is_zero() {
                        *x -= b * &q;
                    }
                }
            }
            out.push(q);
            next = p + 1;
        }
        rest[next..].iter().all(Zero::is_zero).then_some(out)
    }

    pub fn contains_vec(&self, v: &[Int]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, other: &Lattice) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        other.basis.iter().all(|v| self.contains_vec(v))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        Self::from_generators(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    /// Image `m(self)` in `Z^rows(m)`.
    pub fn image(&self, m: &IntMatrix) -> Lattice {
        assert_eq!(m.cols(), self.ambient, "matrix/lattice shape mismatch");
        let m = m.lift();
        Self::from_generators(m.rows(), self.basis.iter().map(|v| m.mul_vec(v)))
    }

    /// `{x in self : m x in target}`.
    pub fn preimage(&self, m: &IntMatrix, target: &Lattice) -> Lattice {
        assert_eq!(m.cols(), self.ambient, "matrix/lattice shape mismatch");
        assert_eq!(m.rows(), target.ambient, "matrix/target shape mismatch");
        let m = m.lift();
        let r = self.basis.len();
        let mut gens: Vec<Vec<Int>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        gens.extend(target.basis.iter().cloned());
        let ech = echelon(gens, target.ambient, true);
        let vecs = ech.relations.into_iter().map(|rel| {
            let mut x = vec![Int::zero(); self.ambient];
            for (c, b) in rel[..r].iter().zip(&self.basis) {
                if c.is_zero() {
                    continue;
                }
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi += c * bi;
                }
            }
            x
        });
        Self::from_generators(self.ambient, vecs)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        self.preimage(&IntMatrix::identity(self.ambient), other)
    }

    /// Direct sum inside `Z^(a + b)`.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let n = self.ambient + other.ambient;
        let left = self.basis.iter().map(|v| {
            let mut w = v.clone();
            w.resize(n, Int::zero());
            w
        });
        let right = other.basis.iter().map(|v| {
            let mut w = vec![Int::zero(); self.ambient];
            w.extend(v.iter().cloned());
            w
        });
        Self::from_generators(n, left.chain(right))
    }
}

/// A subquotient `K / R` of `Z^ambient` with `R` contained in `K`.
///
/// A free module of rank `c` over `Z/n` is `Z^c / n Z^c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subquotient {
    num: Lattice,
    den: Lattice,
}

impl Subquotient {
    pub fn new(num: Lattice, den: Lattice) -> Result<Self, LinalgError> {
        if num.ambient != den.ambient {
            return Err(LinalgError::ShapeMismatch(format!(
                "numerator in Z^{} but denominator in Z^{}",
                num.ambient, den.ambient
            )));
        }
        if !num.contains(&den) {
            return Err(LinalgError::NotWellDefined("denominator is not contained in numerator".into()));
        }
        Ok(Subquotient { num, den })
    }

    /// The free module of rank `rank` over `coeff`.
    pub fn free(rank: usize, coeff: Coefficient) -> Self {
        let den = match coeff.modulus() {
            Some(n) => Lattice::scaled_full(rank, &n),
            None => Lattice::zero(rank),
        };
        Subquotient { num: Lattice::full(rank), den }
    }

    pub fn zero(ambient: usize) -> Self {
        Subquotient { num: Lattice::zero(ambient), den: Lattice::zero(ambient) }
    }

    /// `Z^c / (column span of relations)`.
    pub fn presented(relations: &IntMatrix) -> Self {
        let c = relations.rows();
        Subquotient { num: Lattice::full(c), den: Lattice::column_span(relations) }
    }

    pub fn ambient(&self) -> usize {
        self.num.ambient
    }

    pub fn numerator(&self) -> &Lattice {
        &self.num
    }

    pub fn denominator(&self) -> &Lattice {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.den.contains(&self.num)
    }

    /// Whether `v` lies in the numerator.
    pub fn contains(&self, v: &[Int]) -> bool {
        self.num.contains_vec(v)
    }

    /// Whether `v` represents zero.
    pub fn is_trivial(&self, v: &[Int]) -> bool {
        self.den.contains_vec(v)
    }

    pub fn direct_sum(&self, other: &Subquotient) -> Subquotient {
        Subquotient { num: self.num.direct_sum(&other.num), den: self.den.direct_sum(&other.den) }
    }

    pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a Subquotient>) -> Subquotient {
        parts.into_iter().fold(Subquotient::zero(0), |acc, p| acc.direct_sum(p))
    }

    /// Relation matrix of `K/R` in the Hermite basis of `K`.
    pub fn relation_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<Int>> =
            self.den.basis().iter().map(|v| self.num.coordinates(v).expect("denominator inside numerator")).collect();
        IntMatrix::from_columns(self.num.rank(), &cols)
    }

    /// The isomorphism type of `K/R`.
    pub fn group(&self) -> FgAbGroup {
        let rel = self.relation_matrix();
        let diag = smith_diagonal(&rel);
        FgAbGroup::from_presentation_diagonal(self.num.rank(), &diag, rel)
    }
}

/// A homomorphism of subquotients given by an integer matrix on representatives.
#[derive(Clone, Debug)]
pub struct SubquotientMap {
    pub source: Subquotient,
    pub target: Subquotient,
    pub matrix: IntMatrix,
}

impl SubquotientMap {
    pub fn new(source: Subquotient, target: Subquotient, matrix: IntMatrix) -> Result<Self, LinalgError> {
        if matrix.cols() != source.ambient() || matrix.rows() != target.ambient() {
            return Err(LinalgError::ShapeMismatch(format!(
                "{}x{} matrix between Z^{} and Z^{}",
                matrix.rows(),
                matrix.cols(),
                source.ambient(),
                target.ambient()
            )));
        }
        Ok(SubquotientMap { source, target, matrix: matrix.lift() })
    }

    /// Sends numerator into numerator and denominator into denominator.
    pub fn is_well_defined(&self) -> bool {
        self.target.num.contains(&self.source.num.image(&self.matrix))
            && self.target.den.contains(&self.source.den.image(&self.matrix))
    }

    /// Representatives of the kernel: `{x in K : M x in R'}`.
    pub fn kernel(&self) -> Lattice {
        self.source.num.preimage(&self.matrix, &self.target.den)
    }

    /// Representatives of the image: `M K + R'`.
    pub fn image(&self) -> Lattice {
        self.source.num.image(&self.matrix).sum(&self.target.den)
    }

    pub fn is_zero(&self) -> bool {
        self.target.den.contains(&self.source.num.image(&self.matrix))
    }

    pub fn is_injective(&self) -> bool {
        self.source.den.contains(&self.kernel())
    }

    pub fn is_surjective(&self) -> bool {
        self.image().contains(&self.target.num)
    }

    pub fn kernel_group(&self) -> FgAbGroup {
        Subquotient { num: self.kernel(), den: self.source.den.clone() }.group()
    }

    pub fn image_group(&self) -> FgAbGroup {
        Subquotient { num: self.image(), den: self.target.den.clone() }.group()
    }

    pub fn cokernel_group(&self) -> FgAbGroup {
        Subquotient { num: self.target.num.clone(), den: self.image() }.group()
    }

    /// Agreement with `other` as maps of subquotients.
    pub fn eq_mod(&self, other: &SubquotientMap) -> bool {
        let diff = &self.matrix - &other.matrix;
        self.target.den.contains(&self.source.num.image(&diff))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SubquotientMap) -> SubquotientMap {
        SubquotientMap {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: &other.matrix * &self.matrix,
        }
    }
}

/// Whether `A -f-> B -g-> C` is exact at `B`.
pub fn exact_at(f: &SubquotientMap, g: &SubquotientMap) -> bool {
    f.image() == g.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn canonical_equality() {
        let a = Lattice::from_generators(2, vec![iv(&[2, 0]), iv(&[0, 3])]);
        let b = Lattice::from_generators(2, vec![iv(&[2, 3]), iv(&[0, 3]), iv(&[4, 0])]);
        assert_eq!(a, b);
        assert!(a.contains_vec(&iv(&[4, -6])));
        assert!(!a.contains_vec(&iv(&[1, 0])));
    }

    #[test]
    fn intersection_and_preimage() {
        let a = Lattice::from_generators(1, vec![iv(&[4])]);
        let b = Lattice::from_generators(1, vec![iv(&[6])]);
        assert_eq!(a.intersect(&b), Lattice::from_generators(1, vec![iv(&[12])]));
        let m = IntMatrix::from_i64(&[&[2]]);
        let p = Lattice::full(1).preimage(&m, &b);
        assert_eq!(p, Lattice::from_generators(1, vec![iv(&[3])]));
    }

    #[test]
    fn subquotient_groups() {
        let z5 = Coefficient::modulo(5).unwrap();
        assert_eq!(Subquotient::free(2, z5).group().invariant_factors(), &iv(&[5, 5]));
        let p = Subquotient::presented(&IntMatrix::from_i64(&[&[2, 0], &[0, 0]]));
        assert_eq!(p.group().invariant_factors(), &iv(&[2, 0]));
    }

    #[test]
    fn maps() {
        let z = Subquotient::free(1, Coefficient::Integers);
        let two = SubquotientMap::new(z.clone(), z.clone(), IntMatrix::from_i64(&[&[2]])).unwrap();
        assert!(two.is_injective() && !two.is_surjective());
        assert_eq!(two.cokernel_group().invariant_factors(), &iv(&[2]));
        let z2 = Subquotient::free(1, Coefficient::modulo(2).unwrap());
        let red = SubquotientMap::new(z2.clone(), z2, IntMatrix::from_i64(&[&[2]])).unwrap();
        assert!(red.is_zero());
    }
}
