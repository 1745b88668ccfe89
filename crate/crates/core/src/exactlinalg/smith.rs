use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Coefficient, Int, IntMatrix};

/// Result of reducing a list of row vectors to Hermite normal form.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows in Hermite normal form: positive pivots, strictly
    /// increasing pivot columns, entries above each pivot reduced into `[0, pivot)`.
    pub rows: Vec<Vec<Int>>,
    pub pivots: Vec<usize>,
    /// `transform[k]` expresses `rows[k]` as a combination of the input rows.
    pub transform: Vec<Vec<Int>>,
    /// A basis (over Z) of the integer relations among the input rows.
    pub relations: Vec<Vec<Int>>,
}

fn sub_multiple(dst: &mut [Int], src: &[Int], k: &Int) {
    if k.is_zero() {
        return;
    }
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= s * k;
        }
    }
}

fn negate(v: &mut [Int]) {
    for x in v.iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Hermite normal form of the row span of `input` (each row of length `width`).
/// When `track` is false the transform and relation fields are left empty.
pub fn echelon(input: Vec<Vec<Int>>, width: usize, track: bool) -> Echelon {
    let n = input.len();
    let mut rows = input;
    let mut tr: Vec<Vec<Int>> = if track {
        (0..n)
            .map(|i| {
                let mut e = vec![Int::zero(); n];
                e[i] = Int::one();
                e
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut pivots = Vec::new();
    let mut piv = 0;
    for col in 0..width {
        if piv == n {
            break;
        }
        loop {
            let best = (piv..n)
                .filter(|&r| !rows[r][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(piv, best);
            if track {
                tr.swap(piv, best);
            }
            let mut done = true;
            for r in piv + 1..n {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = &rows[r][col] / &rows[piv][col];
                let (head, tail) = rows.split_at_mut(r);
                sub_multiple(&mut tail[0], &head[piv], &q);
                if track {
                    let (h, t) = tr.split_at_mut(r);
                    sub_multiple(&mut t[0], &h[piv], &q);
                }
                if !rows[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if piv >= n || rows[piv][col].is_zero() {
            continue;
        }
        if rows[piv][col].is_negative() {
            negate(&mut rows[piv]);
            if track {
                negate(&mut tr[piv]);
            }
        }
        for r in 0..piv {
            let q = rows[r][col].div_floor(&rows[piv][col]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = rows.split_at_mut(piv);
            sub_multiple(&mut head[r], &tail[0], &q);
            if track {
                let (h, t) = tr.split_at_mut(piv);
                sub_multiple(&mut h[r], &t[0], &q);
            }
        }
        pivots.push(col);
        piv += 1;
    }
    let relations = if track { tr.split_off(piv) } else { Vec::new() };
    rows.truncate(piv);
    Echelon { rows, pivots, transform: tr, relations }
}

/// Smith normal form `U * M * V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries of `D` up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

struct Reducer {
    a: IntMatrix,
    u: Option<IntMatrix>,
    v: Option<IntMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = self.u.as_mut() {
            u.swap_rows(i, j);
        }
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = self.v.as_mut() {
            v.swap_cols(i, j);
        }
    }
    fn add_row(&mut self, dst: usize, src: usize, k: &Int) {
        self.a.add_row_multiple(dst, src, k);
        if let Some(u) = self.u.as_mut() {
            u.add_row_multiple(dst, src, k);
        }
    }
    fn add_col(&mut self, dst: usize, src: usize, k: &Int) {
        self.a.add_col_multiple(dst, src, k);
        if let Some(v) = self.v.as_mut() {
            v.add_col_multiple(dst, src, k);
        }
    }
    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        if let Some(u) = self.u.as_mut() {
            u.negate_row(r);
        }
    }

    fn run(&mut self) {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        for t in 0..rows.min(cols) {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = self.a.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { return };
            self.swap_rows(t, bi);
            self.swap_cols(t, bj);
            loop {
                let mut clean = true;
                for i in t + 1..rows {
                    if self.a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = self.a.get(i, t) / self.a.get(t, t);
                    self.add_row(i, t, &-q);
                    if !self.a.get(i, t).is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..cols {
                    if self.a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = self.a.get(t, j) / self.a.get(t, t);
                    self.add_col(j, t, &-q);
                    if !self.a.get(t, j).is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    // Move the smallest leftover in row/column t onto the pivot.
                    let mut pick = None;
                    let mut size = self.a.get(t, t).abs();
                    for i in t + 1..rows {
                        let x = self.a.get(i, t).abs();
                        if !x.is_zero() && x < size {
                            size = x;
                            pick = Some((i, true));
                        }
                    }
                    for j in t + 1..cols {
                        let x = self.a.get(t, j).abs();
                        if !x.is_zero() && x < size {
                            size = x;
                            pick = Some((j, false));
                        }
                    }
                    match pick {
                        Some((i, true)) => self.swap_rows(t, i),
                        Some((j, false)) => self.swap_cols(t, j),
                        None => {}
                    }
                    continue;
                }
                let p = self.a.get(t, t).clone();
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !self.a.get(i, j).is_multiple_of(&p)));
                match bad {
                    Some(i) => self.add_row(t, i, &Int::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.negate_row(t);
            }
        }
    }
}

fn reduce_over_z(m: &IntMatrix, track: bool) -> Reducer {
    let a = m.lift();
    let mut r =
        Reducer { u: track.then(|| IntMatrix::identity(a.rows())), v: track.then(|| IntMatrix::identity(a.cols())), a };
    r.run();
    r
}

/// A unit `w` modulo `n` with `w * d == gcd(d, n) (mod n)`.
fn normalizing_unit(d: &Int, n: &Int) -> Int {
    let g = d.gcd(n);
    let m = n / &g;
    let dd = (d / &g).mod_floor(&m);
    let t = if m.is_one() {
        Int::one()
    } else {
        let e = dd.extended_gcd(&m);
        e.x.mod_floor(&m)
    };
    let mut w = t;
    while !w.gcd(n).is_one() {
        w += &m;
    }
    w
}

/// Smith normal form over the matrix's coefficient ring.
///
/// Over `Z/n` the reduction runs over `Z` on the lifted matrix and each
/// diagonal entry is then rescaled by a unit to `gcd(d_i, n)`.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let r = reduce_over_z(m, true);
    let (mut u, mut d, v) = (r.u.unwrap(), r.a, r.v.unwrap());
    if let Some(n) = m.coeff().modulus() {
        for i in 0..d.rows().min(d.cols()) {
            if d.get(i, i).is_zero() {
                continue;
            }
            let w = normalizing_unit(d.get(i, i), &n);
            u.scale_row(i, &w);
            d.scale_row(i, &w);
        }
        let c = m.coeff();
        return SmithForm { u: u.over(c), d: d.over(c), v: v.over(c) };
    }
    SmithForm { u, d, v }
}

/// Diagonal of the Smith form over `Z`, without transforms.
pub fn smith_diagonal(m: &IntMatrix) -> Vec<Int> {
    let r = reduce_over_z(m, false);
    (0..r.a.rows().min(r.a.cols())).map(|i| r.a.get(i, i).clone()).collect()
}

/// Kernel of `m` over its coefficient ring, as matrix columns.
///
/// Over `Z` the columns are a basis of the kernel lattice. Over `Z/n` they
/// generate `{x : m x = 0 mod n}`, reduced mod `n` with zero columns dropped.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    let lifted = m.lift();
    let coeff = m.coeff();
    let mut gens: Vec<Vec<Int>> = lifted.transpose().to_rows();
    if let Some(n) = coeff.modulus() {
        for i in 0..rows {
            let mut e = vec![Int::zero(); rows];
            e[i] = n.clone();
            gens.push(e);
        }
    }
    let ech = echelon(gens, rows, true);
    let kernel: Vec<Vec<Int>> = ech.relations.into_iter().map(|r| r[..cols].to_vec()).collect();
    let basis = echelon(kernel, cols, false).rows;
    let columns: Vec<Vec<Int>> = basis
        .into_iter()
        .map(|c| c.into_iter().map(|x| coeff.reduce(x)).collect::<Vec<_>>())
        .filter(|c: &Vec<Int>| c.iter().any(|x| !x.is_zero()))
        .collect();
    IntMatrix::from_columns(cols, &columns).over(coeff)
}

/// Rank over `Q`.
pub fn rational_rank(m: &IntMatrix) -> usize {
    echelon(m.lift().to_rows(), m.cols(), false).rows.len()
}

/// Solves `m x = b` over `Z` exactly, if possible.
pub fn solve_integer(m: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length mismatch");
    let ech = echelon(m.lift().transpose().to_rows(), m.rows(), true);
    let mut rest = b.to_vec();
    let mut x = vec![Int::zero(); m.cols()];
    for (k, row) in ech.rows.iter().enumerate() {
        let p = ech.pivots[k];
        if rest[p].is_zero() {
            continue;
        }
        let (q, r) = rest[p].div_rem(&row[p]);
        if !r.is_zero() {
            return None;
        }
        sub_multiple(&mut rest, row, &q);
        for (xi, ti) in x.iter_mut().zip(&ech.transform[k]) {
            if !ti.is_zero() {
                *xi += ti * &q;
            }
        }
    }
    rest.iter().all(Zero::is_zero).then_some(x)
}

/// Determinant over `Z` of a square matrix by fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> Int {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.lift().to_rows();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Int::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return Int::one();
    }
    sign * &a[n - 1][n - 1]
}

/// Whether a square matrix is invertible over its coefficient ring.
pub fn is_unimodular(m: &IntMatrix) -> bool {
    if !m.is_square() {
        return false;
    }
    let det = determinant(m);
    match m.coeff() {
        Coefficient::Integers => det.abs().is_one(),
        Coefficient::IntegersMod { modulus } => det.gcd(&Int::from(modulus)).is_one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn empty_and_identity() {
        let s = smith_normal_form(&IntMatrix::zeros(0, 0));
        assert_eq!((s.d.rows(), s.d.cols()), (0, 0));
        let id = IntMatrix::identity(2);
        assert_eq!(smith_normal_form(&id).d, id);
    }

    #[test]
    fn two_by_two_example() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, IntMatrix::from_i64(&[&[2, 0], &[0, 4]]));
        assert_eq!(&(&s.u * &m) * &s.v, s.d);
        assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
    }

    #[test]
    fn modular_normalization() {
        let c = Coefficient::modulo(12).unwrap();
        let m = IntMatrix::from_i64(&[&[9, 0], &[0, 8]]).over(c);
        let s = smith_normal_form(&m);
        assert_eq!(&(&s.u * &m) * &s.v, s.d);
        assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
        // Over Z the form is diag(1, 72); 72 is a multiple of 12.
        assert_eq!(s.diagonal(), ints(&[1, 0]));
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
        let k = kernel_basis(&IntMatrix::from_i64(&[&[1, 1]]));
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), ints(&[1, -1]));
        let z4 = Coefficient::modulo(4).unwrap();
        let k = kernel_basis(&IntMatrix::from_i64(&[&[0]]).over(z4));
        assert_eq!(k.column(0), ints(&[1]));
        let k = kernel_basis(&IntMatrix::from_i64(&[&[2]]).over(z4));
        assert_eq!(k.column(0), ints(&[2]));
    }

    #[test]
    fn solving() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve_integer(&m, &ints(&[4, 9])), Some(ints(&[2, 3])));
        assert_eq!(solve_integer(&m, &ints(&[1, 0])), None);
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = echelon(vec![ints(&[2, 3]), ints(&[4, 1])], 2, false);
        let b = echelon(vec![ints(&[6, 4]), ints(&[2, 3])], 2, false);
        assert_eq!(a.rows, b.rows);
        assert_eq!(determinant(&IntMatrix::from_i64(&[&[2, 3], &[4, 1]])), Int::from(-10));
    }
}
