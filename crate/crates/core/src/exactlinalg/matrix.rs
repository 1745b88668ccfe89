use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

pub type Int = BigInt;

/// The coefficient ring of a matrix or module: `Z` or `Z/n` with `n >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coefficient {
    Integers,
    IntegersMod { modulus: u64 },
}

impl Coefficient {
    pub fn modulo(modulus: u64) -> Result<Self, LinalgError> {
        if modulus < 2 {
            return Err(LinalgError::InvalidModulus(modulus));
        }
        Ok(Coefficient::IntegersMod { modulus })
    }

    /// The modulus as an integer, `None` over `Z`.
    pub fn modulus(&self) -> Option<Int> {
        match self {
            Coefficient::Integers => None,
            Coefficient::IntegersMod { modulus } => Some(Int::from(*modulus)),
        }
    }

    pub fn reduce(&self, x: Int) -> Int {
        match self {
            Coefficient::Integers => x,
            Coefficient::IntegersMod { modulus } => x.mod_floor(&Int::from(*modulus)),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Integers => write!(f, "Z"),
            Coefficient::IntegersMod { modulus } => write!(f, "Z/{modulus}"),
        }
    }
}

/// Dense row-major integer matrix. Maps act on column vectors, so an
/// `m x n` matrix is a homomorphism from rank `n` to rank `m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    coeff: Coefficient,
    entries: Vec<Int>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Int>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(IntMatrix { rows, cols, coeff: Coefficient::Integers, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, coeff: Coefficient::Integers, entries: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Int::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Int) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[Int]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.entries[i * cols + i] = d.clone();
        }
        m
    }

    /// Builds a matrix from nested rows; `cols` is needed for the 0-row case.
    pub fn from_rows(rows: Vec<Vec<Int>>, cols: usize) -> Result<Self, LinalgError> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::ShapeMismatch(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            entries.extend(row);
        }
        Ok(IntMatrix { rows: nrows, cols, coeff: Coefficient::Integers, entries })
    }

    /// Convenience constructor for literal matrices; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::from_rows(data, cols).expect("ragged literal matrix")
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Int>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.entries[i * cols + j] = x.clone();
            }
        }
        m
    }

    /// Reinterprets the matrix over `coeff`, reducing entries when needed.
    pub fn over(mut self, coeff: Coefficient) -> Self {
        self.coeff = coeff;
        if coeff != Coefficient::Integers {
            for e in self.entries.iter_mut() {
                *e = coeff.reduce(std::mem::take(e));
            }
        }
        self
    }

    /// Same entries, read as an integer matrix.
    pub fn lift(&self) -> Self {
        IntMatrix { coeff: Coefficient::Integers, ..self.clone() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn coeff(&self) -> Coefficient {
        self.coeff
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Int {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Int) {
        let v = self.coeff.reduce(value);
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Int> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Int>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        t.coeff = self.coeff;
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.entries[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if self.coeff != rhs.coeff {
            return Err(LinalgError::CoefficientMismatch(self.coeff, rhs.coeff));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        out.coeff = self.coeff;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        if out.coeff != Coefficient::Integers {
            for e in out.entries.iter_mut() {
                *e = out.coeff.reduce(std::mem::take(e));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let s = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Int::zero(), |acc, (a, b)| acc + a * b);
                self.coeff.reduce(s)
            })
            .collect()
    }

    fn zip_with(&self, rhs: &IntMatrix, f: impl Fn(&Int, &Int) -> Int) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        assert_eq!(self.coeff, rhs.coeff, "coefficient mismatch");
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| self.coeff.reduce(f(a, b))).collect();
        IntMatrix { rows: self.rows, cols: self.cols, coeff: self.coeff, entries }
    }

    pub fn scale(&self, c: &Int) -> IntMatrix {
        let entries = self.entries.iter().map(|a| self.coeff.reduce(a * c)).collect();
        IntMatrix { entries, ..self.clone() }
    }

    /// Horizontal concatenation `[a | b | ...]`.
    pub fn hcat(rows: usize, parts: &[&IntMatrix]) -> IntMatrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        if let Some(p) = parts.first() {
            out.coeff = p.coeff;
        }
        let mut off = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hcat row mismatch");
            for r in 0..rows {
                for c in 0..p.cols {
                    out.entries[r * cols + off + c] = p.get(r, c).clone();
                }
            }
            off += p.cols;
        }
        out
    }

    /// Vertical concatenation.
    pub fn vcat(cols: usize, parts: &[&IntMatrix]) -> IntMatrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut entries = Vec::with_capacity(rows * cols);
        for p in parts {
            assert_eq!(p.cols, cols, "vcat column mismatch");
            entries.extend(p.entries.iter().cloned());
        }
        let coeff = parts.first().map_or(Coefficient::Integers, |p| p.coeff);
        IntMatrix { rows, cols, coeff, entries }
    }

    pub fn block_diag(parts: &[&IntMatrix]) -> IntMatrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            out.paste(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &IntMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.entries[(r0 + r) * self.cols + c0 + c] = block.get(r, c).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> IntMatrix {
        let mut out = Self::zeros(rows, cols);
        out.coeff = self.coeff;
        for r in 0..rows {
            for c in 0..cols {
                out.entries[r * cols + c] = self.get(r0 + r, c0 + c).clone();
            }
        }
        out
    }

    pub fn select_columns(&self, idx: impl IntoIterator<Item = usize>) -> IntMatrix {
        let cols: Vec<Vec<Int>> = idx.into_iter().map(|c| self.column(c)).collect();
        let mut m = Self::from_columns(self.rows, &cols);
        m.coeff = self.coeff;
        m
    }

    pub fn select_rows(&self, idx: impl IntoIterator<Item = usize>) -> IntMatrix {
        let rows: Vec<Vec<Int>> = idx.into_iter().map(|r| self.row(r).to_vec()).collect();
        let mut m = Self::from_rows(rows, self.cols).expect("rows share a width");
        m.coeff = self.coeff;
        m
    }

    pub fn max_abs_entry(&self) -> Int {
        self.entries.iter().map(|e| e.abs()).max().unwrap_or_else(Int::zero)
    }

    // Elementary operations used by the normal-form routines.

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.entries.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.entries.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// `row[dst] += k * row[src]`
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.entries[src * self.cols + c];
            if !v.is_zero() {
                let add = v * k;
                self.entries[dst * self.cols + c] += add;
            }
        }
    }

    /// `col[dst] += k * col[src]`
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.entries[r * self.cols + src];
            if !v.is_zero() {
                let add = v * k;
                self.entries[r * self.cols + dst] += add;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let e = &mut self.entries[r * self.cols + c];
            *e = -std::mem::take(e);
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, k: &Int) {
        for c in 0..self.cols {
            let e = &mut self.entries[r * self.cols + c];
            *e = &*e * k;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix<{}>{}x{}[", self.coeff, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.checked_mul(rhs).expect("matrix product")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &IntMatrix {
    type Output = IntMatrix;
    fn neg(self) -> IntMatrix {
        let entries = self.entries.iter().map(|a| self.coeff.reduce(-a)).collect();
        IntMatrix { entries, ..self.clone() }
    }
}
