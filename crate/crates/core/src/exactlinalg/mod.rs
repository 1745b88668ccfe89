//! Exact linear algebra over `Z` and `Z/n`.
//!
//! Everything reduces to lattices in `Z^c`: a module over `Z/n` is the
//! subquotient `Z^c / n Z^c`, and homology is a quotient of two lattices whose
//! isomorphism type comes from a Smith normal form over `Z`.

mod complex;
mod group;
mod lattice;
mod matrix;
mod smith;

use thiserror::Error;

pub use complex::{check_long_exact, homology_at, Complex, DegreeMaps, LesFailure, LesReport, LesSpot};
pub use group::FgAbGroup;
pub use lattice::{exact_at, Lattice, Subquotient, SubquotientMap};
pub use matrix::{Coefficient, Int, IntMatrix};
pub use smith::{
    determinant, echelon, is_unimodular, kernel_basis, rational_rank, smith_diagonal, smith_normal_form, solve_integer,
    Echelon, SmithForm,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("coefficient mismatch: {0} vs {1}")]
    CoefficientMismatch(Coefficient, Coefficient),
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("consecutive differentials do not compose to zero at degree {0}")]
    CompositionNotZero(i64),
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
}
