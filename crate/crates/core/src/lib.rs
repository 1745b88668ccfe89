//! Exact twisted-complex calculus over negative dg-categories, weight
//! homology via the kernel/image formula, and the desk-scale homology
//! theories built on it (SNC configurations, blow-ups, Kato-Suslin).

pub mod dgcore;
pub mod exactlinalg;
pub mod kshom;
pub mod samples;
pub mod sncweight;
pub mod twisted;
pub mod weighthom;

pub use dgcore::{HomElement, NegDgCategory, ObjId, ValidationReport};
pub use exactlinalg::{Coefficient, FgAbGroup, Int, IntMatrix};
pub use twisted::{TwistedComplex, TwistedMorphism};
