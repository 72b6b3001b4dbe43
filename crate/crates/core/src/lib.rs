//! Exact computation of Lie biderivations of finite-dimensional triangular
//! algebras over the rationals, and their decomposition into inner, extremal,
//! and central parts.

pub mod algebra;
pub mod bider;
pub mod cli;
pub mod decompose;
pub mod io;
pub mod lemmas;
pub mod linalg;
pub mod triangular;

pub use bider::{BilinearMap, MapLaw};
pub use algebra::{AlgebraError, Element, FiniteAlgebra};
pub use linalg::{Rational, SparseMatrix};
pub use triangular::{TriangularAlgebra, TriangularError};
