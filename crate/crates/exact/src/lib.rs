//! Exact arithmetic over finite fields: prime and extension fields, univariate
//! and multivariate polynomials, rational functions, dense linear algebra,
//! canonical subspaces and Smith normal form over `F_q[t]`.

pub mod error;
pub mod extfield;
pub mod field;
pub mod matrix;
pub mod mpoly;
pub mod poly;
pub mod ratfunc;
pub mod smith;
pub mod subspace;

pub use error::AlgebraError;
pub use extfield::ExtField;
pub use field::{Field, FieldCtx, FieldScalar, Ring};
pub use matrix::{column_space, inverse, kernel, left_kernel, rank, rref, row_space, solve, Echelon, Matrix};
pub use mpoly::{MPoly, MPolyRing};
pub use poly::{coefficient_vectors, Poly};
pub use ratfunc::{RatFunc, RatFuncField};
pub use smith::{smith_normal_form, PolyRing, SmithForm};
pub use subspace::Subspace;
