//! Modules over `F_q[X_1..X_r]/(X_i^p)`: constructions, Jordan types, constant
//! rank decisions, generic kernels and images, and the vector bundles they
//! define on the projective line.

pub mod chern;
pub mod decomp;
pub mod error;
pub mod graded;
pub mod jordan;
pub mod lattice;
pub mod module;
pub mod rank;
pub mod sheaf;

pub use error::{CoreError, Result};
pub use jordan::{generic_power_ranks, generic_rank, jordan_type, jordan_type_in, JordanType, PointSpec};
pub use module::{validate_generators, KEModule, Subquotient, Violation};
pub use rank::{constant_jordan_type, constant_jrank_decide, CjtDecision, RankDecision, RankWitness, WitnessPoint};
