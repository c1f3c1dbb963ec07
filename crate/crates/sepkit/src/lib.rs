//! sepkit: separability analysis for bipartite quantum states.
//!
//! The crate provides, in rough dependency order:
//!
//! - [`mat`]: dense complex matrices, a Hermitian Jacobi eigensolver,
//!   Kronecker/partial-transpose/partial-trace operations, trace norm.
//! - [`states`]: bipartite density matrices, separable mixtures,
//!   maximally entangled states, Schmidt decomposition, seeded random
//!   ensembles.
//! - [`maps`]: Hermiticity-preserving linear maps stored as Choi
//!   matrices, with the positive / k-positive / completely positive
//!   hierarchy and Kraus extraction.
//! - [`witness`]: entanglement witnesses, the witness <-> map
//!   correspondence, block positivity, non-complete-positivity and
//!   nondecomposability certificates, and the Horodecki map scan.
//! - [`separability`]: PPT test, operator-valued block representation,
//!   product-structure test, Frank-Wolfe distance to the separable set,
//!   Bell distance bound check, and an aggregate analyzer.
//! - [`io`]: a JSON file format for states, witnesses, and maps used by
//!   the `sepkit` command-line tool.
//!
//! Positivity of a map (equivalently, block positivity of a witness)
//! has no finite spectral test, so those checks are numeric: negative
//! answers come with a certified violating vector, while positive
//! answers mean a multi-start search found no violation.

pub mod io;
pub mod maps;
pub mod mat;
pub mod separability;
pub mod states;
pub mod tol;
pub mod witness;

pub(crate) mod optim;

#[cfg(test)]
pub(crate) mod testutil;

pub use mat::{C64, CMatrix, Side};
pub use states::BipartiteState;
