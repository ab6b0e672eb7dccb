//! Kirby calculus for 4-manifold handlebodies.
//!
//! The crate is organised bottom-up:
//!
//! * [`laurent`]: exact multivariate Laurent polynomials over the integers.
//! * [`knot`]: crossing-code knot diagrams and the Alexander polynomial,
//!   computed from a Seifert matrix and, independently, by Fox calculus.
//! * [`handlebody`]: handle structures and their invariants (Euler
//!   characteristic, signature, homology of the manifold and its boundary).
//! * [`moves`]: legality-checked Kirby moves and a certifying script checker.
//! * [`surgery`]: knot surgery on a c-embedded torus, both on handle data and
//!   on Seiberg-Witten polynomials.
//! * [`corpus`]: the built-in manifolds, scripts and catalogs, and
//!   [`acceptance`]: the end-to-end checks run by `kirbykit corpus-test`.

pub mod acceptance;
pub mod corpus;
mod error;
pub mod handlebody;
pub mod knot;
pub mod laurent;
pub mod moves;
pub mod snf;
pub mod surgery;

pub use error::{Error, Result};
pub use handlebody::{AbelianGroup, Handle, HandleKind, HandleStructure, Invariants};
pub use knot::KnotDiagram;
pub use laurent::{LaurentPoly, Monomial};
pub use moves::{Certificate, Move, MoveScript};
pub use surgery::{SwInvariant, TorusMarking};
