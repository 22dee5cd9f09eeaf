//! Deterministic blackbox identity testing for depth-3 (ΣΠΣ) circuits with bounded top fanin.
//!
//! The crate provides exact field arithmetic ([`field`]), the circuit model and a sparse
//! expansion oracle ([`circuit`]), Vandermonde variable reduction ([`reduce`]), ideal,
//! path and certificate machinery with a graded membership oracle ([`ideals`]) and the
//! explicit hitting set together with the testers built on it ([`hitting`]).

pub mod circuit;
pub mod error;
pub mod field;
pub mod hitting;
pub mod ideals;
pub mod linalg;
pub mod reduce;

pub use circuit::{AffineCircuit, Circuit, LinearForm, MultiplicationTerm, Point, SparsePoly};
pub use error::{Error, Result};
pub use field::{ensure_min_size, find_irreducible, Embedding, Field, FieldDescription, FieldElement, FieldKind};
pub use ideals::{Certificate, IdealGens, Path};
pub use reduce::ReductionMap;
pub use hitting::{HittingPoint, HittingSet, Oracle, Outcome, Verdict};
