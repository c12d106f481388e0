//! Finite rings, skew polynomial extensions `R[x;σ]` and their truncations,
//! and bounded decision procedures for idempotent-related ring properties.

pub mod endo;
pub mod error;
pub mod literal;
pub mod properties;
pub mod ring;
pub mod search;
pub mod skew;
pub mod theorems;
pub mod verdict;
pub mod zoo;

pub use endo::Endomorphism;
pub use error::{Error, Result};
pub use literal::{ElemLit, Term};
pub use properties::{IrSide, Property};
pub use ring::{ElementId, FiniteRing, RingTables, Side};
pub use skew::SkewPolynomial;
pub use theorems::{Bounds, ClaimReport, Status};
pub use verdict::{Scan, Verdict};
pub use zoo::{EndoSpec, RegistryEntry, RingSpec};
