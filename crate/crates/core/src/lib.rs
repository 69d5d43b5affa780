//! Exact algebra for J-homomorphism vanishing arguments on compact Lie groups.
//!
//! A circle subgroup `S` of a group `G` together with a representation `ρ`
//! whose restriction to `S` is known yields integer linear relations among
//! the stable classes `t^j = J(βξ^j)`. This crate generates those relations
//! from circle characters (sums, exterior powers and spinor characters of
//! weight multisets), adds the Adams relations `t^j = k·t^{kj}` valid after
//! localizing at a prime `p ∤ k` together with `2·t^0 = 0`, and decides by
//! exact Hermite reduction whether a target class dies after localization.
//! Positive decisions carry an integer certificate that can be replayed
//! without any reference to the reduction that produced it.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, reports and
//! the command line front-end live in the `bordcert` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod character;
pub mod decider;
pub mod error;
pub mod halfint;
pub mod hnf;
pub mod pipeline;
pub mod relations;

pub use catalog::{builtin_cases, CaseSpec, PrintedRelation, RepRecipe};
pub use character::{Character, Parity};
pub use decider::{Certificate, Multiple, RelationMatrix, Verdict};
pub use error::Error;
pub use halfint::HalfInt;
pub use pipeline::{RelationSystem, Source, SystemOptions};
pub use relations::{GeneratorWindow, Relation};
