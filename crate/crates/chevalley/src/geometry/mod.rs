//! Closed subsets of `Spec B` (or of the total space) up to radical, and
//! constructible sets written as unions of multiple differences.
//!
//! No radical is ever computed. Every set-level predicate reduces to radical
//! membership, so two ideals with the same zero set are interchangeable.

mod closed;
mod constructible;

pub use closed::ClosedSet;
pub use constructible::{ConstructibleSet, MultipleDifference};
