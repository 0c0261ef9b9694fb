//! Constructible images of polynomial and rational maps over Q.
//!
//! The image of a closed set `Γ ⊆ Spec B × A^n` under the projection to `Spec B` is
//! computed as a finite union of locally closed sets `A \ (D_1 ∪ … ∪ D_a)`. Each
//! locally closed piece comes from one relative boundary hull computation: the
//! closure `A` of the projection is an elimination ideal, and the hull `D` is read
//! off the points at infinity of a fiber-reduced `Γ`. Iterating over the hulls
//! (linearly, or through a bipartite bookkeeping graph) exhausts the image.
//!
//! Module map:
//! - [`polyring`]: exact polynomial arithmetic, monomial orders, parsing.
//! - [`groebner`]: Buchberger engine and the ideal toolbox.
//! - [`geometry`]: closed and constructible sets with radical-blind predicates.
//! - [`chevalley`]: hull strategies, fiber reduction, the two outer iterations.
//! - [`orbits`]: accelerations for orbits of algebraic group actions.
//! - [`cli`]: problem files, cover construction, point oracle, corpus runner.

pub mod chevalley;
pub mod cli;
pub mod error;
pub mod geometry;
pub mod groebner;
pub mod orbits;
pub mod par;
pub mod polyring;

pub use error::{Error, Result};
