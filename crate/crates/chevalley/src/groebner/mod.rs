//! Gröbner bases over Q (fraction-free over Z internally) and over `F_p`, and the
//! ideal operations built on them: elimination, intersection, quotients,
//! saturation, radical membership and dimension.

pub mod coeff;
pub mod dimension;
pub mod engine;
mod ideal;

pub use dimension::{dimension_of_monomials, DimensionReport};
pub use engine::{EngineStats, Terms};
pub use ideal::{gb_call_count, reduced_gb_mod_p, reduced_gb_of, Ideal};
pub(crate) use ideal::full_mask;
