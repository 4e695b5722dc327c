//! Majorization incomparability on probability spectra.
//!
//! Spectra are kept as sorted probability vectors inside the Weyl chamber
//! `W_{d-1}`. The crate covers the majorization preorder and its meet,
//! catalytic comparability through the generalized entropy family, three
//! incomparability measures, the canonical `u(k)` / `χ(q)` families, and
//! chamber-relative volumes of majorization cones (exact rational and
//! Monte Carlo).
//!
//! Every numeric routine is generic over [`Weight`] where it makes sense, so
//! the same code runs on `f64` (with tolerance `1e-12`) and on
//! [`Rational`] (exact, zero tolerance).
#![no_std]

extern crate alloc;

pub mod entropies;
pub mod error;
pub mod families;
pub mod geometry;
mod linalg;
pub mod measures;
pub mod spectra;
pub mod weight;

pub use error::{Error, Result};
pub use spectra::{
    compare, meet, partial_sums, tensor, ComparisonOutcome, Relation, Sign, Spectrum,
};
pub use weight::{Rational, Weight};

/// Equality tolerance on partial-sum comparisons for floating spectra.
pub const EPS: f64 = 1e-12;
