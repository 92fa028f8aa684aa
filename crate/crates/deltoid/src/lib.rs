//! Exact and numerical verification of the deltoid diffusion family.

// Dense matrix code reads better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod diffusion;
pub mod error;
pub mod hypergroup;
pub mod models;
pub mod quadrature;
pub mod report;
pub mod sampling;
pub mod spectral;
