//! Exact and arbitrary-precision computations for the quantum minimal-surface
//! recursions: rational polynomial families, positivity shooting, the
//! tau-polynomial tower, Bessel-function based Riccati/Schrödinger/Darboux
//! structures and the semiclassical series.

pub mod exact_algebra;
pub mod error;
pub mod series;

pub use error::{QmsError, Result};
pub mod special;
pub mod quadrature;
pub mod solver;
pub mod tau;
pub mod riccati;
pub mod darboux;
pub mod semiclassical;
pub mod verify;
