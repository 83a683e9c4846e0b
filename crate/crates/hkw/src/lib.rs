//! Perturbed sl(n) Khovanov-Rozansky homology `HKh_w` computed from matrix factorizations.

pub mod cube;
pub mod diagram;
pub mod error;
pub mod filtered;
pub mod graph;
pub mod homology;
pub mod jones;
pub mod koszul;
pub mod linalg;
pub mod local;
pub mod mf;
pub mod moves;
pub mod poly;
pub mod potential;
pub mod reduce;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{Poly, Q};
pub use potential::Potential;
