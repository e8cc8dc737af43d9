//! Approximate linear matroid intersection over prime fields.
//!
//! The crate is organised bottom-up: [`field`] and [`linalg`] provide exact
//! GF(p) arithmetic, [`span`] and [`bilinear`] the randomized closure
//! tests, [`exact`] the exchange-graph solvers used on sparsified
//! instances, and [`approx`] the multiplicative-weights sparsification
//! loops and the sketch-then-solve pipelines. [`solver`] registers every
//! pipeline behind one trait so front ends can select them by name.

pub mod error;
pub mod field;
pub mod linalg;
pub mod span;
pub mod sketch;
pub mod bilinear;
pub mod exact;
pub mod approx;
pub mod report;
pub mod io;
pub mod gen;
pub mod solver;
pub mod bench;

pub use error::{Error, Result};
