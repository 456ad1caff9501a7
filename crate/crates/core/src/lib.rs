pub mod backend;
pub mod error;
pub mod fourier;
pub mod gauss;
pub mod lattice;
pub mod multidim;
pub mod number;
pub mod parallel;
pub mod selftest;
pub mod theta;
pub mod zeta;

pub use error::{Error, Result};
pub use rug::{Integer, Rational};
