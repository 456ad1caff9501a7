//! Integers, rationals, Jacobi symbols, cyclotomic integers and the
//! multiprecision complex type shared by the rest of the crate.

pub mod cyclotomic;
pub mod jacobi;
pub mod prec;
pub mod rational;
pub mod roots;

pub use cyclotomic::{cyclotomic_polynomial, CyclotomicInt};
pub use jacobi::{jacobi, jacobi_symbol};
pub use prec::{PrecComplex, DEFAULT_PREC_BITS, DEFAULT_TOL};
pub use rational::{format_rational, parse_rational, rat};
pub use roots::{cyclo_embed, eighth_root, epsilon_a, root_of_unity, sqrt_as_cyclotomic};
