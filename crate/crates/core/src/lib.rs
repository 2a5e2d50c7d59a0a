//! Exact computer algebra for degree-zero Gromov–Witten theory of curves.
//!
//! The crate is organised bottom-up:
//!
//! - [`combinatorics`]: rationals, partitions, Lagrange numbers, Bernoulli numbers
//! - [`jet`]: Laurent-in-`V1` polynomials in the jet variables `V1, V2, ...`
//! - [`pole`]: finite expansions in powers of `1/(λ - V)` with the total derivative
//! - [`loop_zero`]: the degree-zero loop equation, its triangular system and `W_g`
//! - [`series`]: truncated multivariate power series over the rationals
//! - [`hodge`]: the `V(T)` series, ψ–λ Hodge generating series and tables
//! - [`curve`]: degree-zero free energies of a genus-`h` target curve
//! - [`verify`]: named invariant suites shared by the CLI and the test-suite

pub mod combinatorics;
pub mod curve;
pub mod error;
pub mod hodge;
pub mod jet;
pub mod loop_zero;
pub mod pole;
pub mod rational;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use rational::Rational;
