//! Exact combinatorics on the p-Bratteli diagram of hook partitions.
//!
//! The crate builds the diagram floor by floor, enumerates its paths in the
//! compressed start-index form, and computes descent statistics, the
//! p^k-Eulerian polynomials and the p^k-Fibonacci numbers together with their
//! closed forms, recurrences and generating functions. Every closed form has a
//! brute-force counterpart so that the two can be compared.
//!
//! Polynomials and series are generic over an integer ring; the aliases at
//! the crate root fix the ring to `BigInt`.

pub mod cache;
pub mod diagram;
mod error;
pub mod eulerian;
mod eulerian_tables;
pub mod fibonacci;
pub mod genfun;
pub mod hook;
pub mod paths;
pub mod poly;
pub mod stats;
pub mod verify;

pub use num_bigint::BigInt;

pub use diagram::{DiagramParams, Edge, VertexLabel};
pub use error::{Error, Result};
pub use hook::{Block, HookPartition, IndexSplit};
pub use paths::{BlockAt, Path};
pub use poly::{Polynomial, Ring};
pub use stats::{DescentProfile, DescentRules};

/// Exact integer polynomial in one variable.
pub type IntPolynomial = Polynomial<BigInt>;

/// Rational power series with exact integer coefficients.
pub type RationalSeries = genfun::Series<BigInt>;
