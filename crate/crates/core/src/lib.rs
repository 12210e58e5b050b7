//! Exact q-series kernel for Watson's third order mock theta functions
//! `omega(q)` and `nu(q)`, their two-variable generalizations, and the
//! partition functions `p_omega(n)` and `p_nu(n)` they generate.
//!
//! - [`series`]: truncated power series in `q` over big integers, q-Pochhammer
//!   products and Gaussian binomials
//! - [`bivariate`]: truncated series in `(z, q)` and the named series builders
//! - [`partitions`]: brute-force partition enumeration oracles
//! - [`snsum`]: the finite sums `S_n(i)` and the polynomial identity chain
//!   built on them
//! - [`catalog`]: the registry of identities and their verification driver

pub mod bivariate;
pub mod catalog;
pub mod partitions;
pub mod series;
pub mod snsum;

pub use bivariate::{TailBound, ZQSeries};
pub use catalog::{Catalog, IdentityKind, IdentityRecord, Orders, Status, VerifyReport};
pub use partitions::{Partition, PartitionMode};
pub use series::{Coefficient, Mismatch, Monomial, QSeries, Sign};
pub use snsum::{Chain, SnPolynomial, Verdict};

use num_bigint::BigInt;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("constant term {constant} is not a unit over the integers")]
    NonUnitConstant { constant: BigInt },
    #[error("infinite product does not converge coefficientwise: {reason}")]
    DivergentProduct { reason: &'static str },
    #[error("polynomial division leaves a remainder (first stray exponent {exponent})")]
    InexactDivision { exponent: usize },
    #[error("polynomial degree {degree} exceeds reversal degree {bound}")]
    DegreeExceeds { degree: usize, bound: usize },
    #[error(
        "z_order {z_order} is too small to specialize at q_order {q_order} (row valuation slope {slope})"
    )]
    InsufficientZOrder {
        z_order: usize,
        q_order: usize,
        slope: usize,
    },
    #[error("coefficient index (z^{z_degree}, q^{q_exponent}) is outside the truncation")]
    IndexOutOfRange { z_degree: usize, q_exponent: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("unknown builder `{0}`")]
    UnknownBuilder(String),
}

pub type Result<T> = std::result::Result<T, Error>;
