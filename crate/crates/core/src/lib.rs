//! Exact-arithmetic lower bounds on the maximal determinant `D(n)` of
//! `n x n` matrices with entries in `{+1, -1}`.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: dense sign/bit matrices, fraction-free determinants, the
//!   beta-map between `{+1,-1}` and `{0,1}` matrices, complementary minors.
//! * [`constructions`]: Sylvester, Paley I/II (prime fields) and Kronecker
//!   Hadamard matrices.
//! * [`orders`]: the registry of realizable Hadamard orders and the gap
//!   functions delta, gamma and lambda.
//! * [`bounds`]: every lower/upper bound formula, evaluated in log-space.
//! * [`witness`]: explicit matrices certifying the bounds, checked with
//!   exact determinants.
//! * [`oracle`]: exhaustive `D(n)` for tiny `n` and reference values.
//! * [`selftest`]: the acceptance criteria, runnable from tests and the CLI.
//!
//! Exact integer code is generic over [`ExactScalar`] and log-space bound
//! code over [`Real`]; the aliases below pin the types used by the CLI.

pub mod bounds;
pub mod constructions;
mod error;
pub mod exact;
pub mod oracle;
pub mod orders;
mod scalar;
pub mod selftest;
pub mod witness;

pub use error::{Error, Result};
pub use scalar::{ExactScalar, Real};

/// Arbitrary-precision integer carrying every determinant value.
pub type ExactInt = num_bigint::BigInt;

/// Double-precision log-space value, the default for reports.
pub type LogValue = bounds::LogValue<f64>;
/// Double-precision bound report.
pub type BoundReport = bounds::BoundReport<f64>;
/// Double-precision bound report entry.
pub type BoundEntry = bounds::BoundEntry<f64>;

pub use constructions::{kronecker, paley_one, paley_two, quadratic_character, sylvester};
pub use exact::{det_exact, is_hadamard, BinMatrix, SignMatrix};
pub use orders::{GapTable, OrderRegistry, RegistryMode};
pub use witness::{best_witness, WitnessCertificate, WitnessConfig};

/// Largest order for which exact determinants are computed by default.
pub const DEFAULT_EXACT_CAP: usize = 256;
