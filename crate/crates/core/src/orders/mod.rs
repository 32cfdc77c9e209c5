//! The set of realizable Hadamard orders and the gap functions over it.

mod gaps;
mod registry;

pub use gaps::{gamma, lambda, sieve, GapTable, DEFAULT_SIEVE_BOUND};
pub use registry::{delta, Delta, OrderRegistry, Realization, RegistryMode, KNOWN_ORDERS_LIMIT};
