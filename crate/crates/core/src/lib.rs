//! Exact energies of integral circulant graphs (gcd graphs).
//!
//! The crate covers three layers:
//!
//! * [`number_theory`]: factorization, Möbius, Euler totient, Ramanujan sums
//!   and divisor enumeration, generic over the integer scalar.
//! * [`model`] and [`energy`]: exponent tuples, delta vectors and divisor sets
//!   for order `p^s`, the closed-form prime-power energy and an independent
//!   spectral evaluation for arbitrary `n`.
//! * [`transform`] and [`search`]: the energy-increasing rewrites on delta
//!   vectors with full traces, plus brute-force maximizer enumeration used as
//!   the verifier for the closed forms.
//!
//! All energies are exact. Nothing in the crate evaluates an energy in
//! floating point.

pub mod energy;
pub mod error;
pub mod model;
pub mod number_theory;
pub mod search;
pub mod transform;

/// Arbitrary-precision non-negative integer.
pub type Natural = num_bigint::BigUint;
/// Arbitrary-precision signed integer.
pub type Integer = num_bigint::BigInt;
/// Arbitrary-precision rational, always kept in lowest terms.
pub type ExactRational = num_rational::BigRational;

pub use energy::{
    emax_alternative, emax_closed, emin_closed, energy_general, energy_prime_power, h_equidistant,
    h_value, spectrum_gcd_graph, Energeticity, EnergyReport, Method, Spectrum,
};
pub use error::{Error, Result};
pub use model::{AdmissibleTuple, DeltaVector, DivisorSet, ExponentTuple, PrimePowerOrder};
pub use search::{brute_force_emax_general, brute_force_emax_prime_power, MaximizerReport};
pub use transform::{normalize, replay, RuleInstance, Trace, TransformLabel, TransformStep};
