//! Secure multipath transmission with partial-leakage guarantees, exactly.
//!
//! A sender splits traffic over `h` noiseless channels; an eavesdropper may
//! observe any single set of channels from a known collection of wiretap
//! sets. The sender protects a uniform message with an independent uniform
//! key, and for each wiretap set demands a lower bound on the eavesdropper's
//! remaining uncertainty about the message. This crate decides which
//! `(message rate, key rate, equivocation bounds)` tuples are achievable,
//! constructs explicit linear codes over GF(q) attaining achievable ones,
//! and verifies the secrecy of any such code two independent ways.
//!
//! * [`model`]: problem instances, rate tuples, validation.
//! * [`region`]: exact rational feasibility and key-rate minimization,
//!   with witnesses and Farkas certificates.
//! * [`gf`]: GF(p^m) arithmetic and exact linear algebra.
//! * [`synth`]: generator-matrix construction for feasible tuples.
//! * [`codec`]: the deterministic encoder and decoder.
//! * [`audit`]: rank-based leakage plus a brute-force entropy oracle.
//!
//! All rate arithmetic is exact rational; all entropies of the synthesized
//! codes are exact rationals in log-q units. Nothing is ever rounded, so
//! every check in this crate is a zero-tolerance equality or inequality.

pub mod audit;
pub mod codec;
pub mod gf;
mod lp;
pub mod model;
pub mod rational;
pub mod region;
pub mod rng;
pub mod synth;

pub use model::{validate_instance, ProblemInstance, RateAllocation, RateTuple, ValidationReport};
pub use rational::Rational;
pub use region::{
    check_membership, contains, minimize_key_rate, scale_to_integers, Certificate,
    FeasibilityResult, IntegerParameters, KeyRateSolution, RegionError, RegionQuery,
    RegionVariant,
};
