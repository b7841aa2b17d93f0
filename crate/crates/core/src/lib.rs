//! Arithmetic of imaginary quadratic fields `Q(sqrt(-d))`.
//!
//! The crate computes class numbers by counting reduced binary quadratic
//! forms, decides whether a rational prime splits completely in the Hilbert
//! class field (a prime does so exactly when the principal form represents
//! it), and evaluates `L(1, chi_d)` together with the lower-bound ratio for
//! the least such prime.

pub mod analytic;
pub mod arith;
pub mod cache;
pub mod fixture;
pub mod forms;
pub mod search;

pub use arith::{FundamentalDiscriminant, PrimeRange};
pub use forms::{BinaryQuadraticForm, RepresentationWitness};
pub use search::{ScanRecord, SplitPrimeRecord};
