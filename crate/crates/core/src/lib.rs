//! Periodic Fourier sparsity of Boolean functions: exact constructions,
//! lower bounds, a brute-force oracle, NMQC bias games, depth-2 protocols
//! and probabilistic polynomials from randomized phase families.
//!
//! Conventions: a function on `n` bits is a truth table indexed little-endian
//! (`x_i` is bit `i - 1`), subsets are `u32` masks and every phase is a
//! [`Dyadic`] rational read as `cos(pi * sum phi_S x^S)`.

pub mod anf;
pub mod approx;
pub mod boolean;
pub mod depth2;
pub mod dyadic;
pub mod error;
pub mod fnspec;
pub mod formats;
pub mod fourier;
pub mod nmqc;
pub mod periodic;
pub mod transform;

pub use anf::AnfPolynomial;
pub use boolean::{make_family, BooleanFunction, Family, Subset, SymmetricProfile};
pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use fnspec::{parse_function_spec, FunctionSpec};
pub use fourier::FourierSpectrum;
pub use periodic::{PeriodicRepresentation, VerificationReport};
