//! Exact harmonic analysis over the field of p-adic numbers.
//!
//! Everything symbolic in this crate is computed in exact arithmetic:
//! elements of `Q_p` are exact rationals with exact valuations, character
//! values live in cyclotomic fields `Q(zeta_{p^K})`, and distribution
//! pairings such as Igusa local zeta functions are exact rational functions
//! of `t = p^{-s}`. Floating point enters only at the outermost layer
//! ([`numeric`]), where infinite tails have already been summed in closed
//! form, so numeric results are exact up to final rounding.
//!
//! The crate is `no_std`-compatible (`alloc` required); the `std` feature
//! (default) only adds `std::error::Error` impls and keeps the dependency
//! stack on their std builds.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod ball;
pub mod covering;
pub mod cyclotomic;
pub mod error;
pub mod kernel;
pub mod laurent;
pub mod multiplier;
pub mod numeric;
pub mod oracle;
pub mod point;
pub mod poly;
pub mod prime;
pub mod riesz;
pub mod scalar;
pub mod schwartz;
pub mod sobolev;
pub mod solve;
pub mod zeta;

#[cfg(feature = "suite")]
pub mod suite;

pub use ball::Ball;
pub use covering::{SphereAnalysis, SphereCovering, TreeBudget};
pub use cyclotomic::CycScalar;
pub use error::Error;
pub use laurent::{LaurentPoly, LaurentRational};
pub use numeric::{Complex, Ctx, NumericValue, Real};
pub use point::Point;
pub use poly::IntPolynomial;
pub use prime::Prime;
pub use scalar::{PAbs, PadicScalar, Valuation};
pub use schwartz::{FourierDirection, Term, TestFunction};
pub use zeta::EllipticSymbol;

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
