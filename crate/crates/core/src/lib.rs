//! Certified evaluation of normalized Bessel functions and numerical
//! verification of Redheffer-type inequalities built from them.
//!
//! The crate is layered bottom-up:
//!
//! - [`series`]: `𝒥_ν`, `𝓘_ν`, derivatives, Mittag-Leffler ratios and the
//!   Turánian, each returned with an absolute error bound.
//! - [`zeros`]: certified enclosures of `j_{ν,n}`.
//! - [`rayleigh`]: Rayleigh sums by recurrence and by zero summation.
//! - [`number_theory`]: Bernoulli numbers, `ζ(2m)`, `η(2m)`.
//! - [`inequality`]: the theorem catalogue, margins, sharpness probes and
//!   monotonicity scans.
//! - [`closed_form`]: elementary oracles.

pub mod closed_form;
pub mod eft;
pub mod error;
pub mod inequality;
pub mod number_theory;
pub mod rayleigh;
pub mod series;
pub mod zeros;

pub use error::{Error, Result};
pub use series::{Order, SeriesValue};
pub use zeros::{CertifiedZero, ZeroTable};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
