//! Exact computational engine for moments, classical cumulants, finite-N
//! free-cumulant precursors and asymptotic free cumulants of LU-invariant
//! random tensors, with every scalar an exact rational function of the
//! dimension `N`.

pub mod error;
pub mod ratn;
#[macro_use]
pub mod perm;
pub mod partition;
pub mod invariant;
pub mod weingarten;
pub mod dist;
pub mod engine;
pub mod forest;
pub mod asympt;
pub mod oracle;
pub mod suites;

pub use error::{Error, Result};
pub use ratn::{IntPoly, RatN};
