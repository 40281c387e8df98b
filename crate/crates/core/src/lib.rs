//! Multiple polylogarithms continued analytically as iterated path integrals.
//!
//! The crate builds the dlog integrands whose iterated integrals from the
//! origin reproduce `Li_{m_1,...,m_n}`, integrates them along piecewise paths
//! in `C^n` that avoid the singular divisor, and checks the resulting
//! monodromy against closed forms.
//!
//! Positions and coordinates are 0-based throughout the library API; the CLI
//! accepts 1-based component labels.

pub mod chen;
pub mod cli;
pub mod error;
pub mod forms;
pub mod index;
pub mod integrand;
pub mod monodromy;
pub mod paths;
pub mod polylog;
pub mod sampling;
pub mod suites;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
