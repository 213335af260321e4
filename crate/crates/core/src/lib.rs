//! Orthogonal polynomials on the real line and the unit circle, their
//! Jacobi/CMV operators and determinants, and the associated 2×2
//! Riemann–Hilbert problems, with cross-checks between independent
//! computational paths.

pub mod dets;
pub mod error;
pub mod io;
pub mod measures;
pub mod numeric;
pub mod opcircle;
pub mod opline;
pub mod rhp;
pub mod verify;

pub use error::{Error, Partial, Result};
pub use numeric::Precision;
