//! Jacobi matrices with spectrum `{2k^2}`, the inverse eigenvalue problem that
//! rebuilds them, and the mass-spring chains whose normal modes are equally
//! spaced (so a displaced end mass reappears, mirrored, at the far end).

pub mod chain;
pub mod cli;
pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod exact;
pub mod format;
pub mod inverse;
pub mod jacobi;
pub mod plot;

pub use error::{Error, Result};
