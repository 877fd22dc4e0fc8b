//! Bound-state solver suite: quasilinearization of the phase (Prüfer) form of
//! the radial Schrödinger equation, seeded by a Langer-uniformized WKB
//! wavefunction and cross-checked by an independent shooting oracle.
//!
//! Modules:
//! - [`xprec`]: double-double (~32 decimal digit) arithmetic with elementary
//!   functions and the Airy pair `Ai`, `Ai'`.
//! - [`scalar`]: a trait abstracting over `f64` and [`xprec::Dd`] so every
//!   solver runs in either precision.
//! - [`problems`]: the potential/boundary-condition catalogue.
//! - [`ode`]: Gragg–Bulirsch–Stoer integrator and quadrature helpers.
//! - [`wkb`]: turning points, action integrals, semiclassical quantization,
//!   and the Langer seed wavefunction.
//! - [`qlm`]: the quasilinearized phase iteration and energy update.
//! - [`oracle`]: independent high-order shooting eigensolver.
//! - [`cli`]: table/wavefunction/convergence commands and CSV output.

pub mod ode;
pub mod oracle;
pub mod problems;
pub mod qlm;
pub mod scalar;
pub mod wkb;
pub mod xprec;

use thiserror::Error;

/// Errors surfaced by solvers and the CLI layer.
#[derive(Debug, Error)]
pub enum SolveError {
    /// A quantization/eigenvalue equation has no root in the searchable range.
    #[error("no bound state found: {0}")]
    NoBoundState(String),
    /// Iteration hit its cap without meeting the convergence criterion.
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),
    /// Invalid user input (unknown problem/state, malformed config, bad flag).
    #[error("configuration error: {0}")]
    Config(String),
    /// A numeric routine was called outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, SolveError>;
