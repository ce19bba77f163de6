//! Floquet scattering-matrix solver for electron tunneling through
//! one-dimensional piecewise-constant heterostructures driven by a
//! time-periodic laser field and a static electric field.
//!
//! The pipeline is:
//!
//! 1. [`model`] builds a [`Device`](model::Device): an ordered list of
//!    homogeneous regions, a laser [`Waveform`](model::Waveform) and an
//!    optional static field discretized as a staircase.
//! 2. [`floquet`] builds the per-region Floquet basis: channel momenta,
//!    ponderomotive shifts and the Fourier coefficients of the Volkov phase.
//! 3. [`interfaces`] assembles the zero-anchored matching matrices and the
//!    local transfer matrices across each interface.
//! 4. [`cascade`] converts everything to scattering form and composes it
//!    with the star product, which never forms growing exponentials.
//! 5. [`observables`] extracts per-channel reflection and transmission
//!    probabilities and the flux sum-rule deficit.
//!
//! [`scan`] drives parameter scans and convergence studies on top of
//! [`solver`], and backs the `floquet-scan` binary.
//!
//! All internal quantities are in atomic units (`hbar = m_e = 1`, electron
//! charge `e = -1`). Conversions live in [`units`].

pub mod bessel;
pub mod cascade;
pub mod config;
pub mod error;
pub mod floquet;
pub mod interfaces;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod scan;
pub mod solver;
mod spectral;
pub mod units;

pub use error::{Error, Result};
pub use model::{Device, Incidence, Region, Waveform};
pub use observables::ScatterResult;
pub use solver::{solve, SolverOptions};
