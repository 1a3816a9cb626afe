//! Simulation and analysis toolkit for small entangled qudit systems.
//!
//! The crate covers four connected pieces:
//!
//! - [`qudit`]: density matrices and state vectors for one and two qudits, with
//!   partial traces, distances, fidelities and entropies.
//! - [`modes`]: Hermite-Gauss and Laguerre-Gauss-vortex transverse modes, Gouy
//!   phase bookkeeping, and quadrature overlaps modelling a hologram plus
//!   single-mode-fibre analyser.
//! - [`tomography`]: measurement sets built only from basis states and
//!   two-state superpositions, Poisson count simulation, and maximum-likelihood
//!   reconstruction.
//! - [`entanglement`] and [`bitcommit`]: entanglement measures and the
//!   knowledge-gain vs control analysis of a qutrit purification bit commitment.
//!
//! Subsystem ordering is row-major everywhere: arm 1 is the slowest index.
//!
//! Data-parallel loops go through [`Exec`]; with the `parallel` feature (on by
//! default) they run on rayon, otherwise sequentially. Both paths produce
//! bit-identical results.

// Guards such as `!(x > 0.0)` deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bitcommit;
pub mod entanglement;
mod error;
pub mod exec;
pub mod io;
pub mod linalg;
pub mod modes;
pub mod optimize;
pub mod qudit;
pub mod random;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
pub use exec::Exec;
pub use linalg::{CMatrix, CVector, C64};
pub use qudit::{DensityMatrix, StateVector};

/// Version tag carried by every emitted artifact (`"schema": "<name>/1"`).
pub const SCHEMA_VERSION: u32 = 1;
