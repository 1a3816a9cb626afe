//! Two-state-superposition quantum state tomography.
//!
//! Each arm is analysed with basis kets `|j⟩` and the pairwise superpositions
//! `|p±⟩ = (|j⟩ ± |k⟩)/√2`, `|q±⟩ = (|j⟩ ± i|k⟩)/√2` for `j < k`. The minimal
//! set uses only `p+`/`q+` (`d²` kets per arm); the over-complete set adds
//! `p-`/`q-`. Multi-arm settings are the Cartesian product with arm 1 varying
//! slowest.

mod analyzer;
mod counts;
mod mle;

pub use analyzer::{measurement_set, AnalyzerKet, AnalyzerKind, MeasurementSetting, SetFlavor};
pub use counts::{born_probabilities, expected_counts, simulate_counts, CountRecord};
pub use mle::{linear_inversion, reconstruct_mle, MleFit, MleOptions, Objective};
