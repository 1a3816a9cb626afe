//! Named states used throughout the analyses.

use crate::error::{Error, Result};
use crate::linalg::{c, C64};
use crate::qudit::{DensityMatrix, StateVector};

/// `(Σ_j |jj⟩)/√d`.
pub fn phi_plus(d: usize) -> StateVector {
    let digits: Vec<[usize; 2]> = (0..d).map(|j| [j, j]).collect();
    let terms: Vec<(&[usize], C64)> = digits.iter().map(|j| (&j[..], c(1.0, 0.0))).collect();
    StateVector::from_terms(&[d, d], &terms).expect("valid basis digits")
}

/// Qubit family `(|GG⟩ + ε|LR⟩)/√(1+|ε|²)` with `G ≡ 0` and `L, R ≡ 1`.
pub fn nonmax_qubit(epsilon: C64) -> StateVector {
    StateVector::from_terms(&[2, 2], &[(&[0, 0], c(1.0, 0.0)), (&[1, 1], epsilon)])
        .expect("nonzero amplitude on |00⟩")
}

/// Qutrit family `(|LR⟩ + ε|GG⟩ + |RL⟩)/√(2+|ε|²)` with `L ≡ 0, G ≡ 1, R ≡ 2`.
pub fn nonmax_qutrit(epsilon: C64) -> StateVector {
    StateVector::from_terms(
        &[3, 3],
        &[
            (&[0, 2], c(1.0, 0.0)),
            (&[1, 1], epsilon),
            (&[2, 0], c(1.0, 0.0)),
        ],
    )
    .expect("nonzero amplitude on |02⟩")
}

/// `p/D · I + (1-p) ρ`.
pub fn depolarize(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    rho.mix(&DensityMatrix::maximally_mixed(rho.dims()), p)
}

/// Werner state `p Φ⁺ + (1-p) I/4`.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    depolarize(&phi_plus(2).density(), 1.0 - p)
}

/// White-noise weight `q` such that `(1-q)|ψ⟩⟨ψ| + q I/D` has linear entropy
/// `target`.
///
/// The purity is `1 - (2q - q²)(D-1)/D`, so the normalized linear entropy is
/// `2q - q²` for every `D`.
pub fn white_noise_weight(target: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&target) {
        return Err(Error::InvalidParameter(format!("linear entropy {target}")));
    }
    Ok(1.0 - (1.0 - target).sqrt())
}

/// Pure state mixed with white noise to reach the requested linear entropy.
pub fn with_linear_entropy(psi: &StateVector, target: f64) -> Result<DensityMatrix> {
    depolarize(&psi.density(), white_noise_weight(target)?)
}
