//! Entanglement and mixedness measures for two-subsystem states.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, c, CMatrix, CVector, C64};
use crate::optimize::NelderMead;
use crate::qudit::{shannon_bits, DensityMatrix, FidelityConvention, StateVector};
use crate::states;

/// Largest `|ε|` considered by [`fit_nonmax_entangled`].
pub const EPSILON_CAP: f64 = 5.0;
/// Radial grid points on `[0, EPSILON_CAP]`.
pub const GRID_RADII: usize = 50;
/// Phase grid points on `[-π, π)`.
pub const GRID_PHASES: usize = 72;
/// Fidelities closer than this count as tied on the grid.
const TIE_TOL: f64 = 1e-12;

fn require_two(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().len() != 2 {
        return Err(Error::NotComposite(rho.dims().len()));
    }
    Ok(())
}

fn require_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimensionMismatch(format!(
            "expected dims [2, 2], got {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_qubits(rho)?;
    let zero = c(0.0, 0.0);
    let sy = CMatrix::from_row_slice(2, 2, &[zero, c(0.0, -1.0), c(0.0, 1.0), zero]);
    let yy = linalg::kron(&sy, &sy);
    // μᵢ are the singular values of τ = Wᵀ(σy⊗σy)W where the columns of W
    // are √λᵢ vᵢ; this avoids square roots of near-zero eigenvalues of ρρ̃.
    let (values, vectors) = linalg::hermitian_eigh(rho.matrix());
    let mut w = vectors;
    for (i, &lambda) in values.iter().enumerate() {
        w.column_mut(i).scale_mut(lambda.max(0.0).sqrt());
    }
    let tau = w.transpose() * yy * w;
    let mut mu: Vec<f64> = tau.singular_values().iter().copied().collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0))
}

/// Squared concurrence.
pub fn tangle(rho: &DensityMatrix) -> Result<f64> {
    concurrence(rho).map(|x| x * x)
}

/// Exact two-qubit entanglement of formation `h((1 + √(1-C²))/2)` in ebits.
pub fn wootters_eof(rho: &DensityMatrix) -> Result<f64> {
    let conc = concurrence(rho)?;
    let x = 0.5 * (1.0 + (1.0 - conc * conc).max(0.0).sqrt());
    Ok(shannon_bits(&[x, 1.0 - x]))
}

/// Entropy of entanglement of a pure two-subsystem state, in ebits.
pub fn eof_pure(psi: &StateVector) -> Result<f64> {
    let rho = psi.density();
    require_two(&rho)?;
    Ok(rho.partial_trace(0)?.von_neumann_entropy())
}

/// How an entanglement-of-formation upper bound was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EofMethod {
    /// Average entanglement of the eigen-ensemble of ρ.
    Spectral,
}

/// Upper bound on the entanglement of formation from the eigen-ensemble
/// `Σᵢ λᵢ E(vᵢ)`.
pub fn eof_upper_bound(rho: &DensityMatrix) -> Result<f64> {
    require_two(rho)?;
    let (values, vectors) = linalg::hermitian_eigh(rho.matrix());
    let mut total = 0.0;
    for (i, &lambda) in values.iter().enumerate() {
        if lambda <= linalg::NEG_CLAMP {
            continue;
        }
        let v = StateVector::normalized(vectors.column(i).into_owned(), rho.dims().to_vec())?;
        total += lambda * eof_pure(&v)?;
    }
    Ok(total)
}

/// One-parameter families of nonmaximally entangled states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonMaxFamily {
    /// `(|GG⟩ + ε|LR⟩)/√(1+|ε|²)`
    Qubit,
    /// `(|LR⟩ + ε|GG⟩ + |RL⟩)/√(2+|ε|²)`
    Qutrit,
}

impl NonMaxFamily {
    pub fn for_dims(dims: &[usize]) -> Result<Self> {
        match dims {
            [2, 2] => Ok(Self::Qubit),
            [3, 3] => Ok(Self::Qutrit),
            _ => Err(Error::DimensionMismatch(format!(
                "no nonmaximally entangled family for dims {dims:?}"
            ))),
        }
    }

    pub fn dims(self) -> [usize; 2] {
        match self {
            Self::Qubit => [2, 2],
            Self::Qutrit => [3, 3],
        }
    }

    pub fn state(self, epsilon: C64) -> StateVector {
        match self {
            Self::Qubit => states::nonmax_qubit(epsilon),
            Self::Qutrit => states::nonmax_qutrit(epsilon),
        }
    }

    /// `(flat index, amplitude)` of the unnormalized family member.
    fn terms(self, epsilon: C64) -> ([(usize, C64); 3], usize, f64) {
        let one = c(1.0, 0.0);
        match self {
            Self::Qubit => (
                [(0, one), (3, epsilon), (0, one)],
                2,
                1.0 + epsilon.norm_sqr(),
            ),
            Self::Qutrit => (
                [(2, one), (4, epsilon), (6, one)],
                3,
                2.0 + epsilon.norm_sqr(),
            ),
        }
    }

    /// `⟨ψ(ε)|ρ|ψ(ε)⟩` without building the full state.
    fn overlap(self, rho: &CMatrix, epsilon: C64) -> f64 {
        let (terms, n, norm) = self.terms(epsilon);
        let terms = &terms[..n];
        let mut acc = c(0.0, 0.0);
        for &(i, a) in terms {
            for &(j, b) in terms {
                acc += a.conj() * rho[(i, j)] * b;
            }
        }
        (acc.re / norm).clamp(0.0, 1.0)
    }
}

/// Best-fit member of a nonmaximally entangled family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonMaxFit {
    pub family: NonMaxFamily,
    #[serde(with = "crate::io::complex")]
    pub epsilon: C64,
    /// `⟨ψ(ε)|ρ|ψ(ε)⟩`
    pub fidelity: f64,
    /// Best fidelity found on the coarse grid before refinement.
    pub grid_fidelity: f64,
}

/// Grid point `(radius index, phase index)` to `ε`.
fn grid_epsilon(k: usize) -> (C64, f64, f64) {
    let (ri, pi) = (k / GRID_PHASES, k % GRID_PHASES);
    let r = EPSILON_CAP * ri as f64 / (GRID_RADII - 1) as f64;
    let phase = -PI + 2.0 * PI * pi as f64 / GRID_PHASES as f64;
    (C64::from_polar(r, phase), r, phase)
}

fn clamp_epsilon(e: C64) -> C64 {
    let r = e.norm();
    if r > EPSILON_CAP {
        e * (EPSILON_CAP / r)
    } else {
        e
    }
}

/// Maximizes the overlap with a family member over `|ε| ≤ 5`: a polar grid
/// search followed by simplex refinement from the best grid point.
///
/// Near-ties on the grid go to the smallest `|ε|`, then the smallest phase
/// magnitude, then grid order.
pub fn fit_nonmax_entangled(
    rho: &DensityMatrix,
    family: NonMaxFamily,
    exec: Exec,
) -> Result<NonMaxFit> {
    if rho.dims() != family.dims() {
        return Err(Error::DimensionMismatch(format!(
            "family {family:?} needs dims {:?}, got {:?}",
            family.dims(),
            rho.dims()
        )));
    }
    let m = rho.matrix();
    let scores = exec.map_range(GRID_RADII * GRID_PHASES, |k| {
        family.overlap(m, grid_epsilon(k).0)
    });
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut best_k = 0;
    let mut best_key = (f64::INFINITY, f64::INFINITY);
    for (k, &s) in scores.iter().enumerate() {
        if top - s <= TIE_TOL {
            let (_, r, phase) = grid_epsilon(k);
            let key = (r, phase.abs());
            if key < best_key {
                best_key = key;
                best_k = k;
            }
        }
    }
    let (start, _, _) = grid_epsilon(best_k);
    let grid_fidelity = scores[best_k];

    let nm = NelderMead {
        max_iters: 5_000,
        stall_tol: 1e-14,
        ..NelderMead::default()
    };
    let step = 0.5 * EPSILON_CAP / (GRID_RADII - 1) as f64;
    let refined = nm.minimize(
        |x| -family.overlap(m, clamp_epsilon(c(x[0], x[1]))),
        &[start.re, start.im],
        &[step, step],
    );
    let epsilon = clamp_epsilon(c(refined.x[0], refined.x[1]));
    let fidelity = family.overlap(m, epsilon);
    let (epsilon, fidelity) = if fidelity > grid_fidelity + TIE_TOL {
        (epsilon, fidelity)
    } else {
        (start, grid_fidelity)
    };
    Ok(NonMaxFit {
        family,
        epsilon,
        fidelity,
        grid_fidelity,
    })
}

/// Fidelity of a state with a named reference state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedFidelity {
    pub name: String,
    pub value: f64,
    pub convention: FidelityConvention,
}

/// Summary of the entanglement content of a two-qubit or two-qutrit state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<f64>,
    /// Exact entanglement of formation, two qubits only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eof: Option<f64>,
    pub linear_entropy: f64,
    pub purity: f64,
    pub eof_upper_bound: f64,
    pub eof_method: EofMethod,
    pub nonmax_fit: NonMaxFit,
    pub fidelities: Vec<NamedFidelity>,
}

/// Computes every applicable measure for `rho`.
pub fn analyze(rho: &DensityMatrix, exec: Exec) -> Result<EntanglementReport> {
    require_two(rho)?;
    let family = NonMaxFamily::for_dims(rho.dims())?;
    let qubits = family == NonMaxFamily::Qubit;
    let conc = if qubits {
        Some(concurrence(rho)?)
    } else {
        None
    };
    let d = rho.dims()[0];
    let phi = states::phi_plus(d);
    let phi_overlap = expectation(rho, phi.amplitudes());
    Ok(EntanglementReport {
        dims: rho.dims().to_vec(),
        tangle: conc.map(|x| x * x),
        concurrence: conc,
        eof: if qubits {
            Some(wootters_eof(rho)?)
        } else {
            None
        },
        linear_entropy: rho.linear_entropy(),
        purity: rho.purity(),
        eof_upper_bound: eof_upper_bound(rho)?,
        eof_method: EofMethod::Spectral,
        nonmax_fit: fit_nonmax_entangled(rho, family, exec)?,
        fidelities: vec![NamedFidelity {
            name: "phi_plus".into(),
            value: phi_overlap,
            convention: FidelityConvention::Squared,
        }],
    })
}

/// `⟨v|ρ|v⟩` for a normalized `v`.
fn expectation(rho: &DensityMatrix, v: &CVector) -> f64 {
    (v.adjoint() * rho.matrix() * v)[(0, 0)].re.clamp(0.0, 1.0)
}
