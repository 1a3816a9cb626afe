//! States of one or more qudits and the basic quantum-information quantities
//! defined on them.
//!
//! Subsystems are ordered row-major: for dims `[d1, d2]` the basis state
//! `|j k⟩` sits at index `j * d2 + k`.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, C64, NEG_CLAMP};

/// Tolerances used when validating a [`DensityMatrix`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub hermitian: f64,
    pub eigenvalue: f64,
    pub trace: f64,
}

impl Tolerance {
    /// Internal invariants.
    pub const STRICT: Tolerance = Tolerance {
        hermitian: 1e-12,
        eigenvalue: 1e-10,
        trace: 1e-10,
    };
    /// Accepted when reading files, to tolerate round-tripped decimals.
    pub const FILE: Tolerance = Tolerance {
        hermitian: 1e-6,
        eigenvalue: 1e-6,
        trace: 1e-6,
    };
}

fn check_dims(dims: &[usize], len: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != len {
        return Err(Error::DimsProduct {
            dims: dims.to_vec(),
            len,
        });
    }
    Ok(())
}

/// A normalized pure state with subsystem dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: CVector,
    dims: Vec<usize>,
}

impl StateVector {
    /// Wraps already-normalized amplitudes (norm within 1e-12).
    pub fn new(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Normalizes the amplitudes first.
    pub fn normalized(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm = amplitudes.norm();
        if norm < 1e-300 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
            dims,
        })
    }

    /// Builds a state from `(basis digits, amplitude)` pairs, then normalizes.
    pub fn from_terms(dims: &[usize], terms: &[(&[usize], C64)]) -> Result<Self> {
        let total = dims.iter().product();
        let mut amps = CVector::zeros(total);
        for (digits, amp) in terms {
            amps[flat_index(dims, digits)?] += *amp;
        }
        Self::normalized(amps, dims.to_vec())
    }

    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self> {
        Self::from_terms(dims, &[(digits, c(1.0, 0.0))])
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        StateVector {
            amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes),
            dims,
        }
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: linalg::outer(&self.amplitudes),
            dims: self.dims.clone(),
        }
    }
}

/// Row-major flat index of a multi-index.
pub fn flat_index(dims: &[usize], digits: &[usize]) -> Result<usize> {
    if digits.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} digits for {} subsystems",
            digits.len(),
            dims.len()
        )));
    }
    digits.iter().zip(dims).try_fold(0usize, |acc, (&j, &d)| {
        if j >= d {
            Err(Error::InvalidParameter(format!("basis digit {j} >= {d}")))
        } else {
            Ok(acc * d + j)
        }
    })
}

/// Hermitian, positive-semidefinite, unit-trace matrix with subsystem dims.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        Self::with_tolerance(matrix, dims, Tolerance::STRICT)
    }

    pub fn with_tolerance(matrix: CMatrix, dims: Vec<usize>, tol: Tolerance) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_dims(&dims, matrix.nrows())?;
        let dev = linalg::hermitian_deviation(&matrix);
        if dev > tol.hermitian {
            return Err(Error::NotHermitian(dev));
        }
        let tr = linalg::trace(&matrix);
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::InvalidTrace(tr.re));
        }
        let min = linalg::hermitian_eigenvalues(&matrix)[0];
        if min < -tol.eigenvalue {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { matrix, dims })
    }

    /// Wraps a matrix known to be a state up to round-off; hermitizes it.
    pub(crate) fn from_raw(matrix: CMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.nrows());
        Self {
            matrix: linalg::hermitize(&matrix),
            dims,
        }
    }

    /// `A / Tr A` for a positive semidefinite `A`.
    pub(crate) fn from_unnormalized(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let tr = linalg::trace(&matrix).re;
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::VanishingProbability(tr));
        }
        Ok(Self::from_raw(matrix.unscale(tr), dims))
    }

    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let n: usize = dims.iter().product();
        Self {
            matrix: CMatrix::identity(n, n).unscale(n as f64),
            dims: dims.to_vec(),
        }
    }

    /// Diagonal state from a probability vector (normalized here).
    pub fn diagonal(probs: &[f64], dims: Vec<usize>) -> Result<Self> {
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidParameter("negative population".into()));
        }
        let m = CMatrix::from_diagonal(&CVector::from_iterator(
            probs.len(),
            probs.iter().map(|&p| c(p, 0.0)),
        ));
        check_dims(&dims, probs.len())?;
        Self::from_unnormalized(m, dims)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    fn same_dims(&self, other: &DensityMatrix) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    /// Ascending eigenvalues with round-off negatives clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .map(clamp_eigenvalue)
            .collect()
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ.
        self.matrix.norm_squared()
    }

    /// Normalized linear entropy `D/(D-1) · (1 - Tr ρ²)`.
    pub fn linear_entropy(&self) -> f64 {
        let d = self.dim() as f64;
        if self.dim() == 1 {
            return 0.0;
        }
        (d / (d - 1.0) * (1.0 - self.purity())).clamp(0.0, 1.0)
    }

    /// Von Neumann entropy in bits.
    pub fn von_neumann_entropy(&self) -> f64 {
        shannon_bits(&self.eigenvalues())
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            matrix: linalg::kron(&self.matrix, &other.matrix),
            dims,
        }
    }

    /// Reduced state on subsystem `keep`, tracing out every other subsystem.
    pub fn partial_trace(&self, keep: usize) -> Result<DensityMatrix> {
        let count = self.dims.len();
        if count < 2 {
            return Err(Error::NotComposite(count));
        }
        if keep >= count {
            return Err(Error::SubsystemOutOfRange { index: keep, count });
        }
        let dk = self.dims[keep];
        let stride: usize = self.dims[keep + 1..].iter().product();
        let n = self.dim();
        let mut out = CMatrix::zeros(dk, dk);
        // Offsets of all basis indices whose `keep` digit is zero.
        for base in (0..n).filter(|i| (i / stride).is_multiple_of(dk)) {
            for a in 0..dk {
                for b in 0..dk {
                    out[(a, b)] += self.matrix[(base + a * stride, base + b * stride)];
                }
            }
        }
        Ok(DensityMatrix::from_raw(out, vec![dk]))
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, unitary: &CMatrix) -> Result<DensityMatrix> {
        if unitary.nrows() != self.dim() || unitary.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary {}x{} on dimension {}",
                unitary.nrows(),
                unitary.ncols(),
                self.dim()
            )));
        }
        Ok(DensityMatrix::from_raw(
            unitary * &self.matrix * unitary.adjoint(),
            self.dims.clone(),
        ))
    }

    /// `(P ρ P†) / Tr(P ρ P†)` with `P = projector` on `subsystem` and identity
    /// elsewhere.
    pub fn project_renormalize(
        &self,
        subsystem: usize,
        projector: &CMatrix,
    ) -> Result<DensityMatrix> {
        let count = self.dims.len();
        if subsystem >= count {
            return Err(Error::SubsystemOutOfRange {
                index: subsystem,
                count,
            });
        }
        let d = self.dims[subsystem];
        if projector.nrows() != d || projector.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "projector {}x{} on subsystem of dimension {d}",
                projector.nrows(),
                projector.ncols()
            )));
        }
        let p = linalg::embed(projector, subsystem, &self.dims);
        let filtered = &p * &self.matrix * p.adjoint();
        let prob = linalg::trace(&filtered).re;
        if !(prob > 1e-12) {
            return Err(Error::VanishingProbability(prob));
        }
        Ok(DensityMatrix::from_raw(
            filtered.unscale(prob),
            self.dims.clone(),
        ))
    }

    /// Applies the basis permutation `|j⟩ → |perm[j]⟩` on one subsystem.
    pub fn permute_subsystem_basis(
        &self,
        subsystem: usize,
        perm: &[usize],
    ) -> Result<DensityMatrix> {
        let count = self.dims.len();
        if subsystem >= count {
            return Err(Error::SubsystemOutOfRange {
                index: subsystem,
                count,
            });
        }
        let d = self.dims[subsystem];
        let u = permutation_unitary(d, perm)?;
        self.conjugate(&linalg::embed(&u, subsystem, &self.dims))
    }

    /// `(1 - w) ρ + w σ`.
    pub fn mix(&self, other: &DensityMatrix, weight: f64) -> Result<DensityMatrix> {
        self.same_dims(other)?;
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidParameter(format!("mixing weight {weight}")));
        }
        Ok(DensityMatrix::from_raw(
            self.matrix.scale(1.0 - weight) + other.matrix.scale(weight),
            self.dims.clone(),
        ))
    }

    /// Largest elementwise difference, for approximate comparisons.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Re-checks every invariant at the given tolerance.
    pub fn validate(&self, tol: Tolerance) -> Result<()> {
        DensityMatrix::with_tolerance(self.matrix.clone(), self.dims.clone(), tol).map(|_| ())
    }
}

/// Unitary with columns `e_{perm[j]}`, so `U|j⟩ = |perm[j]⟩`.
pub fn permutation_unitary(d: usize, perm: &[usize]) -> Result<CMatrix> {
    let mut seen = vec![false; d];
    if perm.len() != d {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= d || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    let mut u = CMatrix::zeros(d, d);
    for (j, &p) in perm.iter().enumerate() {
        u[(p, j)] = c(1.0, 0.0);
    }
    Ok(u)
}

fn clamp_eigenvalue(v: f64) -> f64 {
    if (-NEG_CLAMP..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// `-Σ p log₂ p` with `0 log 0 = 0`.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Trace distance `½ Σ |eig(ρ - σ)|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.same_dims(sigma)?;
    let diff = &rho.matrix - &sigma.matrix;
    let d = 0.5
        * linalg::hermitian_eigenvalues(&diff)
            .iter()
            .map(|v| v.abs())
            .sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

/// Root fidelity `Tr √(√ρ σ √ρ)`, evaluated as the nuclear norm `‖√ρ √σ‖₁`.
pub fn sqrt_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.same_dims(sigma)?;
    let product = linalg::psd_sqrt(&rho.matrix) * linalg::psd_sqrt(&sigma.matrix);
    Ok(linalg::nuclear_norm(&product).clamp(0.0, 1.0))
}

/// Squared (Uhlmann-Jozsa) fidelity `[Tr √(√ρ σ √ρ)]²`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    sqrt_fidelity(rho, sigma).map(|f| f * f)
}

/// Which fidelity convention a reported number uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FidelityConvention {
    /// `[Tr √(√ρ σ √ρ)]²`
    Squared,
    /// `Tr √(√ρ σ √ρ)`
    Root,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ket(dims: &[usize], digits: &[usize]) -> StateVector {
        StateVector::basis(dims, digits).unwrap()
    }

    fn phi_plus() -> DensityMatrix {
        StateVector::from_terms(&[2, 2], &[(&[0, 0], c(1.0, 0.0)), (&[1, 1], c(1.0, 0.0))])
            .unwrap()
            .density()
    }

    #[test]
    fn tensor_of_basis_projectors() {
        let a = ket(&[2], &[0]).density();
        let b = ket(&[2], &[1]).density();
        let ab = a.tensor(&b);
        assert_eq!(ab.dims(), &[2, 2]);
        assert_eq!(ab, ket(&[2, 2], &[0, 1]).density());
    }

    #[test]
    fn tensor_of_maximally_mixed() {
        let t = DensityMatrix::maximally_mixed(&[2]).tensor(&DensityMatrix::maximally_mixed(&[3]));
        assert_eq!(t.dims(), &[2, 3]);
        assert!(t.max_abs_diff(&DensityMatrix::maximally_mixed(&[2, 3])) < 1e-15);
        assert_relative_eq!(linalg::trace(t.matrix()).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_state_is_mixed() {
        let rho = phi_plus();
        for keep in 0..2 {
            let r = rho.partial_trace(keep).unwrap();
            assert!(r.max_abs_diff(&DensityMatrix::maximally_mixed(&[2])) < 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_logical_zero() {
        // √λ|12⟩ + e^{iφ}√(1-λ)|01⟩, token arm keeps modes 1 and 2.
        let lambda: f64 = 0.27;
        let phase = C64::from_polar(1.0, 0.4);
        let psi = StateVector::from_terms(
            &[3, 3],
            &[
                (&[1, 2], c(lambda.sqrt(), 0.0)),
                (&[0, 1], phase * (1.0 - lambda).sqrt()),
            ],
        )
        .unwrap();
        let token = psi.density().partial_trace(1).unwrap();
        let expected = DensityMatrix::diagonal(&[0.0, 0.73, 0.27], vec![3]).unwrap();
        assert!(token.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn partial_trace_errors() {
        let single = DensityMatrix::maximally_mixed(&[3]);
        assert!(matches!(
            single.partial_trace(0),
            Err(Error::NotComposite(1))
        ));
        assert!(matches!(
            phi_plus().partial_trace(2),
            Err(Error::SubsystemOutOfRange { index: 2, count: 2 })
        ));
    }

    #[test]
    fn trace_distance_examples() {
        let z = ket(&[2], &[0]).density();
        let o = ket(&[2], &[1]).density();
        assert_eq!(trace_distance(&z, &z).unwrap(), 0.0);
        assert_relative_eq!(trace_distance(&z, &o).unwrap(), 1.0, epsilon = 1e-14);
        let lambda = 0.35;
        let t0 = DensityMatrix::diagonal(&[0.0, 1.0 - lambda, lambda], vec![3]).unwrap();
        let t1 = DensityMatrix::diagonal(&[lambda, 1.0 - lambda, 0.0], vec![3]).unwrap();
        assert_relative_eq!(trace_distance(&t0, &t1).unwrap(), lambda, epsilon = 1e-14);
        assert!(matches!(
            trace_distance(&z, &DensityMatrix::maximally_mixed(&[3])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn fidelity_examples() {
        let z = ket(&[2], &[0]).density();
        let o = ket(&[2], &[1]).density();
        assert_relative_eq!(fidelity(&z, &z).unwrap(), 1.0, epsilon = 1e-12);
        assert!(fidelity(&z, &o).unwrap() < 1e-14);
        // Commuting tokens: √F = Σ √(p q) = 1 - λ.
        let lambda = 0.27;
        let t0 = DensityMatrix::diagonal(&[0.0, 1.0 - lambda, lambda], vec![3]).unwrap();
        let t1 = DensityMatrix::diagonal(&[lambda, 1.0 - lambda, 0.0], vec![3]).unwrap();
        assert_relative_eq!(
            sqrt_fidelity(&t0, &t1).unwrap(),
            1.0 - lambda,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            fidelity(&t0, &t1).unwrap(),
            (1.0 - lambda).powi(2),
            epsilon = 1e-12
        );
    }

    #[test]
    fn linear_entropy_examples() {
        assert!(phi_plus().linear_entropy().abs() < 1e-14);
        assert_relative_eq!(
            DensityMatrix::maximally_mixed(&[3, 3]).linear_entropy(),
            1.0,
            epsilon = 1e-14
        );
        let mut p = vec![0.0; 9];
        p[0] = 0.5;
        p[1] = 0.5;
        let rho = DensityMatrix::diagonal(&p, vec![3, 3]).unwrap();
        assert_relative_eq!(rho.linear_entropy(), 0.5625, epsilon = 1e-14);
    }

    #[test]
    fn von_neumann_examples() {
        assert!(phi_plus().von_neumann_entropy().abs() < 1e-10);
        assert_relative_eq!(
            DensityMatrix::maximally_mixed(&[3]).von_neumann_entropy(),
            3f64.log2(),
            epsilon = 1e-12
        );
        let rho = DensityMatrix::diagonal(&[0.73, 0.27], vec![2]).unwrap();
        let expected = -0.73 * 0.73f64.log2() - 0.27 * 0.27f64.log2();
        assert_relative_eq!(rho.von_neumann_entropy(), expected, epsilon = 1e-12);
    }

    #[test]
    fn projection_examples() {
        // Already inside the subspace.
        let rho = ket(&[3, 3], &[0, 1]).density();
        let mut keep01 = CMatrix::identity(3, 3);
        keep01[(2, 2)] = c(0.0, 0.0);
        let out = rho.project_renormalize(0, &keep01).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-15);

        // Φ⁺ filtered to |0⟩ on arm 1.
        let p0 = ket(&[2], &[0]).density().into_matrix();
        let out = phi_plus().project_renormalize(0, &p0).unwrap();
        assert!(out.max_abs_diff(&ket(&[2, 2], &[0, 0]).density()) < 1e-15);

        // (|02⟩+ε|11⟩+|20⟩) with mode 2 of arm 1 removed.
        let eps = c(1.3, -0.4);
        let src = StateVector::from_terms(
            &[3, 3],
            &[
                (&[0, 2], c(1.0, 0.0)),
                (&[1, 1], eps),
                (&[2, 0], c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let expected =
            StateVector::from_terms(&[3, 3], &[(&[0, 2], c(1.0, 0.0)), (&[1, 1], eps)]).unwrap();
        let out = src.density().project_renormalize(0, &keep01).unwrap();
        assert!(out.max_abs_diff(&expected.density()) < 1e-14);
        out.validate(Tolerance::STRICT).unwrap();
    }

    #[test]
    fn projection_with_zero_probability_fails() {
        let p2 = ket(&[2], &[1]).density().into_matrix();
        let rho = ket(&[2, 2], &[0, 0]).density();
        assert!(matches!(
            rho.project_renormalize(0, &p2),
            Err(Error::VanishingProbability(_))
        ));
    }

    #[test]
    fn permutation_examples() {
        let zero = ket(&[3], &[0]).density();
        assert_eq!(zero.permute_subsystem_basis(0, &[0, 1, 2]).unwrap(), zero);
        let swapped = zero.permute_subsystem_basis(0, &[1, 0, 2]).unwrap();
        assert!(swapped.max_abs_diff(&ket(&[3], &[1]).density()) < 1e-15);
        let back = swapped.permute_subsystem_basis(0, &[1, 0, 2]).unwrap();
        assert!(back.max_abs_diff(&zero) < 1e-15);
        assert!(matches!(
            zero.permute_subsystem_basis(0, &[0, 0, 2]),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(zero.permute_subsystem_basis(0, &[0, 1]).is_err());
    }

    #[test]
    fn validation_rejects_bad_matrices() {
        let mut m = CMatrix::identity(2, 2).unscale(2.0);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(matches!(
            DensityMatrix::new(m, vec![2]),
            Err(Error::NotHermitian(_))
        ));
        let m = CMatrix::identity(2, 2);
        assert!(matches!(
            DensityMatrix::new(m, vec![2]),
            Err(Error::InvalidTrace(_))
        ));
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.5, 0.0), c(-0.5, 0.0)]));
        assert!(matches!(
            DensityMatrix::new(m, vec![2]),
            Err(Error::NotPositive(_))
        ));
        let m = CMatrix::identity(4, 4).unscale(4.0);
        assert!(DensityMatrix::new(m, vec![3]).is_err());
    }
}
