use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use super::MeasurementSetting;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::qudit::DensityMatrix;

/// Coincidence counts recorded for one setting over an ensemble of `shots`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub setting: usize,
    pub count: u64,
    pub shots: u64,
}

/// Born-rule probabilities `Tr(ρ Πᵢ) = ⟨aᵢ|ρ|aᵢ⟩`.
pub fn born_probabilities(
    rho: &DensityMatrix,
    settings: &[MeasurementSetting],
    exec: Exec,
) -> Result<Vec<f64>> {
    for s in settings {
        if s.dims() != rho.dims() {
            return Err(Error::DimensionMismatch(format!(
                "setting {} has dims {:?}, state has {:?}",
                s.id,
                s.dims(),
                rho.dims()
            )));
        }
    }
    let m = rho.matrix();
    Ok(exec.map(settings, |s| {
        let a = s.ket();
        (a.adjoint() * m * a)[(0, 0)].re.clamp(0.0, 1.0)
    }))
}

fn check_probs(probs: &[f64], shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be positive".into()));
    }
    if let Some(p) = probs.iter().find(|p| !(-1e-12..=1.0 + 1e-12).contains(*p)) {
        return Err(Error::InvalidParameter(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Poisson-distributed counts `cᵢ ~ Poisson(N pᵢ)`, deterministic in `seed`.
///
/// Record `i` refers to setting id `i`.
pub fn simulate_counts(probs: &[f64], shots: u64, seed: u64) -> Result<Vec<CountRecord>> {
    check_probs(probs, shots)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    probs
        .iter()
        .enumerate()
        .map(|(setting, &p)| {
            let mean = shots as f64 * p.clamp(0.0, 1.0);
            let count = if mean > 0.0 {
                let dist = Poisson::new(mean).map_err(|e| Error::Numerical(e.to_string()))?;
                dist.sample(&mut rng) as u64
            } else {
                0
            };
            Ok(CountRecord {
                setting,
                count,
                shots,
            })
        })
        .collect()
}

/// Noise-free counts `round(N pᵢ)`.
pub fn expected_counts(probs: &[f64], shots: u64) -> Result<Vec<CountRecord>> {
    check_probs(probs, shots)?;
    Ok(probs
        .iter()
        .enumerate()
        .map(|(setting, &p)| CountRecord {
            setting,
            count: (shots as f64 * p.clamp(0.0, 1.0)).round() as u64,
            shots,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::qudit::StateVector;
    use crate::tomography::{measurement_set, SetFlavor};

    fn single(label: &str, d: usize) -> MeasurementSetting {
        MeasurementSetting::from_labels(0, &[label], &[d]).unwrap()
    }

    #[test]
    fn single_qubit_probabilities() {
        let zero = StateVector::basis(&[2], &[0]).unwrap().density();
        let set: Vec<_> = ["b0", "b1", "p+01"].iter().map(|l| single(l, 2)).collect();
        let p = born_probabilities(&zero, &set, Exec::Sequential).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-15);
        assert!(p[1].abs() < 1e-15);
        assert!((p[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bell_state_joint_superposition() {
        let phi =
            StateVector::from_terms(&[2, 2], &[(&[0, 0], c(1.0, 0.0)), (&[1, 1], c(1.0, 0.0))])
                .unwrap()
                .density();
        let s = MeasurementSetting::from_labels(0, &["p+01", "p+01"], &[2, 2]).unwrap();
        let p = born_probabilities(&phi, &[s], Exec::Sequential).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(&[3, 3]);
        let set = measurement_set(2, 2, SetFlavor::Minimal).unwrap();
        assert!(born_probabilities(&rho, &set, Exec::Sequential).is_err());
    }

    #[test]
    fn zero_probability_gives_zero_counts() {
        for seed in 0..50 {
            let recs = simulate_counts(&[0.0, 0.3], 10_000, seed).unwrap();
            assert_eq!(recs[0].count, 0);
            assert_eq!(recs[1].shots, 10_000);
        }
    }

    #[test]
    fn unit_probability_mean_within_three_sigma() {
        let n = 10_000u64;
        let seeds = 1000u64;
        let total: u64 = (0..seeds)
            .map(|s| simulate_counts(&[1.0], n, s).unwrap()[0].count)
            .sum();
        let mean = total as f64 / seeds as f64;
        // Standard error of the mean: √N / √seeds.
        let sigma = (n as f64).sqrt() / (seeds as f64).sqrt();
        assert!((mean - n as f64).abs() < 3.0 * sigma, "mean {mean}");
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let probs = [0.1, 0.25, 0.5, 0.15];
        assert_eq!(
            simulate_counts(&probs, 10_000, 7).unwrap(),
            simulate_counts(&probs, 10_000, 7).unwrap()
        );
        assert_ne!(
            simulate_counts(&probs, 10_000, 7).unwrap(),
            simulate_counts(&probs, 10_000, 8).unwrap()
        );
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(simulate_counts(&[0.5], 0, 1).is_err());
        assert!(simulate_counts(&[1.5], 10, 1).is_err());
        assert!(expected_counts(&[-0.2], 10,).is_err());
        assert_eq!(expected_counts(&[0.25], 10).unwrap()[0].count, 3);
    }
}
