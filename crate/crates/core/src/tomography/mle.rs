//! Maximum-likelihood reconstruction over the Cholesky-style parameterization
//! `ρ = T†T / Tr(T†T)` with `T` lower triangular.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{CountRecord, MeasurementSetting};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{self, c, CMatrix, CVector, C64};
use crate::optimize::{Minimum, NelderMead};
use crate::qudit::DensityMatrix;

/// Floor applied to model probabilities before taking logarithms.
const PROB_FLOOR: f64 = 1e-12;
/// White-noise admixture for the warm start. Clamped eigenvalues would put
/// diagonal entries of `T` near zero, where the likelihood is flat in `T` and
/// the simplex creeps; starting at 1% keeps every direction live.
const WARM_START_MIX: f64 = 1e-2;
/// Iterations between simplex rebuilds.
const RESET_INTERVAL: usize = 5_000;
/// Gain per rebuild interval below which a run counts as converged, in units
/// of log-likelihood. Far below the statistical resolution of any data set.
const RESET_TOL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// `Σ N pᵢ - cᵢ ln(N pᵢ)`, offset by the saturated-model value
    /// `Σ cᵢ - cᵢ ln cᵢ` so the optimum is `O(settings)` rather than
    /// `O(total counts)` and stays well resolved in floating point.
    Poisson,
    /// `Σ (N pᵢ - cᵢ)² / (2 max(cᵢ, 1))`, for cross-checks.
    LeastSquares,
}

#[derive(Clone, Debug)]
pub struct MleOptions {
    pub objective: Objective,
    pub optimizer: NelderMead,
    /// Extra runs started from perturbations of the first run's optimum.
    pub restarts: usize,
    /// Perturbation size relative to each parameter's magnitude.
    pub restart_scale: f64,
    pub seed: u64,
    /// Strategy for running the restarts.
    pub exec: Exec,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self {
            objective: Objective::Poisson,
            optimizer: NelderMead {
                reset_interval: RESET_INTERVAL,
                reset_tol: RESET_TOL,
                ..NelderMead::default()
            },
            restarts: 3,
            restart_scale: 0.05,
            seed: 0x5eed,
            exec: Exec::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct MleFit {
    pub rho: DensityMatrix,
    /// Objective value at the optimum. For Poisson this is the negative
    /// log-likelihood relative to the saturated model (half the deviance).
    pub objective_value: f64,
    /// Objective value at the linear-inversion warm start.
    pub initial_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// False when any run stopped at the iteration cap.
    pub converged: bool,
    pub runs: usize,
    /// Best objective value after each iteration of the first run, then after
    /// each restart.
    pub history: Vec<f64>,
}

/// Projectors and counts in the layout the objective needs.
struct Problem {
    dim: usize,
    kets: Vec<CVector>,
    counts: Vec<f64>,
    shots: Vec<f64>,
    objective: Objective,
}

fn resolve<'a>(
    records: &[CountRecord],
    settings: &'a [MeasurementSetting],
) -> Result<(Vec<usize>, Vec<&'a MeasurementSetting>)> {
    let first = settings
        .first()
        .ok_or_else(|| Error::InvalidParameter("empty measurement set".into()))?;
    let dims = first.dims();
    if let Some(s) = settings.iter().find(|s| s.dims() != dims) {
        return Err(Error::DimensionMismatch(format!(
            "setting {} has dims {:?}, expected {:?}",
            s.id,
            s.dims(),
            dims
        )));
    }
    if records.is_empty() {
        return Err(Error::InvalidParameter("no count records".into()));
    }
    let by_id: HashMap<usize, &MeasurementSetting> = settings.iter().map(|s| (s.id, s)).collect();
    let used = records
        .iter()
        .map(|r| {
            if r.shots == 0 {
                return Err(Error::InvalidParameter(format!(
                    "record for setting {} has zero shots",
                    r.setting
                )));
            }
            by_id.get(&r.setting).copied().ok_or_else(|| {
                Error::InvalidParameter(format!("record refers to unknown setting {}", r.setting))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((dims, used))
}

/// Rows `vec(Πᵢ)ᵀ` such that `A vec(ρ) = (Tr ρΠᵢ)ᵢ` with row-major `vec`.
fn design_matrix(kets: &[&CVector], dim: usize) -> CMatrix {
    CMatrix::from_fn(kets.len(), dim * dim, |i, col| {
        let (j, k) = (col / dim, col % dim);
        kets[i][k] * kets[i][j].conj()
    })
}

fn check_rank(design: &CMatrix, dim: usize) -> Result<()> {
    let rank = linalg::rank(design, 1e-8);
    if rank < dim * dim {
        return Err(Error::InsufficientSettings {
            rank,
            needed: dim * dim,
        });
    }
    Ok(())
}

/// Least-squares inversion of the frequencies, projected onto the state space
/// (negative eigenvalues clamped, trace renormalized).
pub fn linear_inversion(
    records: &[CountRecord],
    settings: &[MeasurementSetting],
) -> Result<DensityMatrix> {
    let (dims, used) = resolve(records, settings)?;
    let dim: usize = dims.iter().product();
    let kets: Vec<&CVector> = used.iter().map(|s| s.ket()).collect();
    let design = design_matrix(&kets, dim);
    check_rank(&design, dim)?;
    invert(&design, records, dims)
}

fn invert(design: &CMatrix, records: &[CountRecord], dims: Vec<usize>) -> Result<DensityMatrix> {
    let dim: usize = dims.iter().product();
    let freqs = CVector::from_iterator(
        records.len(),
        records
            .iter()
            .map(|r| c(r.count as f64 / r.shots as f64, 0.0)),
    );
    let x = design
        .clone()
        .svd(true, true)
        .solve(&freqs, 1e-12)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    let raw = CMatrix::from_fn(dim, dim, |j, k| x[j * dim + k]);
    let clamped = linalg::hermitian_map(&linalg::hermitize(&raw), |v| v.max(0.0));
    DensityMatrix::from_unnormalized(clamped, dims.clone())
        .or_else(|_| Ok(DensityMatrix::maximally_mixed(&dims)))
}

impl Problem {
    /// Parameters: the `D` real diagonal entries of `T`, then `(re, im)` of
    /// each strictly-lower entry in row-major order.
    fn fill_t(&self, params: &[f64], t: &mut [C64]) {
        let d = self.dim;
        for i in 0..d {
            t[i * d + i] = c(params[i], 0.0);
        }
        let mut idx = d;
        for i in 1..d {
            for j in 0..i {
                t[i * d + j] = c(params[idx], params[idx + 1]);
                idx += 2;
            }
        }
    }

    fn params_from_t(&self, t: &CMatrix) -> Vec<f64> {
        let d = self.dim;
        let mut p: Vec<f64> = (0..d).map(|i| t[(i, i)].re).collect();
        for i in 1..d {
            for j in 0..i {
                p.push(t[(i, j)].re);
                p.push(t[(i, j)].im);
            }
        }
        p
    }

    fn rho_from_params(&self, params: &[f64]) -> CMatrix {
        let d = self.dim;
        let mut flat = vec![c(0.0, 0.0); d * d];
        self.fill_t(params, &mut flat);
        let t = CMatrix::from_row_slice(d, d, &flat);
        let m = t.adjoint() * &t;
        let tr = linalg::trace(&m).re;
        m.unscale(tr)
    }

    /// Objective with a caller-provided scratch buffer for `T`.
    fn value(&self, params: &[f64], t: &mut [C64]) -> f64 {
        let d = self.dim;
        self.fill_t(params, t);
        let norm: f64 = t.iter().map(|z| z.norm_sqr()).sum();
        if !(norm > 0.0) {
            return f64::INFINITY;
        }
        let mut total = 0.0;
        for ((ket, &count), &shots) in self.kets.iter().zip(&self.counts).zip(&self.shots) {
            // ⟨a|T†T|a⟩ = ‖T a‖², T lower triangular.
            let mut s = 0.0;
            for i in 0..d {
                let row = &t[i * d..i * d + i + 1];
                let mut acc = c(0.0, 0.0);
                for (tij, aj) in row.iter().zip(ket.iter()) {
                    acc += tij * aj;
                }
                s += acc.norm_sqr();
            }
            let p = (s / norm).max(PROB_FLOOR);
            let mean = shots * p;
            total += match self.objective {
                Objective::Poisson if count > 0.0 => mean - count - count * (mean / count).ln(),
                Objective::Poisson => mean,
                Objective::LeastSquares => (mean - count).powi(2) / (2.0 * count.max(1.0)),
            };
        }
        total
    }

    fn minimize(&self, optimizer: &NelderMead, x0: &[f64]) -> Minimum {
        let mut scratch = vec![c(0.0, 0.0); self.dim * self.dim];
        let steps: Vec<f64> = x0.iter().map(|x| 0.05 * x.abs() + 2e-3).collect();
        optimizer.minimize(|p| self.value(p, &mut scratch), x0, &steps)
    }
}

/// Lower-triangular `T` with `T†T = ρ`, from the Cholesky factor of the
/// index-reversed matrix.
fn lower_factor(rho: &CMatrix) -> Result<CMatrix> {
    let reversed = linalg::reverse_indices(rho);
    let chol = reversed
        .cholesky()
        .ok_or_else(|| Error::Numerical("warm start is not positive definite".into()))?;
    Ok(linalg::reverse_indices(&chol.l().adjoint()))
}

/// Fits a physical density matrix to count data by simplex descent on the
/// chosen objective, warm-started from linear inversion.
pub fn reconstruct_mle(
    records: &[CountRecord],
    settings: &[MeasurementSetting],
    options: &MleOptions,
) -> Result<MleFit> {
    let (dims, used) = resolve(records, settings)?;
    let dim: usize = dims.iter().product();
    let ket_refs: Vec<&CVector> = used.iter().map(|s| s.ket()).collect();
    let design = design_matrix(&ket_refs, dim);
    check_rank(&design, dim)?;

    let problem = Problem {
        dim,
        kets: used.iter().map(|s| s.ket().clone()).collect(),
        counts: records.iter().map(|r| r.count as f64).collect(),
        shots: records.iter().map(|r| r.shots as f64).collect(),
        objective: options.objective,
    };

    let warm = invert(&design, records, dims.clone())?;
    let warm = warm.mix(&DensityMatrix::maximally_mixed(&dims), WARM_START_MIX)?;
    let x0 = problem.params_from_t(&lower_factor(warm.matrix())?);
    let mut scratch = vec![c(0.0, 0.0); dim * dim];
    let initial_value = problem.value(&x0, &mut scratch);

    let optimizer = NelderMead {
        record_history: true,
        ..options.optimizer.clone()
    };
    let first = problem.minimize(&optimizer, &x0);
    let mut history = first.history.clone();

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let starts: Vec<Vec<f64>> = (0..options.restarts)
        .map(|_| {
            first
                .x
                .iter()
                .map(|&x| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    x + options.restart_scale * (x.abs() + 1e-2) * z
                })
                .collect()
        })
        .collect();
    let quiet = NelderMead {
        record_history: false,
        ..options.optimizer.clone()
    };
    let restarts = options.exec.map(&starts, |x| problem.minimize(&quiet, x));

    let mut best = first;
    let mut iterations = best.iterations;
    let mut evaluations = best.evaluations;
    let mut converged = best.converged;
    for run in restarts {
        iterations += run.iterations;
        evaluations += run.evaluations;
        converged &= run.converged;
        if run.value < best.value {
            best = Minimum {
                history: Vec::new(),
                ..run
            };
        }
        history.push(best.value);
    }

    let rho = DensityMatrix::from_unnormalized(problem.rho_from_params(&best.x), dims)?;
    Ok(MleFit {
        rho,
        objective_value: best.value,
        initial_value,
        iterations,
        evaluations,
        converged,
        runs: 1 + options.restarts,
        history,
    })
}
