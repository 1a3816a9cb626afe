//! Knowledge gain vs control for a purification bit commitment with qutrit
//! tokens.
//!
//! Subsystem 0 of every logical state is the proof, subsystem 1 the token.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{c, CMatrix, C64};
use crate::qudit::{fidelity, sqrt_fidelity, trace_distance, DensityMatrix, StateVector};

/// Tolerance separating "on" from "strictly inside" the qubit boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Parameters of the logical basis
/// `|0⟩_L = √λ|12⟩ + e^{iφ}√(1-λ)|01⟩`, `|1⟩_L = e^{iφ}√(1-λ)|21⟩ + √λ|10⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogicalBitSpec {
    pub lambda: f64,
    pub phi: f64,
}

impl LogicalBitSpec {
    pub fn new(lambda: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidParameter(format!(
                "lambda {lambda} outside [0, 1]"
            )));
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParameter(format!("phi {phi}")));
        }
        Ok(Self { lambda, phi })
    }
}

/// Bob's knowledge gain and Alice's control for one token pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecurityPoint {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl SecurityPoint {
    pub fn radius_squared(&self) -> f64 {
        self.k * self.k + self.c * self.c
    }

    /// Not strictly inside the qubit arc `K² + C² = 1/4`, i.e. reachable by
    /// the two-dimensional-token family.
    pub fn inside_qubit_region(&self) -> bool {
        self.radius_squared() >= 0.25 - BOUNDARY_TOL
    }

    /// Strictly inside the arc: a trade-off no qubit-token protocol of the
    /// boundary family reaches.
    pub fn beats_qubit_boundary(&self) -> bool {
        !self.inside_qubit_region()
    }
}

/// Noise applied to the ideal token pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    /// `p/3 · I + (1-p) ρ_ideal`
    Depolarizing { p: f64 },
    /// `(1-r) ρ_ideal + r |e⟩⟨e|`, with `|e⟩` the token's empty mode.
    ResidualPopulation { r: f64 },
}

impl NoiseModel {
    fn weight(&self) -> f64 {
        match *self {
            NoiseModel::Depolarizing { p } => p,
            NoiseModel::ResidualPopulation { r } => r,
        }
    }

    /// Noisy version of the ideal token pair at `lambda`.
    pub fn tokens(&self, lambda: f64) -> Result<(DensityMatrix, DensityMatrix)> {
        let w = self.weight();
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidParameter(format!(
                "noise weight {w} outside [0, 1]"
            )));
        }
        let (t0, t1) = ideal_tokens(lambda)?;
        match *self {
            NoiseModel::Depolarizing { p } => Ok((
                crate::states::depolarize(&t0, p)?,
                crate::states::depolarize(&t1, p)?,
            )),
            NoiseModel::ResidualPopulation { r } => Ok((
                t0.mix(&DensityMatrix::diagonal(&[1.0, 0.0, 0.0], vec![3])?, r)?,
                t1.mix(&DensityMatrix::diagonal(&[0.0, 0.0, 1.0], vec![3])?, r)?,
            )),
        }
    }
}

/// Human-readable definition of the residual-population model.
pub const RESIDUAL_MODEL: &str =
    "rho0(r) = (1-r)(lambda|2><2| + (1-lambda)|1><1|) + r|0><0|; rho1(r) = (1-r)(lambda|0><0| + (1-lambda)|1><1|) + r|2><2|";

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidParameter(format!(
            "lambda {lambda} outside [0, 1]"
        )));
    }
    Ok(())
}

/// The two orthonormal logical states for `spec`.
pub fn logical_states_ideal(spec: LogicalBitSpec) -> (StateVector, StateVector) {
    let a = c(spec.lambda.sqrt(), 0.0);
    let b = C64::from_polar((1.0 - spec.lambda).sqrt(), spec.phi);
    let build = |terms: &[(&[usize], C64)]| {
        let dim = 9;
        let mut v = crate::linalg::CVector::zeros(dim);
        for (digits, amp) in terms {
            v[digits[0] * 3 + digits[1]] += amp;
        }
        StateVector::new(v, vec![3, 3]).expect("unit norm by construction")
    };
    (
        build(&[(&[1, 2], a), (&[0, 1], b)]),
        build(&[(&[2, 1], b), (&[1, 0], a)]),
    )
}

/// Token pair of the ideal logical states: `λ|2⟩⟨2| + (1-λ)|1⟩⟨1|` and
/// `λ|0⟩⟨0| + (1-λ)|1⟩⟨1|`.
pub fn ideal_tokens(lambda: f64) -> Result<(DensityMatrix, DensityMatrix)> {
    check_lambda(lambda)?;
    Ok((
        DensityMatrix::diagonal(&[0.0, 1.0 - lambda, lambda], vec![3])?,
        DensityMatrix::diagonal(&[lambda, 1.0 - lambda, 0.0], vec![3])?,
    ))
}

fn projector_without(mode: usize) -> CMatrix {
    let mut p = CMatrix::identity(3, 3);
    p[(mode, mode)] = c(0.0, 0.0);
    p
}

/// Simulated postselection of a two-qutrit resource onto logical bit `bit`.
///
/// Bit 0 keeps proof modes `{0, 1}` and swaps them; bit 1 keeps `{1, 2}` and
/// swaps them.
pub fn prepare_logical_from_source(rho: &DensityMatrix, bit: u8) -> Result<DensityMatrix> {
    if rho.dims() != [3, 3] {
        return Err(Error::DimensionMismatch(format!(
            "expected a two-qutrit state, got dims {:?}",
            rho.dims()
        )));
    }
    let (empty, perm) = match bit {
        0 => (2, [1, 0, 2]),
        1 => (0, [0, 2, 1]),
        _ => return Err(Error::InvalidParameter(format!("bit {bit}"))),
    };
    rho.project_renormalize(0, &projector_without(empty))?
        .permute_subsystem_basis(0, &perm)
}

/// Token (subsystem 1) reductions of two logical states.
pub fn token_states(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<(DensityMatrix, DensityMatrix)> {
    Ok((rho0.partial_trace(1)?, rho1.partial_trace(1)?))
}

/// `K = D(ρ₀, ρ₁)/2`.
pub fn knowledge_gain(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    Ok(trace_distance(rho0, rho1)? / 2.0)
}

/// `C = √F(ρ₀, ρ₁)/2` with the root fidelity `Tr √(√ρ₀ ρ₁ √ρ₀)`.
pub fn control(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    Ok(sqrt_fidelity(rho0, rho1)? / 2.0)
}

pub fn security_point(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<SecurityPoint> {
    Ok(SecurityPoint {
        k: knowledge_gain(rho0, rho1)?,
        c: control(rho0, rho1)?,
    })
}

/// Security point of a pair of logical states.
pub fn security_point_from_logical(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
) -> Result<SecurityPoint> {
    let (t0, t1) = token_states(rho0, rho1)?;
    security_point(&t0, &t1)
}

/// `(λ/2, (1-λ)/2)` for each `λ`.
pub fn curve_ideal_qutrit(lambdas: &[f64], exec: Exec) -> Result<Vec<SecurityPoint>> {
    exec.map(lambdas, |&l| {
        let (t0, t1) = ideal_tokens(l)?;
        security_point(&t0, &t1)
    })
    .into_iter()
    .collect()
}

/// Qubit tokens `diag(λ, 1-λ)` and `diag(1-λ, λ)`, giving the arc
/// `K² + C² = 1/4` for `λ ∈ [0, 1/2]`.
pub fn curve_qubit_boundary(lambdas: &[f64], exec: Exec) -> Result<Vec<SecurityPoint>> {
    exec.map(lambdas, |&l| {
        if !(0.0..=0.5).contains(&l) {
            return Err(Error::InvalidParameter(format!(
                "lambda {l} outside [0, 1/2]"
            )));
        }
        let t0 = DensityMatrix::diagonal(&[l, 1.0 - l], vec![2])?;
        let t1 = DensityMatrix::diagonal(&[1.0 - l, l], vec![2])?;
        security_point(&t0, &t1)
    })
    .into_iter()
    .collect()
}

/// Depolarized ideal tokens at fixed `lambda` for each `p`.
pub fn curve_depolarized(lambda: f64, ps: &[f64], exec: Exec) -> Result<Vec<SecurityPoint>> {
    exec.map(ps, |&p| {
        let (t0, t1) = NoiseModel::Depolarizing { p }.tokens(lambda)?;
        security_point(&t0, &t1)
    })
    .into_iter()
    .collect()
}

/// One row of the curve table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub curve: String,
    pub param: f64,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

/// Noise weights highlighted on the depolarized curves.
pub const MARKED_P: [f64; 3] = [0.09, 0.19, 0.29];
/// `λ` of curve Z.
pub const Z_LAMBDA: f64 = 0.27;
/// `λ` of curve Y.
pub const Y_LAMBDA: f64 = 0.5;

fn grid(start: f64, stop: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|i| start + (stop - start) * i as f64 / n as f64)
        .collect()
}

/// All curves: W (ideal qutrit, `λ ∈ [0,1]`), X (qubit arc,
/// `λ ∈ [0,1/2]`), Y and Z (depolarized at `λ = 0.5` and `0.27`,
/// `p ∈ [0, 0.5]` in steps of 0.01) plus the marked `p` rows.
pub fn all_curves(exec: Exec) -> Result<Vec<CurveRow>> {
    let rows = |name: &str, params: &[f64], points: Vec<SecurityPoint>| {
        params
            .iter()
            .zip(points)
            .map(|(&param, pt)| CurveRow {
                curve: name.to_string(),
                param,
                k: pt.k,
                c: pt.c,
            })
            .collect::<Vec<_>>()
    };
    let w = grid(0.0, 1.0, 100);
    let x = grid(0.0, 0.5, 100);
    let p = grid(0.0, 0.5, 50);
    let mut out = rows("W", &w, curve_ideal_qutrit(&w, exec)?);
    out.extend(rows("X", &x, curve_qubit_boundary(&x, exec)?));
    out.extend(rows("Y", &p, curve_depolarized(Y_LAMBDA, &p, exec)?));
    out.extend(rows("Z", &p, curve_depolarized(Z_LAMBDA, &p, exec)?));
    out.extend(rows(
        "Y_marked",
        &MARKED_P,
        curve_depolarized(Y_LAMBDA, &MARKED_P, exec)?,
    ));
    out.extend(rows(
        "Z_marked",
        &MARKED_P,
        curve_depolarized(Z_LAMBDA, &MARKED_P, exec)?,
    ));
    Ok(out)
}

/// Golden-section maximization on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    let mid = 0.5 * (lo + hi);
    // The optimum may sit on an endpoint of the original interval.
    [mid, lo, hi]
        .into_iter()
        .map(|x| (x, f(x)))
        .fold((mid, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
        .0
}

fn mean_token_fidelity(t0: &DensityMatrix, t1: &DensityMatrix, lambda: f64) -> Result<(f64, f64)> {
    let (i0, i1) = ideal_tokens(lambda)?;
    Ok((fidelity(t0, &i0)?, fidelity(t1, &i1)?))
}

/// Everything derived from a measured two-qutrit resource.
#[derive(Clone, Debug)]
pub struct BcReport {
    pub tokens: (DensityMatrix, DensityMatrix),
    pub point: SecurityPoint,
    /// `λ` of the ideal token pair closest (mean squared fidelity) to the
    /// measured tokens.
    pub fitted_lambda: f64,
    /// Squared fidelity of each token with its ideal counterpart at
    /// `fitted_lambda`.
    pub token_fidelities: (f64, f64),
    /// Population of token 0 in mode 0 and of token 1 in mode 2.
    pub residual_populations: (f64, f64),
    /// Largest residual population keeping `fitted_lambda` strictly inside
    /// the qubit arc, when the model crosses it.
    pub residual_threshold: Option<f64>,
}

/// Postselects both logical bits from `rho` and analyses the tokens.
pub fn security_point_from_source(rho: &DensityMatrix) -> Result<BcReport> {
    let l0 = prepare_logical_from_source(rho, 0)?;
    let l1 = prepare_logical_from_source(rho, 1)?;
    let (t0, t1) = token_states(&l0, &l1)?;
    let point = security_point(&t0, &t1)?;
    let score = |l: f64| {
        mean_token_fidelity(&t0, &t1, l)
            .map(|(a, b)| 0.5 * (a + b))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let fitted_lambda = golden_max(score, 0.0, 1.0, 1e-6);
    let token_fidelities = mean_token_fidelity(&t0, &t1, fitted_lambda)?;
    let residual_populations = (t0.matrix()[(0, 0)].re, t1.matrix()[(2, 2)].re);
    let residual_threshold = match residual_threshold(fitted_lambda) {
        Ok(r) => Some(r),
        Err(Error::NoCrossing) | Err(Error::InvalidParameter(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(BcReport {
        tokens: (t0, t1),
        point,
        fitted_lambda,
        token_fidelities,
        residual_populations,
        residual_threshold,
    })
}

/// `K² + C² - 1/4` for the residual-population model.
pub fn residual_boundary_gap(lambda: f64, r: f64) -> Result<f64> {
    let (t0, t1) = NoiseModel::ResidualPopulation { r }.tokens(lambda)?;
    Ok(security_point(&t0, &t1)?.radius_squared() - 0.25)
}

/// Number of sweep intervals on `[0, 1/2]` before bisection.
const SWEEP_STEPS: usize = 500;

/// Largest residual population `r` for which the residual-population model
/// (see [`RESIDUAL_MODEL`]) stays strictly inside the qubit arc.
///
/// A sign sweep over `r ∈ [0, 1/2]` brackets the first exit from the arc,
/// then bisection narrows it to 1e-6. Touching the arc without leaving it
/// does not count as a crossing.
pub fn residual_threshold(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda {lambda} outside (0, 1)"
        )));
    }
    let gap = |r: f64| residual_boundary_gap(lambda, r);
    let mut prev = 0.0;
    if gap(prev)? > BOUNDARY_TOL {
        return Err(Error::NoCrossing);
    }
    for i in 1..=SWEEP_STEPS {
        let r = 0.5 * i as f64 / SWEEP_STEPS as f64;
        if gap(r)? > BOUNDARY_TOL {
            let (mut lo, mut hi) = (prev, r);
            while hi - lo > 1e-6 {
                let mid = 0.5 * (lo + hi);
                if gap(mid)? > BOUNDARY_TOL {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(lo);
        }
        prev = r;
    }
    Err(Error::NoCrossing)
}
