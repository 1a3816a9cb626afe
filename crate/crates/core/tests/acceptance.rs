//! Acceptance criteria. Each test writes one `criterion N: PASS|FAIL` line to
//! stderr (uncaptured) and then asserts.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use quditlab::bitcommit::{self, LogicalBitSpec, NoiseModel};
use quditlab::entanglement::{eof_upper_bound, tangle, wootters_eof};
use quditlab::linalg::{self, c, CMatrix};
use quditlab::modes::{displaced_vortex_by_quadrature, displaced_vortex_decomposition, Quadrature};
use quditlab::qudit::{fidelity, trace_distance};
use quditlab::random;
use quditlab::tomography::{
    born_probabilities, expected_counts, measurement_set, reconstruct_mle, simulate_counts,
    MleOptions, SetFlavor,
};
use quditlab::{states, DensityMatrix, Exec, StateVector, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Criteria run one at a time so their wall-clock limits are meaningful.
static SERIAL: Mutex<()> = Mutex::new(());

struct Outcome {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn run(id: u32, title: &str, limit: Duration, body: impl FnOnce(&mut Outcome)) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let mut out = Outcome::new();
    body(&mut out);
    let elapsed = start.elapsed();
    out.check(
        elapsed < limit,
        format!("runtime {:.2?} exceeds {:.0?}", elapsed, limit),
    );
    let status = if out.failures.is_empty() {
        "PASS"
    } else {
        "FAIL"
    };
    let mut line = format!("criterion {id}: {status} {title} [{elapsed:.2?} of {limit:.0?}]");
    for n in &out.notes {
        line.push_str(&format!("\n    {n}"));
    }
    for f in &out.failures {
        line.push_str(&format!("\n    failed: {f}"));
    }
    let _ = writeln!(std::io::stderr(), "{line}");
    assert!(
        out.failures.is_empty(),
        "criterion {id} failed: {:?}",
        out.failures
    );
}

/// Root fidelity straight from the definition `Tr √(√ρ σ √ρ)`.
fn root_fidelity_by_definition(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let (vals, vecs) = linalg::hermitian_eigh(rho.matrix());
    let mut s = vecs.clone();
    for (j, v) in vals.iter().enumerate() {
        s.column_mut(j).scale_mut(v.max(0.0).sqrt());
    }
    let sqrt_rho = &s * vecs.adjoint();
    let inner = &sqrt_rho * sigma.matrix() * &sqrt_rho;
    linalg::hermitian_eigenvalues(&inner)
        .iter()
        .map(|v| v.max(0.0).sqrt())
        .sum()
}

/// Concurrence from the eigenvalues of `ρ ρ̃` (non-Hermitian route).
fn concurrence_by_definition(rho: &DensityMatrix) -> f64 {
    let zero = c(0.0, 0.0);
    let sy = CMatrix::from_row_slice(2, 2, &[zero, c(0.0, -1.0), c(0.0, 1.0), zero]);
    let yy = sy.kronecker(&sy);
    let m = rho.matrix();
    let prod = m * (&yy * m.conjugate() * &yy);
    let mut mu: Vec<f64> = prod
        .eigenvalues()
        .expect("Schur decomposition of a 4x4 matrix")
        .iter()
        .map(|z| z.re.max(0.0).sqrt())
        .collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    (mu[0] - mu[1] - mu[2] - mu[3]).max(0.0)
}

fn binary_entropy(x: f64) -> f64 {
    [x, 1.0 - x]
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

fn tomography_states() -> Vec<(&'static str, DensityMatrix)> {
    let noisy_qutrit = states::with_linear_entropy(
        &states::nonmax_qutrit(C64::from_polar(1.79, -0.07 * PI)),
        0.18,
    )
    .unwrap();
    vec![
        ("phi+ qubits", states::phi_plus(2).density()),
        (
            "nonmax qubit eps=0.60",
            states::nonmax_qubit(c(0.60, 0.0)).density(),
        ),
        ("nonmax qutrit eps=1.79e^-0.07ipi, S_L=0.18", noisy_qutrit),
    ]
}

#[test]
fn criterion_1_ideal_security_curve() {
    run(
        1,
        "ideal tokens give (lambda/2, (1-lambda)/2) within 1e-9",
        Duration::from_secs(1),
        |out| {
            let mut worst = 0.0f64;
            for i in 0..=10 {
                let lambda = i as f64 / 10.0;
                let (a, b) =
                    bitcommit::logical_states_ideal(LogicalBitSpec::new(lambda, 0.0).unwrap());
                let (t0, t1) = bitcommit::token_states(&a.density(), &b.density()).unwrap();
                let k = bitcommit::knowledge_gain(&t0, &t1).unwrap();
                let cc = bitcommit::control(&t0, &t1).unwrap();
                worst = worst
                    .max((k - lambda / 2.0).abs())
                    .max((cc - (1.0 - lambda) / 2.0).abs());
            }
            out.note(format!("max deviation {worst:.2e}"));
            out.check(worst <= 1e-9, format!("deviation {worst:e} > 1e-9"));
        },
    );
}

#[test]
fn criterion_2_displaced_vortex_rule() {
    run(
        2,
        "quadrature |c_G/c_V| matches x0/(w/sqrt2) within 1e-5",
        Duration::from_secs(10),
        |out| {
            let waist = 1.0;
            let quad = Quadrature::default();
            let at_rule =
                displaced_vortex_by_quadrature(waist * FRAC_1_SQRT_2, waist, &quad).unwrap();
            let ratio = at_rule.c_g.norm() / at_rule.c_v.norm();
            out.note(format!("x0 = w/sqrt2: |c_G/c_V| = {ratio:.9}"));
            out.check(
                (ratio - 1.0).abs() <= 1e-5,
                format!("ratio {ratio} at x0 = w/sqrt2"),
            );
            for frac in [0.2, 0.5, 1.0] {
                let x0 = frac * waist;
                let numeric = displaced_vortex_by_quadrature(x0, waist, &quad).unwrap();
                let (g, v) = displaced_vortex_decomposition(x0, waist).unwrap();
                let analytic = x0 / (waist * FRAC_1_SQRT_2);
                let quad_ratio = numeric.c_g.norm() / numeric.c_v.norm();
                out.note(format!(
                "x0 = {frac}w: analytic {analytic:.9}, closed form {:.9}, quadrature {quad_ratio:.9}",
                g.norm() / v.norm()
            ));
                out.check(
                    (quad_ratio - analytic).abs() <= 1e-5,
                    format!("x0 = {frac}w: quadrature {quad_ratio} vs {analytic}"),
                );
            }
        },
    );
}

#[test]
fn criterion_3_tomography_round_trip() {
    run(
        3,
        "simulate 1e4 shots/setting, MLE, squared fidelity >= 0.99 in >= 18/20 seeds",
        Duration::from_secs(600),
        |out| {
            for (name, truth) in tomography_states() {
                if truth.dim() == 9 {
                    let s_l = truth.linear_entropy();
                    out.check((s_l - 0.18).abs() <= 0.005, format!("S_L {s_l}"));
                }
                let d = truth.dims()[0];
                let set = measurement_set(d, 2, SetFlavor::Overcomplete).unwrap();
                let probs = born_probabilities(&truth, &set, Exec::Sequential).unwrap();
                // Seeds run in parallel; each reconstruction is sequential inside.
                let fids = Exec::default().map_range(20, |seed| {
                    let recs = simulate_counts(&probs, 10_000, seed as u64).unwrap();
                    let opts = MleOptions {
                        exec: Exec::Sequential,
                        ..MleOptions::default()
                    };
                    let fit = reconstruct_mle(&recs, &set, &opts).unwrap();
                    fidelity(&fit.rho, &truth).unwrap()
                });
                let good = fids.iter().filter(|&&f| f >= 0.99).count();
                let min = fids.iter().copied().fold(f64::INFINITY, f64::min);
                out.note(format!("{name}: {good}/20 seeds >= 0.99 (min {min:.4})"));
                out.check(good >= 18, format!("{name}: only {good}/20 seeds"));
            }
        },
    );
}

#[test]
fn criterion_4_entanglement_oracles() {
    run(
        4,
        "tangle oracles, Werner closed form, EOF bound >= Wootters",
        Duration::from_secs(30),
        |out| {
            let bell = tangle(&states::phi_plus(2).density()).unwrap();
            let product = tangle(&StateVector::basis(&[2, 2], &[0, 1]).unwrap().density()).unwrap();
            out.check((bell - 1.0).abs() <= 1e-9, format!("tangle(phi+) = {bell}"));
            out.check(
                product.abs() <= 1e-9,
                format!("tangle(product) = {product}"),
            );
            for p in [0.0, 0.4, 0.8, 1.0] {
                let t = tangle(&states::werner(p).unwrap()).unwrap();
                let closed = ((3.0 * p - 1.0) / 2.0f64).max(0.0).powi(2);
                out.check(
                    (t - closed).abs() <= 1e-9,
                    format!("Werner p={p}: {t} vs {closed}"),
                );
            }
            let mut rng = ChaCha8Rng::seed_from_u64(2024);
            let mut violations = 0;
            let mut oracle_gap = 0.0f64;
            for i in 0..100 {
                let rho = random::mixed_state(&[2, 2], 1 + i % 4, &mut rng);
                let conc = concurrence_by_definition(&rho);
                let exact = binary_entropy(0.5 * (1.0 + (1.0 - conc * conc).max(0.0).sqrt()));
                oracle_gap = oracle_gap.max((exact - wootters_eof(&rho).unwrap()).abs());
                if eof_upper_bound(&rho).unwrap() < exact - 1e-9 {
                    violations += 1;
                }
            }
            out.note(format!(
            "100 random states: {violations} violations; library vs test Wootters EOF max gap {oracle_gap:.1e}"
        ));
            out.check(violations == 0, format!("{violations} bound violations"));
        },
    );
}

#[test]
fn criterion_5_noise_curves() {
    run(
        5,
        "depolarized curves match closed forms at p = 0.09, 0.19, 0.29",
        Duration::from_secs(1),
        |out| {
            let mut worst = 0.0f64;
            for lambda in [0.5, 0.27] {
                let pts =
                    bitcommit::curve_depolarized(lambda, &bitcommit::MARKED_P, Exec::default())
                        .unwrap();
                for (&p, pt) in bitcommit::MARKED_P.iter().zip(&pts) {
                    let q = p / 3.0;
                    let k_closed = (1.0 - p) * lambda / 2.0;
                    let c_closed = ((1.0 - p) * (1.0 - lambda)
                        + q
                        + 2.0 * (q * ((1.0 - p) * lambda + q)).sqrt())
                        / 2.0;
                    let (t0, t1) = NoiseModel::Depolarizing { p }.tokens(lambda).unwrap();
                    let c_matrix = root_fidelity_by_definition(&t0, &t1) / 2.0;
                    for (got, want) in [(pt.k, k_closed), (pt.c, c_closed), (c_matrix, c_closed)] {
                        worst = worst.max((got - want).abs());
                    }
                }
            }
            out.note(format!("max deviation {worst:.2e}"));
            out.check(worst <= 1e-9, format!("deviation {worst:e} > 1e-9"));
        },
    );
}

#[test]
fn criterion_6_qubit_boundary() {
    run(
        6,
        "qubit arc K^2+C^2 = 1/4, ideal qutrit points strictly inside",
        Duration::from_secs(1),
        |out| {
            let lambdas: Vec<f64> = (0..=100).map(|i| 0.5 * i as f64 / 100.0).collect();
            let arc = bitcommit::curve_qubit_boundary(&lambdas, Exec::default()).unwrap();
            let worst = arc
                .iter()
                .map(|p| (p.k * p.k + p.c * p.c - 0.25).abs())
                .fold(0.0, f64::max);
            out.note(format!("arc max |K^2+C^2-1/4| = {worst:.1e}"));
            out.check(worst <= 1e-12, format!("arc deviation {worst:e}"));
            let inner: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
            let w = bitcommit::curve_ideal_qutrit(&inner, Exec::default()).unwrap();
            let outside = w.iter().filter(|p| p.k * p.k + p.c * p.c >= 0.25).count();
            out.check(
                outside == 0,
                format!("{outside} ideal qutrit points not strictly inside"),
            );
        },
    );
}

#[test]
fn criterion_7_decoherence_sensitivity() {
    run(
        7,
        "noisy source inside qubit region, pure source not, r*(0.27) in [0.003, 0.03]",
        Duration::from_secs(60),
        |out| {
            let (_, noisy) = tomography_states().pop().unwrap();
            let noisy_report = bitcommit::security_point_from_source(&noisy).unwrap();
            let p = noisy_report.point;
            out.note(format!(
                "S_L=0.18 source: K={:.4} C={:.4} K^2+C^2={:.4} inside_qubit_region={}",
                p.k,
                p.c,
                p.radius_squared(),
                p.inside_qubit_region()
            ));
            out.check(
                p.inside_qubit_region(),
                "S_L=0.18 source is not inside the qubit region",
            );

            let pure = states::nonmax_qutrit(c(1.79, 0.0)).density();
            let pure_point = bitcommit::security_point_from_source(&pure).unwrap().point;
            out.note(format!(
                "pure eps=1.79 source: K={:.4} C={:.4} inside_qubit_region={}",
                pure_point.k,
                pure_point.c,
                pure_point.inside_qubit_region()
            ));
            out.check(
                !pure_point.inside_qubit_region(),
                "pure source is inside the qubit region",
            );

            match bitcommit::residual_threshold(0.27) {
                Ok(r) => {
                    out.note(format!("r*(0.27) = {r:.6}"));
                    out.check(
                        (0.003..=0.03).contains(&r),
                        format!("r* = {r} outside [0.003, 0.03]"),
                    );
                }
                Err(e) => out.check(false, format!("residual_threshold(0.27): {e}")),
            }
        },
    );
}

#[test]
fn criterion_8_mle_exact_data() {
    run(
        8,
        "MLE on noise-free expected counts reaches trace distance <= 1e-3",
        Duration::from_secs(300),
        |out| {
            for (name, truth) in tomography_states() {
                let d = truth.dims()[0];
                let set = measurement_set(d, 2, SetFlavor::Overcomplete).unwrap();
                let probs = born_probabilities(&truth, &set, Exec::Sequential).unwrap();
                let recs = expected_counts(&probs, 10_000).unwrap();
                let fit = reconstruct_mle(&recs, &set, &MleOptions::default()).unwrap();
                let td = trace_distance(&fit.rho, &truth).unwrap();
                out.note(format!(
                    "{name}: trace distance {td:.2e}, converged {}",
                    fit.converged
                ));
                out.check(td <= 1e-3, format!("{name}: trace distance {td:e}"));
            }
        },
    );
}
