//! Subcommand implementations.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use quditlab::bitcommit::{all_curves, security_point_from_source};
use quditlab::entanglement::analyze;
use quditlab::io::{
    self, entanglement_json, schema_tag, BcReportJson, CountsFile, DecompositionJson,
    DensityMatrixJson, ReconstructionReport, SetDescriptor, DECOMPOSITION, GOUY,
};
use quditlab::linalg::C64;
use quditlab::modes::{
    displaced_vortex_by_quadrature, displaced_vortex_decomposition, gouy_phase, Quadrature,
};
use quditlab::qudit::fidelity;
use quditlab::tomography::{
    born_probabilities, expected_counts, measurement_set, reconstruct_mle, simulate_counts,
    MleOptions, Objective, SetFlavor,
};
use quditlab::{states, DensityMatrix, Exec};
use serde::Serialize;

use crate::{
    AnalyzeArgs, BcCommand, Command, Family, ModesCommand, ObjectiveArg, SetArg, StateArgs,
    TomoCommand,
};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Modes(cmd) => modes(cmd),
        Command::Tomo(cmd) => tomo(cmd),
        Command::State(args) => state(args),
        Command::Analyze(args) => analyze_cmd(args),
        Command::Bc(cmd) => bc(cmd),
    }
}

/// Writes `text` to `out`, or to stdout when no path (or `-`) is given.
fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out.filter(|p| *p != Path::new("-")) {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    emit(out, &io::to_json_string(value)?)
}

/// Reads a density matrix from a density-matrix file or from the `density`
/// field of a reconstruction report.
fn load_rho(path: &Path) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let tag = serde_json::from_str::<serde_json::Value>(&text)
        .ok()
        .and_then(|v| v.get("schema").and_then(|s| s.as_str()).map(str::to_owned));
    let rho = match tag {
        Some(tag) if tag == schema_tag(io::RECONSTRUCTION) => {
            io::from_json_str::<ReconstructionReport>(&text)?
                .density
                .to_density()
        }
        _ => io::parse_density(&text),
    };
    rho.with_context(|| format!("loading {}", path.display()))
}

fn modes(cmd: ModesCommand) -> Result<()> {
    match cmd {
        ModesCommand::Decompose {
            displacement,
            waist,
            quadrature,
            out,
        } => {
            let x0 = displacement * waist;
            let (c_g, c_v, residue, method) = if quadrature {
                let num = displaced_vortex_by_quadrature(x0, waist, &Quadrature::default())?;
                (num.c_g, num.c_v, Some(num.residue), "quadrature")
            } else {
                let (c_g, c_v) = displaced_vortex_decomposition(x0, waist)?;
                (c_g, c_v, None, "analytic")
            };
            emit_json(
                out.as_deref(),
                &DecompositionJson {
                    schema: schema_tag(DECOMPOSITION),
                    displacement,
                    waist,
                    c_g,
                    c_v,
                    abs_c_g: c_g.norm(),
                    abs_c_v: c_v.norm(),
                    method: method.into(),
                    residue,
                },
            )
        }
        ModesCommand::Gouy { order, z, zr, out } => {
            #[derive(Serialize)]
            struct Gouy {
                schema: String,
                order: u32,
                z: f64,
                z_r: f64,
                phase: f64,
            }
            emit_json(
                out.as_deref(),
                &Gouy {
                    schema: schema_tag(GOUY),
                    order,
                    z,
                    z_r: zr,
                    phase: gouy_phase(order, z, zr)?,
                },
            )
        }
        ModesCommand::Raster {
            mode,
            waist,
            size,
            half_width,
            out,
        } => {
            let sidecar = crate::raster::write(mode, waist, size, half_width, &out)?;
            emit_json(Some(&crate::raster::sidecar_path(&out)), &sidecar)
        }
    }
}

fn flavor(set: SetArg) -> SetFlavor {
    match set {
        SetArg::Minimal => SetFlavor::Minimal,
        SetArg::Overcomplete => SetFlavor::Overcomplete,
    }
}

fn tomo(cmd: TomoCommand) -> Result<()> {
    match cmd {
        TomoCommand::Simulate {
            state,
            set,
            shots,
            seed,
            expected,
            out,
        } => {
            let rho = load_rho(&state)?;
            let dims = rho.dims().to_vec();
            let d = dims[0];
            if dims.iter().any(|&di| di != d) {
                bail!("measurement sets need equal arm dimensions, got {dims:?}");
            }
            let settings = measurement_set(d, dims.len(), flavor(set))?;
            let probs = born_probabilities(&rho, &settings, Exec::default())?;
            let (records, seed) = if expected {
                (expected_counts(&probs, shots)?, None)
            } else {
                (simulate_counts(&probs, shots, seed)?, Some(seed))
            };
            let file = CountsFile::new(dims, shots, Some(flavor(set)), seed, &settings, &records)?;
            emit_json(out.as_deref(), &file)
        }
        TomoCommand::Reconstruct {
            counts,
            truth,
            max_iters,
            restarts,
            seed,
            objective,
            out,
        } => {
            let file: CountsFile =
                io::read_json(&counts).with_context(|| format!("loading {}", counts.display()))?;
            let (settings, records) = file.resolve()?;
            let mut options = MleOptions {
                objective: match objective {
                    ObjectiveArg::Poisson => Objective::Poisson,
                    ObjectiveArg::LeastSquares => Objective::LeastSquares,
                },
                ..MleOptions::default()
            };
            if let Some(n) = max_iters {
                options.optimizer.max_iters = n;
            }
            if let Some(n) = restarts {
                options.restarts = n;
            }
            if let Some(s) = seed {
                options.seed = s;
            }
            let fit = reconstruct_mle(&records, &settings, &options)?;
            let fid = truth
                .map(|path| -> Result<f64> { Ok(fidelity(&fit.rho, &load_rho(&path)?)?) })
                .transpose()?;
            let set = SetDescriptor {
                flavor: file.set,
                settings: settings.len(),
                shots: file.shots,
            };
            let report = ReconstructionReport::new(&fit, options.objective, set, fid);
            let status = if fit.converged {
                "converged"
            } else {
                "NOT converged (iteration cap)"
            };
            eprintln!(
                "{status}: {} iterations over {} runs, objective {:.6} (start {:.6})",
                fit.iterations, fit.runs, fit.objective_value, fit.initial_value
            );
            if let Some(f) = fid {
                eprintln!("fidelity to truth: {f:.6}");
            }
            emit_json(out.as_deref(), &report)
        }
    }
}

fn state(args: StateArgs) -> Result<()> {
    let pure = match args.family {
        Family::PhiPlus => {
            if !(2..=3).contains(&args.d) {
                bail!("phi-plus supports d = 2 or 3, got {}", args.d);
            }
            states::phi_plus(args.d).density()
        }
        Family::Nonmax => {
            let eps = C64::from_polar(args.epsilon, args.phase * std::f64::consts::PI);
            match args.d {
                2 => states::nonmax_qubit(eps).density(),
                3 => states::nonmax_qutrit(eps).density(),
                d => bail!("nonmax family exists for d = 2 or 3, got {d}"),
            }
        }
        Family::Werner => {
            if args.d != 2 {
                bail!("werner states are two-qubit states");
            }
            states::werner(args.p)?
        }
    };
    let rho = match args.linear_entropy {
        Some(target) => states::depolarize(&pure, states::white_noise_weight(target)?)?,
        None => pure,
    };
    emit_json(args.out.as_deref(), &DensityMatrixJson::from_density(&rho))
}

fn analyze_cmd(args: AnalyzeArgs) -> Result<()> {
    let rho = load_rho(&args.rho)?;
    let report = analyze(&rho, Exec::default())?;
    if report.tangle.is_none() {
        eprintln!(
            "warning: tangle, concurrence and eof are defined for two qubits only; omitted for dims {:?}",
            rho.dims()
        );
    }
    emit_json(args.out.as_deref(), &entanglement_json(report))
}

fn bc(cmd: BcCommand) -> Result<()> {
    match cmd {
        BcCommand::Analyze { rho, out } => {
            let rho = load_rho(&rho)?;
            let report = security_point_from_source(&rho)?;
            if report.residual_threshold.is_none() {
                eprintln!(
                    "warning: no residual-population threshold at lambda = {:.4}",
                    report.fitted_lambda
                );
            }
            emit_json(out.as_deref(), &BcReportJson::new(&report))
        }
        BcCommand::Curves { out } => {
            let rows = all_curves(Exec::default())?;
            let mut writer = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                writer.serialize(row)?;
            }
            let bytes = writer.into_inner().context("flushing CSV")?;
            emit(out.as_deref(), std::str::from_utf8(&bytes)?)
        }
    }
}
