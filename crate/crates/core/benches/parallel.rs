//! Sequential vs rayon execution of the data-parallel loops.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quditlab::bitcommit::all_curves;
use quditlab::entanglement::{fit_nonmax_entangled, NonMaxFamily};
use quditlab::linalg::C64;
use quditlab::modes::{DisplacedVortex, ModeSpec, Quadrature};
use quditlab::optimize::NelderMead;
use quditlab::tomography::{
    born_probabilities, measurement_set, reconstruct_mle, simulate_counts, MleOptions, SetFlavor,
};
use quditlab::{states, Exec};

const MODES: [(&str, Exec); 2] = [("seq", Exec::Sequential), ("par", Exec::Parallel)];

fn quadrature(c: &mut Criterion) {
    let mut group = c.benchmark_group("quadrature_overlap");
    let g = ModeSpec::gaussian(1.0).unwrap();
    let field = DisplacedVortex::new(0.5, 1.0).unwrap();
    for (name, exec) in MODES {
        let quad = Quadrature::with_exec(exec);
        group.bench_function(name, |b| {
            b.iter(|| quad.overlap(black_box(&g), &field).unwrap())
        });
    }
    group.finish();
}

fn mle_restarts(c: &mut Criterion) {
    let mut group = c.benchmark_group("mle_restarts");
    group.sample_size(10);
    let truth = states::werner(0.8).unwrap();
    let set = measurement_set(2, 2, SetFlavor::Overcomplete).unwrap();
    let probs = born_probabilities(&truth, &set, Exec::Sequential).unwrap();
    let records = simulate_counts(&probs, 10_000, 1).unwrap();
    for (name, exec) in MODES {
        let options = MleOptions {
            optimizer: NelderMead {
                max_iters: 5_000,
                ..MleOptions::default().optimizer
            },
            restarts: 4,
            exec,
            ..MleOptions::default()
        };
        group.bench_function(name, |b| {
            b.iter(|| reconstruct_mle(black_box(&records), &set, &options).unwrap())
        });
    }
    group.finish();
}

fn nonmax_grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("nonmax_fit");
    group.sample_size(20);
    let rho = states::with_linear_entropy(
        &states::nonmax_qutrit(C64::from_polar(1.79, -0.07 * std::f64::consts::PI)),
        0.18,
    )
    .unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| fit_nonmax_entangled(black_box(&rho), NonMaxFamily::Qutrit, exec).unwrap())
        });
    }
    group.finish();
}

fn seed_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo_seeds");
    group.sample_size(10);
    let truth = states::phi_plus(2).density();
    let set = measurement_set(2, 2, SetFlavor::Overcomplete).unwrap();
    let probs = born_probabilities(&truth, &set, Exec::Sequential).unwrap();
    let options = MleOptions {
        optimizer: NelderMead {
            max_iters: 2_000,
            ..MleOptions::default().optimizer
        },
        restarts: 0,
        exec: Exec::Sequential,
        ..MleOptions::default()
    };
    for seeds in [4usize, 8] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, seeds), &seeds, |b, &n| {
                b.iter(|| {
                    exec.map_range(n, |seed| {
                        let records = simulate_counts(&probs, 10_000, seed as u64).unwrap();
                        reconstruct_mle(&records, &set, &options)
                            .unwrap()
                            .objective_value
                    })
                })
            });
        }
    }
    group.finish();
}

fn curves(c: &mut Criterion) {
    let mut group = c.benchmark_group("security_curves");
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| all_curves(black_box(exec)).unwrap()));
    }
    group.finish();
}

criterion_group!(
    benches,
    quadrature,
    mle_restarts,
    nonmax_grid,
    seed_batch,
    curves
);
criterion_main!(benches);
