use std::f64::consts::FRAC_1_SQRT_2;

use proptest::prelude::*;
use quditlab::linalg::c;
use quditlab::modes::{
    displaced_vortex_by_quadrature, overlap, singularity_rotation, FieldSuperposition, ModeKind,
    ModeSpec, Quadrature,
};

const W: f64 = 0.8;

fn check_orthonormal(modes: &[ModeKind]) {
    for (i, &a) in modes.iter().enumerate() {
        for &b in &modes[i..] {
            let o = overlap(&ModeSpec::new(a, W).unwrap(), &ModeSpec::new(b, W).unwrap()).unwrap();
            let expected = if a == b { 1.0 } else { 0.0 };
            assert!((o - c(expected, 0.0)).norm() < 1e-5, "<{a:?}|{b:?}> = {o}");
        }
    }
}

#[test]
fn first_six_hermite_gauss_modes_are_orthonormal() {
    let modes: Vec<ModeKind> = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        .into_iter()
        .map(|(r, s)| ModeKind::Hg { r, s })
        .collect();
    check_orthonormal(&modes);
}

#[test]
fn first_six_laguerre_gauss_modes_are_orthonormal() {
    let modes: Vec<ModeKind> = [(0, 0), (0, 1), (0, -1), (0, 2), (0, -2), (1, 0)]
        .into_iter()
        .map(|(p, l)| ModeKind::Lgv { p, l })
        .collect();
    check_orthonormal(&modes);
}

#[test]
fn hg10_is_the_even_vortex_superposition() {
    let hg10 = ModeSpec::hg(1, 0, W).unwrap();
    let lg = FieldSuperposition::new(
        &[
            (c(FRAC_1_SQRT_2, 0.0), ModeKind::Lgv { p: 0, l: 1 }),
            (c(FRAC_1_SQRT_2, 0.0), ModeKind::Lgv { p: 0, l: -1 }),
        ],
        W,
    )
    .unwrap();
    assert!((overlap(&hg10, &lg).unwrap() - c(1.0, 0.0)).norm() < 1e-5);
}

fn balanced() -> FieldSuperposition {
    FieldSuperposition::new(
        &[
            (c(FRAC_1_SQRT_2, 0.0), ModeKind::GAUSSIAN),
            (c(0.0, FRAC_1_SQRT_2), ModeKind::Lgv { p: 0, l: 1 }),
        ],
        W,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn displaced_vortex_stays_in_the_order_one_space(x in 0.0f64..=1.0) {
        let num = displaced_vortex_by_quadrature(x * W, W, &Quadrature::default()).unwrap();
        prop_assert!(num.residue.abs() < 1e-6, "residue {}", num.residue);
        prop_assert!((num.c_g.norm_sqr() + num.c_v.norm_sqr() + num.residue - 1.0).abs() < 1e-6);
    }

    #[test]
    fn singularity_rotation_increases_with_distance(z in 0.0f64..20.0, dz in 1e-3f64..5.0, z_r in 0.1f64..3.0) {
        let field = balanced();
        let a = singularity_rotation(&field, z, z_r).unwrap();
        let b = singularity_rotation(&field, z + dz, z_r).unwrap();
        prop_assert!(b > a, "rotation({}) = {} <= rotation({}) = {}", z + dz, b, z, a);
    }
}
