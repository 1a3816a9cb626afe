//! Random states and unitaries for property tests, Monte-Carlo checks and
//! benchmarks.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c, CMatrix, CVector, C64};
use crate::qudit::{DensityMatrix, StateVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im)
}

/// Complex Ginibre matrix with i.i.d. standard normal entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random unitary (QR of a Ginibre matrix with the R-diagonal phases removed).
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = ginibre(n, n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        q.column_mut(j).scale_mut_complex(phase);
    }
    q
}

trait ScaleComplex {
    fn scale_mut_complex(&mut self, s: C64);
}

impl<S> ScaleComplex for nalgebra::Matrix<C64, nalgebra::Dyn, nalgebra::U1, S>
where
    S: nalgebra::StorageMut<C64, nalgebra::Dyn, nalgebra::U1>,
{
    fn scale_mut_complex(&mut self, s: C64) {
        for z in self.iter_mut() {
            *z *= s;
        }
    }
}

/// `U₁ ⊗ U₂ ⊗ …` with independent Haar factors.
pub fn local_unitary<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> CMatrix {
    dims.iter().fold(CMatrix::identity(1, 1), |acc, &d| {
        linalg::kron(&acc, &unitary(d, rng))
    })
}

pub fn pure_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> StateVector {
    let n: usize = dims.iter().product();
    let v = CVector::from_fn(n, |_, _| gaussian(rng));
    StateVector::normalized(v, dims.to_vec()).expect("Gaussian vector is nonzero")
}

/// `G G† / Tr(G G†)` with `G` an `n × rank` Ginibre matrix.
pub fn mixed_state<R: Rng + ?Sized>(dims: &[usize], rank: usize, rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = ginibre(n, rank.max(1), rng);
    DensityMatrix::from_unnormalized(&g * g.adjoint(), dims.to_vec())
        .expect("Ginibre Gram matrix has positive trace")
}

/// Random convex mixture of `terms` product states `ρ_A ⊗ ρ_B ⊗ …`.
pub fn separable_state<R: Rng + ?Sized>(
    dims: &[usize],
    terms: usize,
    rng: &mut R,
) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let mut acc = CMatrix::zeros(n, n);
    for _ in 0..terms.max(1) {
        let w: f64 = rng.random::<f64>() + 1e-3;
        let product = dims.iter().fold(CMatrix::identity(1, 1), |m, &d| {
            let rank = rng.random_range(1..=d);
            linalg::kron(&m, mixed_state(&[d], rank, rng).matrix())
        });
        acc += product.scale(w);
    }
    DensityMatrix::from_unnormalized(acc, dims.to_vec()).expect("positive weights")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::Tolerance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = unitary(4, &mut rng);
        assert!((&u * u.adjoint() - CMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn samples_are_valid_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        mixed_state(&[3, 3], 4, &mut rng)
            .validate(Tolerance::STRICT)
            .unwrap();
        separable_state(&[2, 2], 3, &mut rng)
            .validate(Tolerance::STRICT)
            .unwrap();
        pure_state(&[2, 3], &mut rng)
            .density()
            .validate(Tolerance::STRICT)
            .unwrap();
    }
}
