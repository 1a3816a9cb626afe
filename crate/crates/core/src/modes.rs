//! Paraxial transverse modes at the beam waist.
//!
//! Hermite-Gauss `HG_rs` and Laguerre-Gauss-vortex `LGV_pl` amplitudes are
//! normalized so that `∫|u|² dx dy = 1`; `ω` is the intensity `1/e²` radius.
//! Propagation enters only through the Gouy phase `(N+1)·atan(z/z_R)` of a
//! mode of order `N`, applied as a phase factor `exp(-i(N+1)ψ)`.
//!
//! Overlaps are computed by a tensor trapezoid rule on `[-6ω, 6ω]²`; for
//! Gaussian-damped integrands the rule converges geometrically, and the grid
//! is doubled until two successive estimates agree.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{pairwise_sum, Exec};
use crate::linalg::{c, C64};

/// Mode family and indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "UPPERCASE")]
pub enum ModeKind {
    /// `r` horizontal and `s` vertical lines of phase discontinuity.
    Hg { r: u32, s: u32 },
    /// `p` ring discontinuities and a charge-`l` vortex.
    Lgv { p: u32, l: i32 },
}

impl ModeKind {
    pub const GAUSSIAN: ModeKind = ModeKind::Lgv { p: 0, l: 0 };

    pub fn order(self) -> u32 {
        match self {
            ModeKind::Hg { r, s } => r + s,
            ModeKind::Lgv { p, l } => 2 * p + l.unsigned_abs(),
        }
    }

    pub fn is_gaussian(self) -> bool {
        self.order() == 0
    }

    fn family(self) -> Option<char> {
        match self {
            _ if self.is_gaussian() => None,
            ModeKind::Hg { .. } => Some('H'),
            ModeKind::Lgv { .. } => Some('L'),
        }
    }

    /// `HG00` and `LGV00` are the same mode `G`.
    fn canonical(self) -> ModeKind {
        if self.is_gaussian() {
            ModeKind::GAUSSIAN
        } else {
            self
        }
    }
}

/// A mode of a given family with a waist.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeSpec {
    pub kind: ModeKind,
    pub waist: f64,
}

impl ModeSpec {
    pub fn new(kind: ModeKind, waist: f64) -> Result<Self> {
        check_waist(waist)?;
        Ok(Self { kind, waist })
    }

    pub fn hg(r: u32, s: u32, waist: f64) -> Result<Self> {
        Self::new(ModeKind::Hg { r, s }, waist)
    }

    pub fn lgv(p: u32, l: i32, waist: f64) -> Result<Self> {
        Self::new(ModeKind::Lgv { p, l }, waist)
    }

    pub fn gaussian(waist: f64) -> Result<Self> {
        Self::new(ModeKind::GAUSSIAN, waist)
    }

    pub fn order(&self) -> u32 {
        self.kind.order()
    }
}

fn check_waist(w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "waist must be positive, got {w}"
        )))
    }
}

/// Whether a set of logical modes forms a degenerate qudit (all the same order).
pub fn is_degenerate(modes: &[ModeKind]) -> bool {
    modes.windows(2).all(|w| w[0].order() == w[1].order())
}

/// Anything with a transverse amplitude profile at the waist plane.
pub trait TransverseField: Sync {
    fn amplitude(&self, x: f64, y: f64) -> C64;
    fn waist(&self) -> f64;
}

impl TransverseField for ModeSpec {
    fn amplitude(&self, x: f64, y: f64) -> C64 {
        mode_amplitude(self, x, y)
    }

    fn waist(&self) -> f64 {
        self.waist
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Physicists' Hermite polynomial `H_n(t)`.
pub fn hermite(n: u32, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * t);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * t * cur - 2.0 * f64::from(k) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_p^α(t)`.
pub fn laguerre(p: u32, alpha: f64, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - t);
    if p == 0 {
        return prev;
    }
    for k in 1..p {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 + alpha - t) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Normalized transverse amplitude of a single mode at `(x, y)`.
pub fn mode_amplitude(mode: &ModeSpec, x: f64, y: f64) -> C64 {
    let w = mode.waist;
    let r2 = (x * x + y * y) / (w * w);
    let gauss = (-r2).exp();
    match mode.kind {
        ModeKind::Hg { r, s } => {
            let norm = (2.0 / PI).sqrt()
                / w
                / (2f64.powi((r + s) as i32) * factorial(r) * factorial(s)).sqrt();
            let hx = hermite(r, SQRT_2 * x / w);
            let hy = hermite(s, SQRT_2 * y / w);
            c(norm * hx * hy * gauss, 0.0)
        }
        ModeKind::Lgv { p, l } => {
            let m = l.unsigned_abs();
            let norm = (2.0 * factorial(p) / (PI * factorial(p + m))).sqrt() / w;
            let sign = if l < 0 { -1.0 } else { 1.0 };
            let vortex = c(SQRT_2 * x / w, sign * SQRT_2 * y / w).powu(m);
            let radial = laguerre(p, f64::from(m), 2.0 * r2);
            vortex * (norm * radial * gauss)
        }
    }
}

/// Gouy phase `(order+1)·atan(z/z_R)` in radians.
pub fn gouy_phase(order: u32, z: f64, z_r: f64) -> Result<f64> {
    if !(z_r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Rayleigh range must be positive, got {z_r}"
        )));
    }
    Ok(f64::from(order + 1) * (z / z_r).atan())
}

/// Finite normalized superposition of modes sharing one waist.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSuperposition {
    terms: Vec<(C64, ModeKind)>,
    waist: f64,
}

impl FieldSuperposition {
    /// Merges repeated modes and normalizes so that `Σ|cᵢ|² = 1`.
    ///
    /// All non-Gaussian terms must come from one family, so the listed modes
    /// are orthonormal and the coefficient norm equals the field norm.
    pub fn new(terms: &[(C64, ModeKind)], waist: f64) -> Result<Self> {
        check_waist(waist)?;
        let mut merged: Vec<(C64, ModeKind)> = Vec::new();
        let mut family = None;
        for &(coef, kind) in terms {
            if let Some(f) = kind.family() {
                if family.is_some_and(|g| g != f) {
                    return Err(Error::InvalidParameter(
                        "superposition mixes HG and LGV modes".into(),
                    ));
                }
                family = Some(f);
            }
            let kind = kind.canonical();
            match merged.iter_mut().find(|(_, k)| *k == kind) {
                Some(entry) => entry.0 += coef,
                None => merged.push((coef, kind)),
            }
        }
        let norm = merged.iter().map(|(c, _)| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidParameter(
                "superposition has zero norm".into(),
            ));
        }
        merged.iter_mut().for_each(|(c, _)| *c /= norm);
        Ok(Self {
            terms: merged,
            waist,
        })
    }

    pub fn single(mode: ModeSpec) -> Self {
        Self {
            terms: vec![(c(1.0, 0.0), mode.kind.canonical())],
            waist: mode.waist,
        }
    }

    pub fn terms(&self) -> &[(C64, ModeKind)] {
        &self.terms
    }

    pub fn coefficient(&self, kind: ModeKind) -> C64 {
        let kind = kind.canonical();
        self.terms
            .iter()
            .filter(|(_, k)| *k == kind)
            .map(|(c, _)| *c)
            .sum()
    }
}

impl TransverseField for FieldSuperposition {
    fn amplitude(&self, x: f64, y: f64) -> C64 {
        self.terms
            .iter()
            .map(|&(coef, kind)| {
                coef * mode_amplitude(
                    &ModeSpec {
                        kind,
                        waist: self.waist,
                    },
                    x,
                    y,
                )
            })
            .sum()
    }

    fn waist(&self) -> f64 {
        self.waist
    }
}

/// The field `(x - x₀ + iy)·exp(-r²/ω²)`, normalized: a charge +1 vortex
/// whose singularity sits at `(x₀, 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DisplacedVortex {
    pub x0: f64,
    pub waist: f64,
}

impl DisplacedVortex {
    pub fn new(x0: f64, waist: f64) -> Result<Self> {
        check_waist(waist)?;
        Ok(Self { x0, waist })
    }

    fn norm(&self) -> f64 {
        let w2 = self.waist * self.waist;
        1.0 / (PI * w2 / 2.0 * (w2 / 2.0 + self.x0 * self.x0)).sqrt()
    }
}

impl TransverseField for DisplacedVortex {
    fn amplitude(&self, x: f64, y: f64) -> C64 {
        let r2 = (x * x + y * y) / (self.waist * self.waist);
        c(x - self.x0, y) * (self.norm() * (-r2).exp())
    }

    fn waist(&self) -> f64 {
        self.waist
    }
}

/// Tensor trapezoid quadrature over a square window.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    /// Window half-width in waists.
    pub half_width: f64,
    /// Intervals per axis on the first pass.
    pub start_intervals: usize,
    /// Give up beyond this many intervals per axis.
    pub max_intervals: usize,
    /// Stop once successive estimates differ by less than this.
    pub tol: f64,
    pub exec: Exec,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            half_width: 6.0,
            start_intervals: 64,
            max_intervals: 1024,
            tol: 1e-7,
            exec: Exec::default(),
        }
    }
}

impl Quadrature {
    pub fn with_exec(exec: Exec) -> Self {
        Self {
            exec,
            ..Self::default()
        }
    }

    /// `∫∫ conj(a)·b dx dy`.
    pub fn overlap<A, B>(&self, a: &A, b: &B) -> Result<C64>
    where
        A: TransverseField + ?Sized,
        B: TransverseField + ?Sized,
    {
        let (wa, wb) = (a.waist(), b.waist());
        if (wa - wb).abs() > 1e-12 * wa.max(wb) {
            return Err(Error::WaistMismatch(wa, wb));
        }
        let half = self.half_width * wa;
        let mut n = self.start_intervals.max(2);
        let mut prev = self.trapezoid(a, b, half, n);
        let mut delta = f64::INFINITY;
        while 2 * n <= self.max_intervals {
            n *= 2;
            let cur = self.trapezoid(a, b, half, n);
            delta = (cur - prev).norm();
            if delta < self.tol {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(Error::QuadratureNotConverged {
            delta,
            points: n + 1,
        })
    }

    fn trapezoid<A, B>(&self, a: &A, b: &B, half: f64, n: usize) -> C64
    where
        A: TransverseField + ?Sized,
        B: TransverseField + ?Sized,
    {
        let h = 2.0 * half / n as f64;
        let weight = |i: usize| if i == 0 || i == n { 0.5 } else { 1.0 };
        // One tile per grid row; rows are reduced pairwise in index order.
        let rows = self.exec.map_range(n + 1, |iy| {
            let y = -half + iy as f64 * h;
            let row: Vec<C64> = (0..=n)
                .map(|ix| {
                    let x = -half + ix as f64 * h;
                    a.amplitude(x, y).conj() * b.amplitude(x, y) * weight(ix)
                })
                .collect();
            pairwise_sum(&row) * weight(iy)
        });
        pairwise_sum(&rows) * (h * h)
    }
}

/// [`Quadrature::overlap`] with default settings.
pub fn overlap<A, B>(a: &A, b: &B) -> Result<C64>
where
    A: TransverseField + ?Sized,
    B: TransverseField + ?Sized,
{
    Quadrature::default().overlap(a, b)
}

/// Analytic coefficients `(c_G, c_V)` of the displaced vortex
/// [`DisplacedVortex`] in the `{G, LGV₀,₊₁}` basis.
///
/// `(x - x₀ + iy)·e^{-r²/ω²}` is `(ω/√2)·LGV₀,₊₁ - x₀·G` up to a common
/// factor, so `|c_G| : |c_V| = x₀ : ω/√2`, and `c_G` carries the sign of
/// `-x₀`.
pub fn displaced_vortex_decomposition(x0: f64, waist: f64) -> Result<(C64, C64)> {
    check_waist(waist)?;
    let v = waist * FRAC_1_SQRT_2;
    let norm = (x0 * x0 + v * v).sqrt();
    Ok((c(-x0 / norm, 0.0), c(v / norm, 0.0)))
}

/// The same coefficients computed by quadrature overlap with `G` and
/// `LGV₀,₊₁`, plus the weight left outside that two-mode space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericDecomposition {
    pub c_g: C64,
    pub c_v: C64,
    pub residue: f64,
}

pub fn displaced_vortex_by_quadrature(
    x0: f64,
    waist: f64,
    quad: &Quadrature,
) -> Result<NumericDecomposition> {
    let field = DisplacedVortex::new(x0, waist)?;
    let g = ModeSpec::gaussian(waist)?;
    let v = ModeSpec::lgv(0, 1, waist)?;
    let c_g = quad.overlap(&g, &field)?;
    let c_v = quad.overlap(&v, &field)?;
    let total = quad.overlap(&field, &field)?.re;
    Ok(NumericDecomposition {
        c_g,
        c_v,
        residue: total - c_g.norm_sqr() - c_v.norm_sqr(),
    })
}

/// Location `(x, y)` of the field zero of `c_G·G + c_V·LGV₀,₊₁` after
/// propagating a distance `z`.
pub fn singularity_position(field: &FieldSuperposition, z: f64, z_r: f64) -> Result<(f64, f64)> {
    let gaussian = field.coefficient(ModeKind::GAUSSIAN);
    let vortex = field.coefficient(ModeKind::Lgv { p: 0, l: 1 });
    let only_two = field.terms().iter().all(|(coef, k)| {
        *k == ModeKind::GAUSSIAN || *k == ModeKind::Lgv { p: 0, l: 1 } || coef.norm() == 0.0
    });
    if !only_two {
        return Err(Error::InvalidParameter(
            "singularity tracking needs a superposition of G and LGV(0,+1) only".into(),
        ));
    }
    if gaussian.norm() < 1e-12 || vortex.norm() < 1e-12 {
        return Err(Error::InvalidParameter(
            "degenerate superposition: both G and LGV(0,+1) must be present".into(),
        ));
    }
    let psi0 = gouy_phase(0, z, z_r)?;
    let psi1 = gouy_phase(1, z, z_r)?;
    let w_z = field.waist() * (1.0 + (z / z_r).powi(2)).sqrt();
    // c_G e^{-iψ₀} + c_V e^{-iψ₁} √2 (x+iy)/w(z) = 0
    let zero = -(gaussian * C64::from_polar(1.0, -psi0)) * w_z
        / (vortex * C64::from_polar(1.0, -psi1) * SQRT_2);
    Ok((zero.re, zero.im))
}

/// Azimuthal rotation of the displaced singularity between `z = 0` and `z`.
pub fn singularity_rotation(field: &FieldSuperposition, z: f64, z_r: f64) -> Result<f64> {
    let (x0, y0) = singularity_position(field, 0.0, z_r)?;
    let (x1, y1) = singularity_position(field, z, z_r)?;
    Ok((c(x1, y1) * c(x0, y0).conj()).arg())
}

/// Samples a field on an `n × n` grid spanning `[-half_width·ω, half_width·ω]²`.
/// Rows run from top (`+y`) to bottom.
pub fn sample_grid<F: TransverseField + ?Sized>(
    field: &F,
    n: usize,
    half_width: f64,
    exec: Exec,
) -> Vec<C64> {
    let half = half_width * field.waist();
    let step = if n > 1 {
        2.0 * half / (n - 1) as f64
    } else {
        0.0
    };
    exec.map_range(n, |row| {
        let y = half - row as f64 * step;
        (0..n)
            .map(|col| field.amplitude(-half + col as f64 * step, y))
            .collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect()
}
