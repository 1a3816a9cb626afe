//! Grayscale intensity and phase images of a transverse field.

use std::f64::consts::PI;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{ensure, Context, Result};
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder};
use quditlab::io::{schema_tag, RASTER};
use quditlab::modes::{sample_grid, DisplacedVortex, ModeKind, ModeSpec, TransverseField};
use quditlab::Exec;
use serde::Serialize;

/// Field named on the command line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldArg {
    Mode(ModeKind),
    /// Displacement in waists.
    Displaced(f64),
}

impl FieldArg {
    pub fn parse(text: &str) -> Result<Self, String> {
        let (name, rest) = text.split_once(':').unwrap_or((text, ""));
        let ints = |n: usize| -> Result<Vec<i64>, String> {
            let parts: Vec<i64> = rest
                .split(',')
                .map(|p| p.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| format!("bad index in {text:?}: {e}"))?;
            if parts.len() != n {
                return Err(format!("{text:?}: expected {n} indices"));
            }
            Ok(parts)
        };
        let unsigned = |v: i64| {
            u32::try_from(v).map_err(|_| format!("{text:?}: index {v} must be non-negative"))
        };
        match name.to_ascii_lowercase().as_str() {
            "g" if rest.is_empty() => Ok(FieldArg::Mode(ModeKind::GAUSSIAN)),
            "hg" => {
                let v = ints(2)?;
                Ok(FieldArg::Mode(ModeKind::Hg {
                    r: unsigned(v[0])?,
                    s: unsigned(v[1])?,
                }))
            }
            "lgv" => {
                let v = ints(2)?;
                let l =
                    i32::try_from(v[1]).map_err(|_| format!("{text:?}: charge out of range"))?;
                Ok(FieldArg::Mode(ModeKind::Lgv {
                    p: unsigned(v[0])?,
                    l,
                }))
            }
            "displaced" => rest
                .trim()
                .parse::<f64>()
                .map(FieldArg::Displaced)
                .map_err(|e| format!("bad displacement in {text:?}: {e}")),
            _ => Err(format!(
                "unknown field {text:?} (expected g, hg:R,S, lgv:P,L or displaced:X0)"
            )),
        }
    }

    fn build(self, waist: f64) -> quditlab::Result<Box<dyn TransverseField>> {
        Ok(match self {
            FieldArg::Mode(kind) => Box::new(ModeSpec::new(kind, waist)?),
            FieldArg::Displaced(x0) => Box::new(DisplacedVortex::new(x0 * waist, waist)?),
        })
    }

    fn describe(self) -> String {
        match self {
            FieldArg::Mode(kind) if kind.is_gaussian() => "G".into(),
            FieldArg::Mode(ModeKind::Hg { r, s }) => format!("HG{r}{s}"),
            FieldArg::Mode(ModeKind::Lgv { p, l }) => format!("LGV{p},{l:+}"),
            FieldArg::Displaced(x0) => format!("displaced vortex x0={x0}w"),
        }
    }
}

/// Grid metadata written next to the images.
#[derive(Debug, Serialize)]
pub struct RasterSidecar {
    pub schema: String,
    pub field: String,
    pub waist: f64,
    pub size: usize,
    /// Pixel centres span `[-extent, extent]` on both axes; row 0 is `+y`.
    pub extent: f64,
    pub pixel_pitch: f64,
    pub intensity_image: String,
    /// Gray level 255 corresponds to this `|u|²`; the scale is linear.
    pub intensity_max: f64,
    pub phase_image: String,
    /// Gray level `g` is the phase `-π + 2π g / 255`.
    pub phase_encoding: String,
}

fn sibling(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(suffix);
    prefix.with_file_name(name)
}

fn write_pgm(path: &Path, pixels: &[u8], size: usize) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let side = u32::try_from(size).context("raster too large")?;
    PnmEncoder::new(BufWriter::new(file))
        .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
        .write_image(pixels, side, side, ExtendedColorType::L8)
        .with_context(|| format!("writing {}", path.display()))
}

pub fn write(
    field: FieldArg,
    waist: f64,
    size: usize,
    half_width: f64,
    prefix: &Path,
) -> Result<RasterSidecar> {
    ensure!(size >= 2, "raster needs at least 2 pixels per side");
    ensure!(half_width > 0.0, "half-width must be positive");
    let amplitudes = sample_grid(
        field.build(waist)?.as_ref(),
        size,
        half_width,
        Exec::default(),
    );
    let intensity: Vec<f64> = amplitudes.iter().map(|u| u.norm_sqr()).collect();
    let peak = intensity.iter().copied().fold(0.0, f64::max);
    let gray = |v: f64| (v * 255.0).round().clamp(0.0, 255.0) as u8;
    let intensity_px: Vec<u8> = intensity
        .iter()
        .map(|&v| if peak > 0.0 { gray(v / peak) } else { 0 })
        .collect();
    let phase_px: Vec<u8> = amplitudes
        .iter()
        .map(|u| gray((u.arg() + PI) / (2.0 * PI)))
        .collect();

    let intensity_path = sibling(prefix, ".intensity.pgm");
    let phase_path = sibling(prefix, ".phase.pgm");
    write_pgm(&intensity_path, &intensity_px, size)?;
    write_pgm(&phase_path, &phase_px, size)?;
    let file_name = |p: &Path| {
        p.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default()
    };
    let extent = half_width * waist;
    Ok(RasterSidecar {
        schema: schema_tag(RASTER),
        field: field.describe(),
        waist,
        size,
        extent,
        pixel_pitch: 2.0 * extent / (size - 1) as f64,
        intensity_image: file_name(&intensity_path),
        intensity_max: peak,
        phase_image: file_name(&phase_path),
        phase_encoding: "linear: 0 -> -pi, 255 -> pi".into(),
    })
}

pub fn sidecar_path(prefix: &Path) -> PathBuf {
    sibling(prefix, ".json")
}
