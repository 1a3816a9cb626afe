//! JSON file formats.
//!
//! Every artifact carries `"schema": "<name>/1"`. Readers report the JSON path
//! of the first offending value and re-validate density matrices with the
//! looser [`Tolerance::FILE`] bounds.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::bitcommit::{BcReport, RESIDUAL_MODEL};
use crate::entanglement::EntanglementReport;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::qudit::{DensityMatrix, FidelityConvention, Tolerance};
use crate::tomography::{CountRecord, MeasurementSetting, MleFit, Objective, SetFlavor};
use crate::SCHEMA_VERSION;

pub const DENSITY_MATRIX: &str = "density-matrix";
pub const COUNTS: &str = "counts";
pub const RECONSTRUCTION: &str = "reconstruction";
pub const ENTANGLEMENT: &str = "entanglement-report";
pub const BITCOMMIT: &str = "bc-report";
pub const DECOMPOSITION: &str = "mode-decomposition";
pub const GOUY: &str = "gouy-phase";
pub const RASTER: &str = "mode-raster";

/// `"<name>/<SCHEMA_VERSION>"`.
pub fn schema_tag(name: &str) -> String {
    format!("{name}/{SCHEMA_VERSION}")
}

fn check_tag(found: Option<&str>, name: &str) -> Result<()> {
    match found {
        Some(tag) if tag != schema_tag(name) => Err(Error::Schema {
            path: "schema".into(),
            message: format!("expected {:?}, found {tag:?}", schema_tag(name)),
        }),
        _ => Ok(()),
    }
}

/// Serde adapter writing a complex number as `[re, im]`.
pub mod complex {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg::C64;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

/// Parses JSON, reporting the path of the first type error.
pub fn from_json_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json_str(&fs::read_to_string(path)?)
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Numerical(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

/// `{"schema", "dims", "matrix": [[[re, im], …], …]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl DensityMatrixJson {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        Self {
            schema: Some(schema_tag(DENSITY_MATRIX)),
            dims: rho.dims().to_vec(),
            matrix: (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| [m[(i, j)].re, m[(i, j)].im])
                        .collect()
                })
                .collect(),
        }
    }

    /// Shape and invariant checks; errors name the offending path.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        check_tag(self.schema.as_deref(), DENSITY_MATRIX)?;
        let dim: usize = self.dims.iter().product();
        let schema_err = |path: String, message: String| Error::Schema { path, message };
        if self.dims.is_empty() || dim == 0 {
            return Err(schema_err(
                "dims".into(),
                format!("invalid dims {:?}", self.dims),
            ));
        }
        if self.matrix.len() != dim {
            return Err(schema_err(
                "matrix".into(),
                format!(
                    "{} rows, dims {:?} need {dim}",
                    self.matrix.len(),
                    self.dims
                ),
            ));
        }
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(schema_err(
                format!("matrix[{i}]"),
                format!("{} columns, need {dim}", row.len()),
            ));
        }
        let m = CMatrix::from_fn(dim, dim, |i, j| {
            C64::new(self.matrix[i][j][0], self.matrix[i][j][1])
        });
        DensityMatrix::with_tolerance(m, self.dims.clone(), Tolerance::FILE)
            .map_err(|e| schema_err("matrix".into(), e.to_string()))
    }
}

pub fn read_density(path: &Path) -> Result<DensityMatrix> {
    read_json::<DensityMatrixJson>(path)?.to_density()
}

pub fn parse_density(text: &str) -> Result<DensityMatrix> {
    from_json_str::<DensityMatrixJson>(text)?.to_density()
}

pub fn write_density(path: &Path, rho: &DensityMatrix) -> Result<()> {
    write_json(path, &DensityMatrixJson::from_density(rho))
}

/// One record of a counts file: per-arm analyzer labels and the count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountsEntry {
    pub setting: Vec<String>,
    pub count: u64,
    /// Overrides the file-level `shots` for this record.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
}

/// `{"schema", "dims", "shots", "set", "records": [{"setting": [labels], "count"}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub dims: Vec<usize>,
    pub shots: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<SetFlavor>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub records: Vec<CountsEntry>,
}

impl CountsFile {
    /// Pairs `records[i]` with the setting whose id is `records[i].setting`.
    pub fn new(
        dims: Vec<usize>,
        shots: u64,
        set: Option<SetFlavor>,
        seed: Option<u64>,
        settings: &[MeasurementSetting],
        records: &[CountRecord],
    ) -> Result<Self> {
        let entries = records
            .iter()
            .map(|r| {
                let s = settings.iter().find(|s| s.id == r.setting).ok_or_else(|| {
                    Error::InvalidParameter(format!("no setting with id {}", r.setting))
                })?;
                Ok(CountsEntry {
                    setting: s.labels(),
                    count: r.count,
                    shots: (r.shots != shots).then_some(r.shots),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            schema: Some(schema_tag(COUNTS)),
            dims,
            shots,
            set,
            seed,
            records: entries,
        })
    }

    /// Settings and records, with record `i` measured in setting `i`.
    pub fn resolve(&self) -> Result<(Vec<MeasurementSetting>, Vec<CountRecord>)> {
        check_tag(self.schema.as_deref(), COUNTS)?;
        if self.shots == 0 {
            return Err(Error::Schema {
                path: "shots".into(),
                message: "must be positive".into(),
            });
        }
        let mut settings = Vec::with_capacity(self.records.len());
        let mut records = Vec::with_capacity(self.records.len());
        for (i, entry) in self.records.iter().enumerate() {
            let setting =
                MeasurementSetting::from_labels(i, &entry.setting, &self.dims).map_err(|e| {
                    Error::Schema {
                        path: format!("records[{i}].setting"),
                        message: e.to_string(),
                    }
                })?;
            let shots = entry.shots.unwrap_or(self.shots);
            if shots == 0 {
                return Err(Error::Schema {
                    path: format!("records[{i}].shots"),
                    message: "must be positive".into(),
                });
            }
            settings.push(setting);
            records.push(CountRecord {
                setting: i,
                count: entry.count,
                shots,
            });
        }
        Ok((settings, records))
    }
}

/// How the reconstruction data were taken.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetDescriptor {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<SetFlavor>,
    pub settings: usize,
    pub shots: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub schema: String,
    pub density: DensityMatrixJson,
    pub objective: Objective,
    /// Poisson negative log-likelihood without the `ln cᵢ!` constant.
    pub neg_log_likelihood: f64,
    pub initial_neg_log_likelihood: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub runs: usize,
    pub converged: bool,
    pub set: SetDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity_to_truth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fidelity_convention: Option<FidelityConvention>,
    /// Reserved for bootstrap error bars; always null.
    pub error_bars: Option<serde_json::Value>,
}

impl ReconstructionReport {
    pub fn new(
        fit: &MleFit,
        objective: Objective,
        set: SetDescriptor,
        fidelity_to_truth: Option<f64>,
    ) -> Self {
        Self {
            schema: schema_tag(RECONSTRUCTION),
            density: DensityMatrixJson::from_density(&fit.rho),
            objective,
            neg_log_likelihood: fit.objective_value,
            initial_neg_log_likelihood: fit.initial_value,
            iterations: fit.iterations,
            evaluations: fit.evaluations,
            runs: fit.runs,
            converged: fit.converged,
            set,
            fidelity_to_truth,
            fidelity_convention: fidelity_to_truth.map(|_| FidelityConvention::Squared),
            error_bars: None,
        }
    }
}

/// Any report body with a leading `schema` tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tagged<T> {
    pub schema: String,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Tagged<T> {
    pub fn new(name: &str, body: T) -> Self {
        Self {
            schema: schema_tag(name),
            body,
        }
    }
}

pub fn entanglement_json(report: EntanglementReport) -> Tagged<EntanglementReport> {
    Tagged::new(ENTANGLEMENT, report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcReportJson {
    pub schema: String,
    pub tokens: [DensityMatrixJson; 2],
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub k2_plus_c2: f64,
    /// `K² + C²` within tolerance of 1/4: a point the qubit-token family
    /// reaches.
    pub inside_qubit_region: bool,
    /// `K² + C² < 1/4`: strictly inside the arc.
    pub beats_qubit_boundary: bool,
    pub fitted_lambda: f64,
    pub token_fidelities: [f64; 2],
    pub fidelity_convention: FidelityConvention,
    /// Token 0 in mode 0, token 1 in mode 2.
    pub residual_populations: [f64; 2],
    pub residual_model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_threshold: Option<f64>,
}

impl BcReportJson {
    pub fn new(report: &BcReport) -> Self {
        Self {
            schema: schema_tag(BITCOMMIT),
            tokens: [
                DensityMatrixJson::from_density(&report.tokens.0),
                DensityMatrixJson::from_density(&report.tokens.1),
            ],
            k: report.point.k,
            c: report.point.c,
            k2_plus_c2: report.point.radius_squared(),
            inside_qubit_region: report.point.inside_qubit_region(),
            beats_qubit_boundary: report.point.beats_qubit_boundary(),
            fitted_lambda: report.fitted_lambda,
            token_fidelities: [report.token_fidelities.0, report.token_fidelities.1],
            fidelity_convention: FidelityConvention::Squared,
            residual_populations: [report.residual_populations.0, report.residual_populations.1],
            residual_model: RESIDUAL_MODEL.into(),
            residual_threshold: report.residual_threshold,
        }
    }
}

/// `{c_G: [re, im], c_V: [re, im]}` plus the inputs and magnitudes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub schema: String,
    /// `x₀/ω`.
    pub displacement: f64,
    pub waist: f64,
    #[serde(rename = "c_G", with = "complex")]
    pub c_g: C64,
    #[serde(rename = "c_V", with = "complex")]
    pub c_v: C64,
    #[serde(rename = "abs_c_G")]
    pub abs_c_g: f64,
    #[serde(rename = "abs_c_V")]
    pub abs_c_v: f64,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<f64>,
}
