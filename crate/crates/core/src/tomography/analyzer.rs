use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector};
use crate::qudit::StateVector;

/// Which kets appear per pair `{j < k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetFlavor {
    /// `p+`, `q+`
    Minimal,
    /// `p+`, `q+`, `p-`, `q-`
    Overcomplete,
}

impl SetFlavor {
    pub fn as_str(self) -> &'static str {
        match self {
            SetFlavor::Minimal => "minimal",
            SetFlavor::Overcomplete => "overcomplete",
        }
    }
}

impl std::str::FromStr for SetFlavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" => Ok(SetFlavor::Minimal),
            "overcomplete" => Ok(SetFlavor::Overcomplete),
            other => Err(Error::InvalidParameter(format!(
                "unknown set flavor {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AnalyzerKind {
    /// `|j⟩`
    Basis(usize),
    /// `(|j⟩ ± |k⟩)/√2`
    P { plus: bool, j: usize, k: usize },
    /// `(|j⟩ ± i|k⟩)/√2`
    Q { plus: bool, j: usize, k: usize },
}

impl fmt::Display for AnalyzerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |plus: bool| if plus { '+' } else { '-' };
        match *self {
            AnalyzerKind::Basis(j) => write!(f, "b{j}"),
            AnalyzerKind::P { plus, j, k } => write!(f, "p{}{j}{k}", sign(plus)),
            AnalyzerKind::Q { plus, j, k } => write!(f, "q{}{j}{k}", sign(plus)),
        }
    }
}

/// A single-qudit analyzer state identified by its label (`b0`, `p+01`, `q-12`).
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzerKet {
    kind: AnalyzerKind,
    ket: StateVector,
}

impl AnalyzerKet {
    pub fn new(kind: AnalyzerKind, d: usize) -> Result<Self> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = CVector::zeros(d);
        match kind {
            AnalyzerKind::Basis(j) if j < d => v[j] = c(1.0, 0.0),
            AnalyzerKind::P { plus, j, k } if j < k && k < d => {
                v[j] = c(s, 0.0);
                v[k] = c(if plus { s } else { -s }, 0.0);
            }
            AnalyzerKind::Q { plus, j, k } if j < k && k < d => {
                v[j] = c(s, 0.0);
                v[k] = c(0.0, if plus { s } else { -s });
            }
            _ => return Err(Error::UnknownLabel(kind.to_string())),
        }
        Ok(Self {
            kind,
            ket: StateVector::normalized(v, vec![d])?,
        })
    }

    /// Parses `b<j>`, `p±<j><k>` or `q±<j><k>` for a qudit of dimension `d`.
    pub fn parse(label: &str, d: usize) -> Result<Self> {
        let bad = || Error::UnknownLabel(label.to_string());
        let chars: Vec<char> = label.chars().collect();
        let digit = |ch: char| ch.to_digit(10).map(|v| v as usize).ok_or_else(bad);
        let kind = match chars.as_slice() {
            ['b', j] => AnalyzerKind::Basis(digit(*j)?),
            [fam @ ('p' | 'q'), sign @ ('+' | '-'), j, k] => {
                let (plus, j, k) = (*sign == '+', digit(*j)?, digit(*k)?);
                if *fam == 'p' {
                    AnalyzerKind::P { plus, j, k }
                } else {
                    AnalyzerKind::Q { plus, j, k }
                }
            }
            _ => return Err(bad()),
        };
        Self::new(kind, d).map_err(|_| bad())
    }

    pub fn kind(&self) -> AnalyzerKind {
        self.kind
    }

    pub fn label(&self) -> String {
        self.kind.to_string()
    }

    pub fn ket(&self) -> &StateVector {
        &self.ket
    }

    pub fn dim(&self) -> usize {
        self.ket.dim()
    }
}

/// Per-arm kets for one qudit, in set order.
fn arm_kets(d: usize, flavor: SetFlavor) -> Result<Vec<AnalyzerKet>> {
    let mut kinds: Vec<AnalyzerKind> = (0..d).map(AnalyzerKind::Basis).collect();
    for j in 0..d {
        for k in j + 1..d {
            kinds.push(AnalyzerKind::P { plus: true, j, k });
            kinds.push(AnalyzerKind::Q { plus: true, j, k });
            if flavor == SetFlavor::Overcomplete {
                kinds.push(AnalyzerKind::P { plus: false, j, k });
                kinds.push(AnalyzerKind::Q { plus: false, j, k });
            }
        }
    }
    kinds.into_iter().map(|k| AnalyzerKet::new(k, d)).collect()
}

/// A product analyzer `|a₁⟩ ⊗ |a₂⟩ ⊗ …` with an identifier.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSetting {
    pub id: usize,
    arms: Vec<AnalyzerKet>,
    ket: CVector,
}

impl MeasurementSetting {
    pub fn new(id: usize, arms: Vec<AnalyzerKet>) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::InvalidParameter("setting with no arms".into()));
        }
        let ket = arms
            .iter()
            .skip(1)
            .fold(arms[0].ket().amplitudes().clone(), |acc, a| {
                linalg::kron_vec(&acc, a.ket().amplitudes())
            });
        Ok(Self { id, arms, ket })
    }

    /// Builds a setting from per-arm labels.
    pub fn from_labels<S: AsRef<str>>(id: usize, labels: &[S], dims: &[usize]) -> Result<Self> {
        if labels.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} arms",
                labels.len(),
                dims.len()
            )));
        }
        let arms = labels
            .iter()
            .zip(dims)
            .map(|(l, &d)| AnalyzerKet::parse(l.as_ref(), d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(id, arms)
    }

    pub fn arms(&self) -> &[AnalyzerKet] {
        &self.arms
    }

    pub fn labels(&self) -> Vec<String> {
        self.arms.iter().map(AnalyzerKet::label).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.arms.iter().map(AnalyzerKet::dim).collect()
    }

    /// The product ket.
    pub fn ket(&self) -> &CVector {
        &self.ket
    }

    /// Rank-1 projector `|a⟩⟨a|`.
    pub fn projector(&self) -> CMatrix {
        linalg::outer(&self.ket)
    }
}

/// All settings for `arms` qudits of dimension `d`.
pub fn measurement_set(
    d: usize,
    arms: usize,
    flavor: SetFlavor,
) -> Result<Vec<MeasurementSetting>> {
    if !(2..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    if !(1..=2).contains(&arms) {
        return Err(Error::InvalidParameter(format!(
            "{arms} arms (supported: 1, 2)"
        )));
    }
    let per_arm = arm_kets(d, flavor)?;
    let mut combos: Vec<Vec<AnalyzerKet>> = vec![Vec::new()];
    for _ in 0..arms {
        combos = combos
            .into_iter()
            .flat_map(|prefix| {
                per_arm.iter().map(move |k| {
                    let mut next = prefix.clone();
                    next.push(k.clone());
                    next
                })
            })
            .collect();
    }
    combos
        .into_iter()
        .enumerate()
        .map(|(id, arms)| MeasurementSetting::new(id, arms))
        .collect()
}
