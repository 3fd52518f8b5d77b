//! Run configuration: a single JSON document, with flags overriding top-level scalars.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use polyharmonic::{ComplexVector, RotatedVector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Quadrature resolution: a node count or `"auto"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Resolution {
    Nodes(usize),
    Named(String),
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution::Named("auto".into())
    }
}

impl Resolution {
    /// `None` for `"auto"`.
    pub fn nodes(&self) -> Option<usize> {
        match self {
            Resolution::Nodes(k) => Some(*k),
            Resolution::Named(_) => None,
        }
    }
}

/// A point in `C^n`.
///
/// A bare array is a real point; `{"angle", "coords"}` is `e^{i angle} coords`;
/// `{"sector", "coords"}` puts `coords` on sector `j` of the current `p`;
/// `{"re", "im"}` is a general complex vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Real(Vec<f64>),
    Rotated {
        angle: f64,
        coords: Vec<f64>,
    },
    Sector {
        sector: usize,
        coords: Vec<f64>,
    },
    Complex {
        re: Vec<f64>,
        im: Vec<f64>,
    },
}

impl PointSpec {
    pub fn rotated(&self, p: usize) -> Result<RotatedVector, CliError> {
        let v = match self {
            PointSpec::Real(c) => RotatedVector::real(c.clone())?,
            PointSpec::Rotated { angle, coords } => RotatedVector::new(*angle, coords.clone())?,
            PointSpec::Sector { sector, coords } => {
                if *sector >= p {
                    return Err(CliError::Config(format!("sector {sector} out of range for p = {p}")));
                }
                RotatedVector::new(*sector as f64 * PI / p as f64, coords.clone())?
            }
            PointSpec::Complex { .. } => {
                return Err(CliError::Config("a rotated point (real, angle or sector form) is required here".into()))
            }
        };
        Ok(v)
    }

    pub fn complex(&self, p: usize) -> Result<ComplexVector, CliError> {
        match self {
            PointSpec::Complex { re, im } => {
                if re.len() != im.len() {
                    return Err(CliError::Config("re and im must have equal length".into()));
                }
                Ok(ComplexVector::new(re.iter().zip(im).map(|(a, b)| Complex64::new(*a, *b)).collect())?)
            }
            other => Ok(other.rotated(p)?.to_complex()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PointSpec::Real(c) | PointSpec::Rotated { coords: c, .. } | PointSpec::Sector { coords: c, .. } => c.len(),
            PointSpec::Complex { re, .. } => re.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSpec {
    pub x: PointSpec,
    pub zeta: PointSpec,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelBlock {
    #[serde(default)]
    pub pairs: Vec<PairSpec>,
    /// Truncation tolerance for the series column.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series_tolerance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DirichletBlock {
    pub boundary: String,
    pub points: Vec<PointSpec>,
    /// Monte Carlo sample count for `"auto"` resolution in dimension 4 and up.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monte_carlo_samples: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    #[serde(default)]
    pub suites: Vec<String>,
    /// Random samples per combination.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HuaLimitBlock {
    pub u: String,
    pub z: PointSpec,
    pub p_list: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie_angular_nodes: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlmansiBlock {
    pub polynomial: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimsBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    #[serde(default = "default_p")]
    pub p: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<usize>>,
    #[serde(default)]
    pub resolution: Resolution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Overrides every default tolerance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Per-check overrides keyed by row kind or suite name.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<PointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<PointSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dirichlet: Option<DirichletBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hua_limit: Option<HuaLimitBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub almansi: Option<AlmansiBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<DimsBlock>,
}

fn default_p() -> usize {
    1
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_str(r#"{"n": 2}"#).expect("default config")
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n < 2 {
            return Err(CliError::Config(format!("n must be at least 2, got {}", self.n)));
        }
        if self.p < 1 {
            return Err(CliError::Config("p must be at least 1".into()));
        }
        match &self.resolution {
            Resolution::Nodes(k) if *k < 4 => {
                return Err(CliError::Config(format!("resolution must be at least 4, got {k}")))
            }
            Resolution::Named(s) if s != "auto" => {
                return Err(CliError::Config(format!("resolution must be a node count or \"auto\", got {s:?}")))
            }
            _ => {}
        }
        for (name, t) in self.tolerance.iter().map(|t| ("tolerance", t)).chain(self.tolerances.iter().map(|(k, v)| (k.as_str(), v))) {
            if !(*t >= 0.0) || !t.is_finite() {
                return Err(CliError::Config(format!("{name} must be a finite non-negative number")));
            }
        }
        Ok(())
    }

    /// Tolerance for a check: per-key override, then the global override, then the default.
    pub fn tol(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().or(self.tolerance).unwrap_or(default)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(polyharmonic::quadrature::DEFAULT_SEED)
    }

    /// Canonical JSON of the effective configuration.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        format!("{:x}", Sha256::digest(self.canonical_json().as_bytes()))
    }
}
