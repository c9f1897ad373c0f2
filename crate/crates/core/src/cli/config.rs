//! JSON run configuration.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "domain": { "half_width": 2.0, "resolution": 256, "margin": 0.5,
//!               "omega": { "disc": { "center": [0, 0], "radius": 1.0 } } },
//!   "solver": { "tol": 1e-10, "max_iter": 200, "method": "spectral" },
//!   "mu": { "kind": "constant", "value": 0.3 },
//!   "u": { "kind": "disc-indicator", "radius": 1.0 },
//!   "family": { "points": 9 },
//!   "exhaust": { "radii": [1.0, 1.5, 2.0], "taylor_degree": 8 },
//!   "oracle": { "fields": [ ... ], "tolerance": 1e-2 }
//! }
//! ```
//!
//! Every section except `schema_version` is optional. Complex numbers are
//! written either as a real number or as `[re, im]`.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{DomainSpec, Omega};
use crate::error::{Error, Result};
use crate::solver::SolverConfig;
use crate::transforms::TransformMethod;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexValue {
    pub fn get(self) -> Complex64 {
        match self {
            ComplexValue::Real(re) => Complex64::new(re, 0.0),
            ComplexValue::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        if z.im == 0.0 {
            ComplexValue::Real(z.re)
        } else {
            ComplexValue::Pair([z.re, z.im])
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OmegaConfig {
    Disc {
        center: ComplexValue,
        radius: f64,
    },
    Rect {
        lower: ComplexValue,
        upper: ComplexValue,
    },
}

impl OmegaConfig {
    pub fn build(&self) -> Omega {
        match *self {
            OmegaConfig::Disc { center, radius } => Omega::Disc {
                center: center.get(),
                radius,
            },
            OmegaConfig::Rect { lower, upper } => Omega::Rect {
                lower: lower.get(),
                upper: upper.get(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainConfig {
    pub half_width: f64,
    pub resolution: usize,
    pub omega: OmegaConfig,
    pub margin: f64,
}

impl Default for DomainConfig {
    fn default() -> Self {
        Self {
            half_width: 2.0,
            resolution: 256,
            omega: OmegaConfig::Disc {
                center: ComplexValue::Real(0.0),
                radius: 1.0,
            },
            margin: 0.5,
        }
    }
}

impl DomainConfig {
    pub fn build(&self) -> Result<DomainSpec> {
        DomainSpec::new(
            self.half_width,
            self.resolution,
            self.omega.build(),
            self.margin,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    pub tol: f64,
    pub max_iter: usize,
    pub contraction_cap: f64,
    pub contraction_iterations: usize,
    pub method: String,
    pub runge_tol: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            tol: d.tol,
            max_iter: d.max_iter,
            contraction_cap: d.contraction_cap,
            contraction_iterations: d.contraction_iterations,
            method: d.method.to_string(),
            runge_tol: d.runge_tol,
        }
    }
}

impl SolverSection {
    pub fn build(&self) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            contraction_cap: self.contraction_cap,
            contraction_iterations: self.contraction_iterations,
            method: self.method.parse()?,
            runge_tol: self.runge_tol,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A named field; see [`super::builtin_field`] for the kinds and parameters.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<ComplexValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl FieldSpec {
    pub fn constant(value: Complex64) -> Self {
        Self {
            kind: "constant".into(),
            value: Some(value.into()),
            ..Default::default()
        }
    }

    pub fn disc_indicator(center: Complex64, radius: f64) -> Self {
        Self {
            kind: "disc-indicator".into(),
            center: Some(center.into()),
            radius: Some(radius),
            ..Default::default()
        }
    }

    pub fn gaussian_bump(center: Complex64, sigma: f64, amplitude: Complex64) -> Self {
        Self {
            kind: "gaussian-bump".into(),
            center: Some(center.into()),
            sigma: Some(sigma),
            amplitude: Some(amplitude.into()),
            ..Default::default()
        }
    }

    pub fn linear_z(coefficient: Complex64) -> Self {
        Self {
            kind: "linear-z".into(),
            coefficient: Some(coefficient.into()),
            ..Default::default()
        }
    }

    pub fn file(path: impl Into<PathBuf>) -> Self {
        Self {
            kind: "file".into(),
            path: Some(path.into()),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FamilyConfig {
    /// Explicit parameter grid in `[0, 1]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<f64>>,
    /// Uniform grid `k / (points - 1)` when no explicit grid is given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// One coefficient per grid point instead of `b·μ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<FieldSpec>>,
}

impl FamilyConfig {
    pub fn parameter_grid(&self) -> Result<Vec<f64>> {
        match (&self.grid, self.points) {
            (Some(g), None) => Ok(g.clone()),
            (None, Some(n)) if n >= 2 => Ok((0..n).map(|k| k as f64 / (n - 1) as f64).collect()),
            (None, Some(1)) => Ok(vec![1.0]),
            (None, None) => Ok((0..9).map(|k| k as f64 / 8.0).collect()),
            (Some(_), Some(_)) => Err(Error::Config("family: give either grid or points".into())),
            (None, Some(_)) => Err(Error::Config("family: points must be at least 1".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExhaustConfig {
    pub radii: Vec<f64>,
    pub taylor_degree: usize,
}

impl Default for ExhaustConfig {
    fn default() -> Self {
        Self {
            radii: vec![1.0, 1.5, 2.0],
            taylor_degree: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    /// Densities to transform; defaults to the built-in corpus.
    pub fields: Vec<FieldSpec>,
    pub tolerance: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            fields: corpus(),
            tolerance: 1e-2,
        }
    }
}

/// Constant `0.3`, `0.3·z` and a `0.3`-high Gaussian bump of width `0.5`.
pub fn corpus() -> Vec<FieldSpec> {
    let c = |re| Complex64::new(re, 0.0);
    vec![
        FieldSpec::constant(c(0.3)),
        FieldSpec::linear_z(c(0.3)),
        FieldSpec::gaussian_bump(c(0.0), 0.5, c(0.3)),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub domain: DomainConfig,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<FieldSpec>,
    #[serde(default)]
    pub family: FamilyConfig,
    #[serde(default)]
    pub exhaust: ExhaustConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
}

impl Config {
    pub fn new(domain: DomainConfig) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            domain,
            solver: SolverSection::default(),
            mu: None,
            u: None,
            family: FamilyConfig::default(),
            exhaust: ExhaustConfig::default(),
            oracle: OracleConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "schema_version {} not supported (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    /// Reads a config; relative field-file paths are resolved against the
    /// config's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_json(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let base = std::path::absolute(&base).unwrap_or(base);
        cfg.resolve_paths(&base);
        Ok(cfg)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |s: &mut FieldSpec| {
            if let Some(p) = &s.path {
                if p.is_relative() {
                    s.path = Some(base.join(p));
                }
            }
        };
        self.mu.iter_mut().chain(self.u.iter_mut()).for_each(fix);
        self.oracle.fields.iter_mut().for_each(fix);
        if let Some(t) = &mut self.family.table {
            t.iter_mut().for_each(fix);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn method(&self) -> Result<TransformMethod> {
        self.solver.method.parse()
    }
}
