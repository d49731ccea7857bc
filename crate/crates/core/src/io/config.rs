//! Job configuration files (TOML).
//!
//! A document declares `units = "SI"` once, a `mode`, and exactly one of the
//! `geometry` or `mechanics` blocks. Parsing validates the document for its
//! mode and fills every default, so serializing a parsed config and parsing
//! it again gives the same config.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::export::Format;
use crate::elasticity::SurfaceStressSpec;
use crate::geometry::{PrincipalCurvatureState, DEFAULT_CLASSIFY_TOL};
use crate::pipeline::{MechanicalSetup, Ply, Prestretch, SectionSpec};
use crate::surface::RibbonExtent;
use crate::sweep::{BoundaryKind, SweepAxis, SweepBase, SweepSpec};

pub const DEFAULT_SAMPLES: (usize, usize) = (200, 20);
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
/// Default width as a fraction of the length.
pub const DEFAULT_ASPECT: f64 = 1.0 / 40.0;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Syntax(String),
    #[error("units must be \"SI\", got {0:?}")]
    Units(String),
    #[error("missing `{field}`, required in {mode} mode")]
    Missing { field: String, mode: Mode },
    #[error("`{field}` is not allowed in {mode} mode")]
    NotAllowed { field: String, mode: Mode },
    #[error("conflicting blocks: {0}")]
    Conflict(String),
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Geometric,
    SingleSurface,
    TwoSurface,
    Laminate,
    Sweep,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Geometric => "geometric",
            Mode::SingleSurface => "single_surface",
            Mode::TwoSurface => "two_surface",
            Mode::Laminate => "laminate",
            Mode::Sweep => "sweep",
        }
    }

    pub fn is_mechanical(self) -> bool {
        matches!(self, Mode::SingleSurface | Mode::TwoSurface | Mode::Laminate)
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryBlock {
    pub kappa1: f64,
    pub kappa2: f64,
    pub phi: f64,
}

/// Principal face stresses (N/m) and the angle of the first axis in the sheet frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StressBlock {
    pub f1: f64,
    pub f2: f64,
    #[serde(default)]
    pub orientation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrestretchBlock {
    pub first: f64,
    pub second: f64,
    #[serde(default)]
    pub orientation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerBlock {
    pub thickness: f64,
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prestretch: Option<PrestretchBlock>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MechanicsBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thickness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub youngs_modulus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson_ratio: Option<f64>,
    /// Angle of the ribbon length axis in the sheet frame.
    #[serde(default)]
    pub cut_angle: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_minus: Option<StressBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_plus: Option<StressBlock>,
    /// Bottom face first.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub layers: Vec<LayerBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub axes: Vec<SweepAxis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clearance: Option<f64>,
}

/// Ribbon length and width (m) and mesh resolution. Length and width stay
/// unset for mechanical jobs until the equilibrium is known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtentBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default = "default_samples_s")]
    pub samples_s: usize,
    #[serde(default = "default_samples_t")]
    pub samples_t: usize,
}

impl Default for ExtentBlock {
    fn default() -> Self {
        Self {
            length: None,
            width: None,
            samples_s: DEFAULT_SAMPLES.0,
            samples_t: DEFAULT_SAMPLES.1,
        }
    }
}

impl ExtentBlock {
    /// Fills length and width from the shape: two turns of the helix, or two
    /// bending wavelengths when the centerline is straight; width is 1/40 of
    /// the length.
    pub fn resolved(&self, state: &PrincipalCurvatureState<f64>) -> RibbonExtent<f64> {
        let length = self.length.unwrap_or_else(|| default_length(state));
        let width = self.width.unwrap_or(length * DEFAULT_ASPECT);
        RibbonExtent::new(length, width, self.samples_s, self.samples_t)
    }
}

pub fn default_length(state: &PrincipalCurvatureState<f64>) -> f64 {
    let alpha = state.invariants().alpha;
    let kmax = state.kappa1.abs().max(state.kappa2.abs());
    if alpha > 0.0 {
        2.0 * std::f64::consts::TAU / alpha
    } else if kmax > 0.0 {
        2.0 * std::f64::consts::TAU / kmax
    } else {
        1.0
    }
}

fn default_samples_s() -> usize {
    DEFAULT_SAMPLES.0
}

fn default_samples_t() -> usize {
    DEFAULT_SAMPLES.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default)]
    pub formats: Vec<Format>,
    #[serde(default = "default_directory")]
    pub directory: PathBuf,
    #[serde(default = "default_residual_tol")]
    pub residual_tolerance: f64,
    #[serde(default = "default_classify_tol")]
    pub classify_tolerance: f64,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self {
            formats: Vec::new(),
            directory: default_directory(),
            residual_tolerance: DEFAULT_RESIDUAL_TOL,
            classify_tolerance: DEFAULT_CLASSIFY_TOL,
        }
    }
}

fn default_directory() -> PathBuf {
    PathBuf::from(".")
}

fn default_residual_tol() -> f64 {
    DEFAULT_RESIDUAL_TOL
}

fn default_classify_tol() -> f64 {
    DEFAULT_CLASSIFY_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub units: String,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometryBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mechanics: Option<MechanicsBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepBlock>,
    #[serde(default)]
    pub extent: ExtentBlock,
    #[serde(default)]
    pub output: OutputBlock,
}

pub fn parse_config(document: &str) -> Result<JobConfig, ConfigError> {
    let mut cfg: JobConfig = toml::from_str(document).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    cfg.resolve()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<JobConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

impl JobConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn resolve(&mut self) -> Result<(), ConfigError> {
        if self.units != "SI" {
            return Err(ConfigError::Units(self.units.clone()));
        }
        if self.geometry.is_some() && self.mechanics.is_some() {
            return Err(ConfigError::Conflict(
                "`geometry` and `mechanics` cannot both be present; a job is either geometric or mechanical".into(),
            ));
        }
        let mode = self.mode;
        let missing = |field: &str| ConfigError::Missing {
            field: field.into(),
            mode,
        };
        let not_allowed = |field: &str| ConfigError::NotAllowed {
            field: field.into(),
            mode,
        };
        if mode != Mode::Sweep && self.sweep.is_some() {
            return Err(not_allowed("sweep"));
        }
        match mode {
            Mode::Geometric => {
                if self.mechanics.is_some() {
                    return Err(not_allowed("mechanics"));
                }
                self.geometry.ok_or_else(|| missing("geometry"))?;
            }
            Mode::SingleSurface | Mode::TwoSurface | Mode::Laminate => {
                if self.geometry.is_some() {
                    return Err(not_allowed("geometry"));
                }
                let m = self.mechanics.as_ref().ok_or_else(|| missing("mechanics"))?;
                check_mechanics(m, mode)?;
            }
            Mode::Sweep => {
                let sweep = self.sweep.as_ref().ok_or_else(|| missing("sweep"))?;
                if sweep.axes.is_empty() {
                    return Err(missing("sweep.axes"));
                }
                match (&self.geometry, &self.mechanics) {
                    (None, None) => {
                        return Err(ConfigError::Conflict(
                            "sweep mode needs a `geometry` or a `mechanics` block for the fixed parameters".into(),
                        ))
                    }
                    (None, Some(m)) => check_mechanics(m, infer_mechanical_mode(m))?,
                    _ => {}
                }
                self.sweep_spec()
                    .and_then(|s| s.validate().map_err(|e| e.to_string()))
                    .map_err(|reason| ConfigError::Invalid {
                        field: "sweep".into(),
                        reason,
                    })?;
            }
        }
        self.check_extent()?;
        self.check_output()?;
        if let Some(g) = self.geometry {
            if !(g.kappa1.is_finite() && g.kappa2.is_finite() && g.phi.is_finite()) {
                return Err(invalid("geometry", "curvatures and phi must be finite"));
            }
            // a geometric job knows its shape, so its extent resolves now
            if mode == Mode::Geometric {
                let e = self.extent.resolved(&self.geometry_state().expect("geometry block"));
                self.extent.length = Some(e.length);
                self.extent.width = Some(e.width);
            }
        }
        Ok(())
    }

    fn check_extent(&self) -> Result<(), ConfigError> {
        let e = &self.extent;
        for (name, v) in [("extent.length", e.length), ("extent.width", e.width)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(invalid(name, "must be positive and finite"));
                }
            }
        }
        if e.samples_s < 2 || e.samples_t < 2 {
            return Err(invalid("extent", "samples_s and samples_t must be at least 2"));
        }
        Ok(())
    }

    fn check_output(&self) -> Result<(), ConfigError> {
        let o = &self.output;
        if !(o.residual_tolerance.is_finite() && o.residual_tolerance > 0.0) {
            return Err(invalid("output.residual_tolerance", "must be positive"));
        }
        if !(o.classify_tolerance.is_finite() && o.classify_tolerance > 0.0) {
            return Err(invalid("output.classify_tolerance", "must be positive"));
        }
        Ok(())
    }

    pub fn geometry_state(&self) -> Option<PrincipalCurvatureState<f64>> {
        self.geometry.map(|g| PrincipalCurvatureState::new(g.kappa1, g.kappa2, g.phi))
    }

    pub fn mechanical_setup(&self) -> Option<MechanicalSetup> {
        self.mechanics.as_ref().map(to_setup)
    }

    /// Sweep over the base block. Length and width come from the extent
    /// block, else from the base shape (the base state or the equilibrium of
    /// the base setup).
    pub fn sweep_spec(&self) -> Result<SweepSpec, String> {
        let sweep = self.sweep.as_ref().ok_or("not a sweep job")?;
        let (base, shape) = match (self.geometry_state(), self.mechanical_setup()) {
            (Some(s), None) => (SweepBase::Geometric(s), s),
            (None, Some(m)) => {
                let shape = if self.extent.length.is_some() && self.extent.width.is_some() {
                    PrincipalCurvatureState::flat()
                } else {
                    m.solve().map_err(|e| e.to_string())?.0.curvature_state()
                };
                (SweepBase::Mechanical(m), shape)
            }
            _ => return Err("sweep needs exactly one of `geometry` or `mechanics`".into()),
        };
        let extent = self.extent.resolved(&shape);
        Ok(SweepSpec {
            axes: sweep.axes.clone(),
            base,
            length: extent.length,
            width: extent.width,
            clearance: sweep.clearance,
            classify_tol: self.output.classify_tolerance,
        })
    }
}

fn invalid(field: &str, reason: &str) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        reason: reason.into(),
    }
}

fn infer_mechanical_mode(m: &MechanicsBlock) -> Mode {
    if !m.layers.is_empty() {
        Mode::Laminate
    } else if m.f_plus.is_some() {
        Mode::TwoSurface
    } else {
        Mode::SingleSurface
    }
}

fn check_mechanics(m: &MechanicsBlock, mode: Mode) -> Result<(), ConfigError> {
    let missing = |field: &str| ConfigError::Missing {
        field: format!("mechanics.{field}"),
        mode,
    };
    let not_allowed = |field: &str| ConfigError::NotAllowed {
        field: format!("mechanics.{field}"),
        mode,
    };
    if mode == Mode::Laminate {
        if m.layers.is_empty() {
            return Err(missing("layers"));
        }
        for (field, v) in [
            ("thickness", m.thickness),
            ("youngs_modulus", m.youngs_modulus),
            ("poisson_ratio", m.poisson_ratio),
        ] {
            if v.is_some() {
                return Err(not_allowed(field));
            }
        }
    } else {
        if !m.layers.is_empty() {
            return Err(not_allowed("layers"));
        }
        m.thickness.ok_or_else(|| missing("thickness"))?;
        m.youngs_modulus.ok_or_else(|| missing("youngs_modulus"))?;
        m.poisson_ratio.ok_or_else(|| missing("poisson_ratio"))?;
        m.f_minus.ok_or_else(|| missing("f_minus"))?;
        match mode {
            Mode::SingleSurface if m.f_plus.is_some() => return Err(not_allowed("f_plus")),
            Mode::TwoSurface if m.f_plus.is_none() => return Err(missing("f_plus")),
            _ => {}
        }
    }
    for (name, f) in [("f_minus", m.f_minus), ("f_plus", m.f_plus)] {
        if let Some(f) = f {
            if !(f.f1.is_finite() && f.f2.is_finite() && f.orientation.is_finite()) {
                return Err(invalid(&format!("mechanics.{name}"), "must be finite"));
            }
        }
    }
    if !m.cut_angle.is_finite() {
        return Err(invalid("mechanics.cut_angle", "must be finite"));
    }
    to_setup(m)
        .ribbon_section()
        .map_err(|e| invalid("mechanics", &e.to_string()))?;
    Ok(())
}

fn stress(b: Option<StressBlock>) -> SurfaceStressSpec<f64> {
    b.map(|s| SurfaceStressSpec::new(s.f1, s.f2, s.orientation))
        .unwrap_or_else(SurfaceStressSpec::zero)
}

fn to_setup(m: &MechanicsBlock) -> MechanicalSetup {
    let section = if m.layers.is_empty() {
        SectionSpec::Homogeneous {
            thickness: m.thickness.unwrap_or(f64::NAN),
            youngs_modulus: m.youngs_modulus.unwrap_or(f64::NAN),
            poisson_ratio: m.poisson_ratio.unwrap_or(f64::NAN),
        }
    } else {
        SectionSpec::Laminate(
            m.layers
                .iter()
                .map(|l| Ply {
                    thickness: l.thickness,
                    youngs_modulus: l.youngs_modulus,
                    poisson_ratio: l.poisson_ratio,
                    prestretch: l
                        .prestretch
                        .map(|p| Prestretch {
                            first: p.first,
                            second: p.second,
                            orientation: p.orientation,
                        })
                        .unwrap_or_default(),
                })
                .collect(),
        )
    };
    MechanicalSetup {
        section,
        f_minus: stress(m.f_minus),
        f_plus: stress(m.f_plus),
        cut_angle: m.cut_angle,
    }
}
