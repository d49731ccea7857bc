//! Structured run reports with verification residuals.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::config::JobConfig;
use crate::elasticity::EquilibriumSolution;
use crate::geometry::{classify, descriptors, frame_at, Classification, HelixDescriptors, PrincipalCurvatureState};
use crate::pipeline::SolverRoute;
use crate::surface::RibbonExtent;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// Nondimensional energy gradient norm; mechanical jobs only.
    pub gradient_norm: Option<f64>,
    /// `|alpha^2 - beta^2 - tau^2| / alpha^2`.
    pub identity: f64,
    /// Largest deviation of the frame from orthonormality along the ribbon.
    pub frame_orthogonality: f64,
}

impl Residuals {
    pub fn evaluate(
        state: &PrincipalCurvatureState<f64>,
        extent: &RibbonExtent<f64>,
        solution: Option<&EquilibriumSolution<f64>>,
    ) -> Self {
        let frame_orthogonality = (0..extent.samples_s)
            .map(|i| frame_at(state, extent.s_at(i)).orthonormality_error())
            .fold(0.0, f64::max);
        Self {
            gradient_norm: solution.map(|s| s.gradient_norm),
            identity: descriptors(state).identity_residual(),
            frame_orthogonality,
        }
    }

    /// Names of the residuals above `tol`, with their values.
    pub fn failures(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let mut check = |name: &str, v: f64| {
            if !(v <= tol) {
                out.push(format!("{name} residual {v:e} exceeds {tol:e}"));
            }
        };
        if let Some(g) = self.gradient_norm {
            check("gradient_norm", g);
        }
        check("identity", self.identity);
        check("frame_orthogonality", self.frame_orthogonality);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// The resolved configuration.
    pub config: JobConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub route: Option<SolverRoute>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solution: Option<EquilibriumSolution<f64>>,
    pub state: PrincipalCurvatureState<f64>,
    pub classification: Classification<f64>,
    pub descriptors: HelixDescriptors<f64>,
    pub extent: RibbonExtent<f64>,
    pub residuals: Residuals,
    pub tolerance: f64,
    pub passed: bool,
    pub failures: Vec<String>,
    pub outputs: Vec<PathBuf>,
}

impl RunReport {
    pub fn new(
        command: &str,
        config: &JobConfig,
        state: PrincipalCurvatureState<f64>,
        solved: Option<(EquilibriumSolution<f64>, SolverRoute)>,
        extent: RibbonExtent<f64>,
    ) -> Self {
        let tolerance = config.output.residual_tolerance;
        let residuals = Residuals::evaluate(&state, &extent, solved.as_ref().map(|(s, _)| s));
        let failures = residuals.failures(tolerance);
        Self {
            command: command.into(),
            config: config.clone(),
            route: solved.map(|(_, r)| r),
            solution: solved.map(|(s, _)| s),
            state,
            classification: classify(&state, config.output.classify_tolerance),
            descriptors: descriptors(&state),
            extent,
            residuals,
            tolerance,
            passed: failures.is_empty(),
            failures,
            outputs: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let d = &self.descriptors;
        format!(
            "class={} chirality={} R={} D={} Phi={} kappa1={} kappa2={} phi={} {}",
            self.classification.class.as_str(),
            d.chirality,
            super::format_g9(d.radius),
            super::format_g9(d.pitch),
            super::format_g9(d.helix_angle),
            super::format_g9(self.state.kappa1),
            super::format_g9(self.state.kappa2),
            super::format_g9(self.state.phi),
            if self.passed { "residuals ok" } else { "RESIDUAL FAILURE" },
        )
    }
}
