//! Elastic energy of a thin ribbon under surface stress and residual strain,
//! and its equilibrium curvature state.
//!
//! Sign conventions follow the geometry module: an in-plane direction at angle
//! `a` is `cos(a) d_x - sin(a) d_y`, so stress orientations, curvature
//! orientation `phi` and residual strain axes share one signed angle.

mod closed_form;
mod energy;
mod laminate;
pub mod linalg;
mod stationary;

pub use closed_form::{
    decouple_two_surfaces, solve_single_surface, solve_two_surface, DecoupledStress, TwoSurfaceSolution,
};
pub use energy::{energy_density, energy_gradient};
pub use laminate::{laminate_prestretch_to_residual, prestretched_section, PRESTRETCH_WARN_LIMIT};
pub use stationary::{solve_stationary_numeric, PHI_SCAN_STEPS};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{wrap_half_turn, PrincipalCurvatureState};
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElasticityError {
    #[error("invalid section: {0}")]
    InvalidSection(String),
    #[error("closed-form solution needs a homogeneous section; use the numeric solver for laminates")]
    LayeredSection,
    #[error("non-finite load or state")]
    NonFinite,
    #[error("stiffness matrix is singular")]
    Singular,
}

/// Symmetric in-plane tensor in ribbon axes `(d_x, d_y)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SymTensor2<T> {
    pub xx: T,
    pub yy: T,
    pub xy: T,
}

/// Principal values (`first >= second`) and axis angle of the first in `[-pi/2, pi/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Principal<T> {
    pub first: T,
    pub second: T,
    pub angle: T,
}

impl<T: Real> SymTensor2<T> {
    pub fn new(xx: T, yy: T, xy: T) -> Self {
        Self { xx, yy, xy }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    /// `v1 e1 (x) e1 + v2 e2 (x) e2` with `e1 = cos(a) d_x - sin(a) d_y`,
    /// `e2 = sin(a) d_x + cos(a) d_y`.
    pub fn from_principal(v1: T, v2: T, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(v1 * c * c + v2 * s * s, v1 * s * s + v2 * c * c, (v2 - v1) * s * c)
    }

    pub fn trace(&self) -> T {
        self.xx + self.yy
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.xx + o.xx, self.yy + o.yy, self.xy + o.xy)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.xx - o.xx, self.yy - o.yy, self.xy - o.xy)
    }

    pub fn scale(&self, k: T) -> Self {
        Self::new(self.xx * k, self.yy * k, self.xy * k)
    }

    pub fn max_abs(&self) -> T {
        self.xx.abs().max(self.yy.abs()).max(self.xy.abs())
    }

    /// Eigen-decomposition. An isotropic tensor reports angle 0.
    pub fn principal(&self) -> Principal<T> {
        let half = T::lit(0.5);
        let mean = (self.xx + self.yy) * half;
        let dev = (self.xx - self.yy) * half;
        let radius = dev.hypot(self.xy);
        let scale = self.max_abs();
        let angle = if radius <= T::epsilon() * T::lit(4.0) * scale {
            T::zero()
        } else {
            wrap_half_turn((-self.xy).atan2(dev) * half)
        };
        Principal {
            first: mean + radius,
            second: mean - radius,
            angle,
        }
    }
}

/// Principal surface stress on one face, force per length.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SurfaceStressSpec<T> {
    pub f1: T,
    pub f2: T,
    /// Angle of `e1` from `d_x`.
    pub orientation: T,
}

impl<T: Real> SurfaceStressSpec<T> {
    pub fn new(f1: T, f2: T, orientation: T) -> Self {
        Self { f1, f2, orientation }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.f1.is_finite() && self.f2.is_finite() && self.orientation.is_finite()
    }

    pub fn tensor(&self) -> SymTensor2<T> {
        SymTensor2::from_principal(self.f1, self.f2, self.orientation)
    }

    pub fn from_tensor(t: &SymTensor2<T>) -> Self {
        let p = t.principal();
        Self::new(p.first, p.second, p.angle)
    }

    /// Same stress with its axes turned by `delta` relative to the ribbon.
    pub fn rotated(&self, delta: T) -> Self {
        Self::new(self.f1, self.f2, self.orientation + delta)
    }
}

/// Stress-free strain mismatch carried by one layer.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ResidualStrain<T> {
    pub in_plane: SymTensor2<T>,
    pub zz: T,
}

impl<T: Real> ResidualStrain<T> {
    pub fn zero() -> Self {
        Self {
            in_plane: SymTensor2::zero(),
            zz: T::zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer<T> {
    pub thickness: T,
    pub youngs_modulus: T,
    pub poisson_ratio: T,
    pub residual: ResidualStrain<T>,
}

impl<T: Real> Layer<T> {
    pub fn new(thickness: T, youngs_modulus: T, poisson_ratio: T) -> Self {
        Self {
            thickness,
            youngs_modulus,
            poisson_ratio,
            residual: ResidualStrain::zero(),
        }
    }

    pub fn with_residual(mut self, residual: ResidualStrain<T>) -> Self {
        self.residual = residual;
        self
    }
}

/// Cross-section of the ribbon. Layers are listed from the bottom face
/// (`z = -H/2`) upward; an empty list means a homogeneous section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RibbonSection<T> {
    pub thickness: T,
    /// For laminates: thickness-weighted mean, used only as a scale.
    pub youngs_modulus: T,
    /// For laminates: thickness-weighted mean, informational.
    pub poisson_ratio: T,
    pub layers: Vec<Layer<T>>,
}

impl<T: Real> RibbonSection<T> {
    pub fn homogeneous(thickness: T, youngs_modulus: T, poisson_ratio: T) -> Self {
        Self {
            thickness,
            youngs_modulus,
            poisson_ratio,
            layers: Vec::new(),
        }
    }

    pub fn layered(layers: Vec<Layer<T>>) -> Result<Self, ElasticityError> {
        if layers.is_empty() {
            return Err(ElasticityError::InvalidSection("no layers".into()));
        }
        let h = layers.iter().fold(T::zero(), |a, l| a + l.thickness);
        let e = layers.iter().fold(T::zero(), |a, l| a + l.thickness * l.youngs_modulus) / h;
        let nu = layers.iter().fold(T::zero(), |a, l| a + l.thickness * l.poisson_ratio) / h;
        let s = Self {
            thickness: h,
            youngs_modulus: e,
            poisson_ratio: nu,
            layers,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn validate(&self) -> Result<(), ElasticityError> {
        let bad = |m: String| Err(ElasticityError::InvalidSection(m));
        let check = |h: T, e: T, nu: T, what: &str| -> Result<(), ElasticityError> {
            if !(h > T::zero() && h.is_finite()) {
                return bad(format!("{what} thickness must be positive, got {h}"));
            }
            if !(e > T::zero() && e.is_finite()) {
                return bad(format!("{what} Young's modulus must be positive, got {e}"));
            }
            if !(nu >= T::zero() && nu < T::lit(0.5)) {
                return bad(format!("{what} Poisson ratio must lie in [0, 0.5), got {nu}"));
            }
            Ok(())
        };
        check(self.thickness, self.youngs_modulus, self.poisson_ratio, "section")?;
        if !self.layers.is_empty() {
            let mut sum = T::zero();
            for (i, l) in self.layers.iter().enumerate() {
                check(l.thickness, l.youngs_modulus, l.poisson_ratio, &format!("layer {i}"))?;
                let r = &l.residual;
                if !(r.in_plane.max_abs().is_finite() && r.zz.is_finite()) {
                    return bad(format!("layer {i} residual strain is not finite"));
                }
                sum = sum + l.thickness;
            }
            if (sum - self.thickness).abs() > T::lit(1e-9) * self.thickness {
                return bad(format!("layer thicknesses sum to {sum}, section thickness is {}", self.thickness));
            }
        }
        Ok(())
    }

    /// The layers actually integrated: a homogeneous section is one stress-free layer.
    pub fn plies(&self) -> Vec<Layer<T>> {
        if self.layers.is_empty() {
            vec![Layer::new(self.thickness, self.youngs_modulus, self.poisson_ratio)]
        } else {
            self.layers.clone()
        }
    }
}

/// Kinematic unknowns of the ribbon: principal curvatures and their
/// orientation, the thickness strain gradient `q`, and the membrane strains in
/// ribbon axes at the bending reference plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StrainState<T> {
    pub kappa1: T,
    pub kappa2: T,
    pub phi: T,
    pub q: T,
    pub eps_xx: T,
    pub eps_yy: T,
    pub eps_xy: T,
    pub eps_zz: T,
}

impl<T: Real> StrainState<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Unknowns in the order `kappa1, kappa2, q, eps_xx, eps_yy, eps_xy, eps_zz, phi`.
    pub fn to_array(&self) -> [T; 8] {
        [
            self.kappa1,
            self.kappa2,
            self.q,
            self.eps_xx,
            self.eps_yy,
            self.eps_xy,
            self.eps_zz,
            self.phi,
        ]
    }

    pub fn from_array(u: [T; 8]) -> Self {
        Self {
            kappa1: u[0],
            kappa2: u[1],
            q: u[2],
            eps_xx: u[3],
            eps_yy: u[4],
            eps_xy: u[5],
            eps_zz: u[6],
            phi: u[7],
        }
    }

    pub fn membrane(&self) -> SymTensor2<T> {
        SymTensor2::new(self.eps_xx, self.eps_yy, self.eps_xy)
    }

    /// Membrane strain components in the principal curvature frame `(r1, r2)`.
    pub fn eps11(&self) -> T {
        let (s, c) = self.phi.sin_cos();
        self.eps_xx * c * c + self.eps_yy * s * s - (self.eps_xy + self.eps_xy) * s * c
    }

    pub fn eps22(&self) -> T {
        let (s, c) = self.phi.sin_cos();
        self.eps_xx * s * s + self.eps_yy * c * c + (self.eps_xy + self.eps_xy) * s * c
    }

    pub fn eps12(&self) -> T {
        let (s, c) = self.phi.sin_cos();
        (self.eps_xx - self.eps_yy) * s * c + self.eps_xy * (c * c - s * s)
    }

    pub fn eps33(&self) -> T {
        self.eps_zz
    }

    pub fn curvature_state(&self) -> PrincipalCurvatureState<T> {
        PrincipalCurvatureState::new(self.kappa1, self.kappa2, self.phi)
    }

    /// The same physical state labelled so that `phi` lies within a quarter
    /// turn of `phi_ref` (`(k1, k2, phi)` and `(k2, k1, phi + pi/2)` coincide).
    pub fn aligned_to(&self, phi_ref: T) -> Self {
        let q = T::FRAC_PI_2();
        let mut out = *self;
        out.phi = phi_ref + wrap_half_turn(self.phi - phi_ref);
        let d = out.phi - phi_ref;
        if d.abs() > q * T::lit(0.5) {
            out.kappa1 = self.kappa2;
            out.kappa2 = self.kappa1;
            out.phi = if d > T::zero() { out.phi - q } else { out.phi + q };
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSolution<T> {
    pub state: StrainState<T>,
    /// Energy per unit area at the solution.
    pub energy: T,
    /// Euclidean norm of the energy gradient over all eight unknowns, in
    /// units where lengths scale with `H` and energies with `E H`.
    pub gradient_norm: T,
    /// The energy does not depend on `phi` (isotropic loading); `phi` is reported as 0.
    pub degenerate: bool,
}

impl<T: Real> EquilibriumSolution<T> {
    pub fn curvature_state(&self) -> PrincipalCurvatureState<T> {
        self.state.curvature_state()
    }
}
