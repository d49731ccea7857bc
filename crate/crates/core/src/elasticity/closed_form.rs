//! Closed-form equilibria of a homogeneous ribbon.

use serde::{Deserialize, Serialize};

use super::energy::Problem;
use super::{ElasticityError, EquilibriumSolution, RibbonSection, StrainState, SurfaceStressSpec, SymTensor2};
use crate::geometry::wrap_half_turn;
use crate::scalar::Real;

fn require_homogeneous<T: Real>(section: &RibbonSection<T>) -> Result<(), ElasticityError> {
    if !section.is_homogeneous() {
        return Err(ElasticityError::LayeredSection);
    }
    section.validate()
}

fn is_isotropic<T: Real>(f: &SurfaceStressSpec<T>) -> bool {
    (f.f1 - f.f2).abs() <= T::epsilon() * T::lit(4.0) * f.f1.abs().max(f.f2.abs())
}

/// Bending part of the single-surface solution: `(k1, k2, q)`.
fn bending<T: Real>(section: &RibbonSection<T>, f: &SurfaceStressSpec<T>) -> (T, T, T) {
    let (e, h, nu) = (section.youngs_modulus, section.thickness, section.poisson_ratio);
    let six = T::lit(6.0);
    let d = e * h * h;
    (
        six * (f.f1 - nu * f.f2) / d,
        six * (f.f2 - nu * f.f1) / d,
        -six * nu * (f.f1 + f.f2) / d,
    )
}

/// Membrane strain produced by a net in-plane surface stress: principal
/// values along the stress axes, and the thickness strain.
fn stretching<T: Real>(section: &RibbonSection<T>, f: &SurfaceStressSpec<T>) -> (SymTensor2<T>, T) {
    let (e, h, nu) = (section.youngs_modulus, section.thickness, section.poisson_ratio);
    let d = e * h;
    let e1 = -(f.f1 - nu * f.f2) / d;
    let e2 = -(f.f2 - nu * f.f1) / d;
    (SymTensor2::from_principal(e1, e2, f.orientation), nu * (f.f1 + f.f2) / d)
}

fn finish<T: Real>(
    section: &RibbonSection<T>,
    state: StrainState<T>,
    f_minus: &SurfaceStressSpec<T>,
    f_plus: &SurfaceStressSpec<T>,
    degenerate: bool,
) -> Result<EquilibriumSolution<T>, ElasticityError> {
    let p = Problem::new(section, f_minus, f_plus)?;
    let u = p.reduce(&state);
    Ok(EquilibriumSolution {
        state,
        energy: p.energy_at(&u, state.phi) * p.e * p.h,
        gradient_norm: p.gradient_norm(&state),
        degenerate,
    })
}

/// Equilibrium of a homogeneous ribbon with surface stress on the bottom face only.
///
/// The curvature axes coincide with the stress axes; `phi` is the stress
/// orientation mapped into `[-pi/2, pi/2)`.
pub fn solve_single_surface<T: Real>(
    section: &RibbonSection<T>,
    f_minus: &SurfaceStressSpec<T>,
) -> Result<EquilibriumSolution<T>, ElasticityError> {
    require_homogeneous(section)?;
    if !f_minus.is_finite() {
        return Err(ElasticityError::NonFinite);
    }
    let f = SurfaceStressSpec::new(f_minus.f1, f_minus.f2, wrap_half_turn(f_minus.orientation));
    let (k1, k2, q) = bending(section, &f);
    let (m, ezz) = stretching(section, &f);
    let state = StrainState {
        kappa1: k1,
        kappa2: k2,
        phi: f.orientation,
        q,
        eps_xx: m.xx,
        eps_yy: m.yy,
        eps_xy: m.xy,
        eps_zz: ezz,
    };
    finish(section, state, &f, &SurfaceStressSpec::zero(), is_isotropic(&f))
}

/// Stretching (`f+ + f-`) and bending (`f- - f+`) parts of a pair of face stresses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoupledStress<T> {
    pub stretch: SurfaceStressSpec<T>,
    pub bend: SurfaceStressSpec<T>,
}

pub fn decouple_two_surfaces<T: Real>(
    f_plus: &SurfaceStressSpec<T>,
    f_minus: &SurfaceStressSpec<T>,
) -> DecoupledStress<T> {
    let (tp, tm) = (f_plus.tensor(), f_minus.tensor());
    DecoupledStress {
        stretch: SurfaceStressSpec::from_tensor(&tp.add(&tm)),
        bend: SurfaceStressSpec::from_tensor(&tm.sub(&tp)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSurfaceSolution<T> {
    pub solution: EquilibriumSolution<T>,
    pub loads: DecoupledStress<T>,
    /// Stretching strain in ribbon axes and its thickness component.
    pub stretch_strain: SymTensor2<T>,
    pub stretch_zz: T,
}

/// Homogeneous ribbon with stress on both faces: bending from the effective
/// bottom stress `f- - f+`, stretching from `f- + f+`.
pub fn solve_two_surface<T: Real>(
    section: &RibbonSection<T>,
    f_plus: &SurfaceStressSpec<T>,
    f_minus: &SurfaceStressSpec<T>,
) -> Result<TwoSurfaceSolution<T>, ElasticityError> {
    require_homogeneous(section)?;
    if !(f_plus.is_finite() && f_minus.is_finite()) {
        return Err(ElasticityError::NonFinite);
    }
    let loads = decouple_two_surfaces(f_plus, f_minus);
    let (k1, k2, q) = bending(section, &loads.bend);
    let (m, ezz) = stretching(section, &loads.stretch);
    let state = StrainState {
        kappa1: k1,
        kappa2: k2,
        phi: loads.bend.orientation,
        q,
        eps_xx: m.xx,
        eps_yy: m.yy,
        eps_xy: m.xy,
        eps_zz: ezz,
    };
    let solution = finish(section, state, f_minus, f_plus, is_isotropic(&loads.bend))?;
    Ok(TwoSurfaceSolution {
        solution,
        loads,
        stretch_strain: m,
        stretch_zz: ezz,
    })
}
