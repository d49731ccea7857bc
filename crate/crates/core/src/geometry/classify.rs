use std::fmt;

use serde::{Deserialize, Serialize};

use super::{descriptors, HelixInvariants, PrincipalCurvatureState};
use crate::scalar::Real;

/// Relative band used by [`classify`] unless overridden.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphologyClass {
    Flat,
    Ring,
    CylindricalHelix,
    PurelyTwisted,
    /// General helix with negative Gauss curvature.
    GeneralHelixSaddle,
    /// General helix with positive Gauss curvature.
    GeneralHelixConvex,
}

impl MorphologyClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Flat => "flat",
            Self::Ring => "ring",
            Self::CylindricalHelix => "cylindrical_helix",
            Self::PurelyTwisted => "purely_twisted",
            Self::GeneralHelixSaddle => "general_helix_saddle",
            Self::GeneralHelixConvex => "general_helix_convex",
        }
    }
}

impl fmt::Display for MorphologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification<T> {
    pub class: MorphologyClass,
    pub gauss_curvature: T,
    pub mean_curvature: T,
    /// Handedness; zero for rings and flat states.
    pub chirality: i8,
}

/// Assigns exactly one morphology class to a state.
///
/// Checks run in order, each with a band relative to `alpha`:
/// flat (`max |kappa| <= tol`, in inverse length units), ring (`|tau| <= tol alpha`),
/// purely twisted (`|beta| <= tol alpha`), cylindrical (`|K| <= tol alpha^2`),
/// then saddle or convex by the sign of `K`.
///
/// A bent ribbon with a straight centerline (`alpha ~ 0`, e.g. width-wise
/// bending at `phi = pi/2`) is the infinite-radius end of the ring family and
/// is reported as a ring.
pub fn classify<T: Real>(state: &PrincipalCurvatureState<T>, tol: T) -> Classification<T> {
    let tol = tol.abs();
    let gauss = state.gauss_curvature();
    let mean = state.mean_curvature();
    let HelixInvariants { alpha, beta, tau } = state.invariants();
    let kmax = state.kappa1.abs().max(state.kappa2.abs());
    let d = descriptors(state);

    let class = if kmax <= tol {
        MorphologyClass::Flat
    } else if alpha <= tol * kmax || tau.abs() <= tol * alpha {
        MorphologyClass::Ring
    } else if beta.abs() <= tol * alpha {
        MorphologyClass::PurelyTwisted
    } else if gauss.abs() <= tol * alpha * alpha {
        MorphologyClass::CylindricalHelix
    } else if gauss < T::zero() {
        MorphologyClass::GeneralHelixSaddle
    } else {
        MorphologyClass::GeneralHelixConvex
    };
    let chirality = match class {
        MorphologyClass::Flat | MorphologyClass::Ring => 0,
        _ => d.chirality,
    };
    Classification {
        class,
        gauss_curvature: gauss,
        mean_curvature: mean,
        chirality,
    }
}
