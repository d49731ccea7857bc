//! Kinematics of a ribbon with prescribed, uniform principal curvatures.
//!
//! A state `(kappa1, kappa2, phi)` bends the ribbon with curvature `kappa1`
//! along `r1 = cos(phi) d_x - sin(phi) d_y` and `kappa2` along
//! `r2 = sin(phi) d_x + cos(phi) d_y`, where `d_x`/`d_y` are the length and
//! width directions. The centerline is then a circular helix whose
//! curvature `beta`, torsion `tau` and angular rate `alpha` follow from the
//! state in closed form.
//!
//! Global frame convention: the ribbon starts at the origin with
//! `T(0) = E_x`, width direction `E_y` and normal `N(0) = E_z`.

mod classify;
mod frames;
mod integrate;

pub use classify::{classify, Classification, MorphologyClass, DEFAULT_CLASSIFY_TOL};
pub use frames::{frame_at, FrameState};
pub use integrate::{integrate_frames_numeric, IntegrationError};

use serde::{Deserialize, Serialize};

use crate::scalar::{sign_of, Real};
use crate::vec3::Vec3;

/// The three tunable geometric parameters of a deformed ribbon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalCurvatureState<T> {
    pub kappa1: T,
    pub kappa2: T,
    /// Orientation of `r1` relative to `d_x` (clockwise positive), radians.
    pub phi: T,
}

impl<T: Real> PrincipalCurvatureState<T> {
    pub fn new(kappa1: T, kappa2: T, phi: T) -> Self {
        Self { kappa1, kappa2, phi }
    }

    pub fn flat() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.kappa1.is_finite() && self.kappa2.is_finite() && self.phi.is_finite()
    }

    /// Equivalent state with `phi` in `[-pi/2, pi/2)`.
    ///
    /// Shifting `phi` by `pi` flips the sign of both directors, which leaves
    /// the shape unchanged, so only `phi` moves.
    pub fn normalized(&self) -> Self {
        Self::new(self.kappa1, self.kappa2, wrap_half_turn(self.phi))
    }

    /// Same shape described with the two principal axes relabelled
    /// (`phi + pi/2` with the curvatures exchanged).
    pub fn relabelled(&self) -> Self {
        Self::new(self.kappa2, self.kappa1, wrap_half_turn(self.phi - T::FRAC_PI_2()))
    }

    /// Mirror image through the plane spanned by the length direction and the
    /// normal: `phi -> -phi`.
    pub fn mirrored(&self) -> Self {
        Self::new(self.kappa1, self.kappa2, -self.phi)
    }

    pub fn gauss_curvature(&self) -> T {
        self.kappa1 * self.kappa2
    }

    pub fn mean_curvature(&self) -> T {
        (self.kappa1 + self.kappa2) * T::lit(0.5)
    }

    /// Centerline invariants `(alpha, beta, tau)`.
    pub fn invariants(&self) -> HelixInvariants<T> {
        let (s, c) = self.phi.sin_cos();
        let (k1, k2) = (self.kappa1, self.kappa2);
        HelixInvariants {
            alpha: (k1 * k1 * c * c + k2 * k2 * s * s).sqrt(),
            beta: k1 * c * c + k2 * s * s,
            tau: (k1 - k2) * s * c,
        }
    }

    /// Invariants of the curve traced along the width direction `d_y` at the
    /// start of the ribbon. Normal curvature `kappa1 sin^2 + kappa2 cos^2`,
    /// the same geodesic torsion as the centerline.
    pub fn width_invariants(&self) -> HelixInvariants<T> {
        let (s, c) = self.phi.sin_cos();
        let (k1, k2) = (self.kappa1, self.kappa2);
        HelixInvariants {
            alpha: (k1 * k1 * s * s + k2 * k2 * c * c).sqrt(),
            beta: k1 * s * s + k2 * c * c,
            tau: (k1 - k2) * s * c,
        }
    }
}

/// Maps an angle into `[-pi/2, pi/2)`.
pub fn wrap_half_turn<T: Real>(phi: T) -> T {
    let pi = T::PI();
    let half = T::FRAC_PI_2();
    let mut p = phi - pi * ((phi + half) / pi).floor();
    // guard the rounding edge of floor()
    if p >= half {
        p = p - pi;
    }
    if p < -half {
        p = p + pi;
    }
    p
}

/// `alpha`, `beta` (curvature) and `tau` (torsion) of a helical curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixInvariants<T> {
    pub alpha: T,
    pub beta: T,
    pub tau: T,
}

/// Trigonometric kernels of the closed forms at arclength `s`:
/// `sin(a s)/a`, `(1 - cos a s)/a^2`, `(a s - sin a s)/a^3` and `cos(a s)`.
///
/// All are finite at `a = 0`; below the series cutoff they come from
/// three-term Taylor expansions.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Kernels<T> {
    pub sin_over: T,
    pub one_minus_cos: T,
    pub arc_minus_sin: T,
    pub cos: T,
}

impl<T: Real> Kernels<T> {
    pub(crate) fn new(a: T, s: T) -> Self {
        let x = a * s;
        if x.abs() < T::series_cutoff() {
            let x2 = x * x;
            let x4 = x2 * x2;
            let s2 = s * s;
            Self {
                sin_over: s * (T::one() - x2 / T::lit(6.0) + x4 / T::lit(120.0)),
                one_minus_cos: s2 * (T::lit(0.5) - x2 / T::lit(24.0) + x4 / T::lit(720.0)),
                arc_minus_sin: s2
                    * s
                    * (T::one() / T::lit(6.0) - x2 / T::lit(120.0) + x4 / T::lit(5040.0)),
                cos: x.cos(),
            }
        } else {
            let (sn, cs) = x.sin_cos();
            let half = (x * T::lit(0.5)).sin();
            Self {
                sin_over: sn / a,
                one_minus_cos: T::lit(2.0) * half * half / (a * a),
                arc_minus_sin: (x - sn) / (a * a * a),
                cos: cs,
            }
        }
    }
}

/// Scalar helix descriptors of the ribbon centerline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HelixDescriptors<T> {
    pub alpha: T,
    /// Centerline curvature.
    pub beta: T,
    /// Centerline torsion.
    pub tau: T,
    /// Angle between the tangent and the plane normal to the axis.
    pub helix_angle: T,
    pub radius: T,
    /// Axial advance per turn (non-negative).
    pub pitch: T,
    /// Unit helix axis; `None` when the centerline is straight.
    pub axis: Option<Vec3<T>>,
    /// +1 right-handed, -1 left-handed, 0 achiral.
    pub chirality: i8,
}

impl<T: Real> HelixDescriptors<T> {
    fn straight() -> Self {
        Self {
            alpha: T::zero(),
            beta: T::zero(),
            tau: T::zero(),
            helix_angle: T::zero(),
            radius: T::zero(),
            pitch: T::zero(),
            axis: None,
            chirality: 0,
        }
    }

    /// Arclength of one full turn, `2 pi / alpha`; infinite for a straight centerline.
    pub fn turn_length(&self) -> T {
        if self.alpha > T::zero() {
            T::TAU() / self.alpha
        } else {
            T::infinity()
        }
    }

    /// `|alpha^2 - beta^2 - tau^2| / alpha^2` (zero for a straight centerline).
    pub fn identity_residual(&self) -> T {
        let a2 = self.alpha * self.alpha;
        if a2 > T::zero() {
            (a2 - self.beta * self.beta - self.tau * self.tau).abs() / a2
        } else {
            T::zero()
        }
    }
}

/// Helix descriptors of the centerline.
///
/// A straight centerline (`alpha = 0`, which includes the flat state) yields
/// zeroed descriptors with the axis left undefined.
pub fn descriptors<T: Real>(state: &PrincipalCurvatureState<T>) -> HelixDescriptors<T> {
    let HelixInvariants { alpha, beta, tau } = state.invariants();
    if !(alpha > T::zero()) {
        return HelixDescriptors::straight();
    }
    let a2 = alpha * alpha;
    let ratio = (tau / alpha).max(-T::one()).min(T::one());
    HelixDescriptors {
        alpha,
        beta,
        tau,
        helix_angle: ratio.asin(),
        radius: beta.abs() / a2,
        pitch: T::TAU() * tau.abs() / a2,
        axis: Some(Vec3::new(tau / alpha, beta / alpha, T::zero())),
        chirality: sign_of(tau),
    }
}

/// A point on the helix axis: the centre of curvature of `P(0)`.
///
/// Returns `None` for a straight centerline.
pub fn axis_point<T: Real>(state: &PrincipalCurvatureState<T>) -> Option<Vec3<T>> {
    let HelixInvariants { alpha, beta, .. } = state.invariants();
    if alpha > T::zero() {
        Some(Vec3::new(T::zero(), T::zero(), -beta / (alpha * alpha)))
    } else {
        None
    }
}

/// Distance from `p` to the helix axis, or `None` for a straight centerline.
pub fn distance_to_axis<T: Real>(state: &PrincipalCurvatureState<T>, p: Vec3<T>) -> Option<T> {
    let c = axis_point(state)?;
    let m = descriptors(state).axis?;
    Some((p - c).cross(m).norm())
}

/// Centerline position `P(s)`; the ribbon passes through the origin at `s = 0`.
pub fn centerline_point<T: Real>(state: &PrincipalCurvatureState<T>, s: T) -> Vec3<T> {
    let HelixInvariants { alpha, beta, tau } = state.invariants();
    let k = Kernels::new(alpha, s);
    Vec3::new(
        s - beta * beta * k.arc_minus_sin,
        beta * tau * k.arc_minus_sin,
        -beta * k.one_minus_cos,
    )
}
