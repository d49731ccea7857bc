use serde::{Deserialize, Serialize};

use super::{centerline_point, HelixInvariants, Kernels, PrincipalCurvatureState};
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Moving frame of the ribbon at one arclength.
///
/// `tangent = d_x`, `normal = d_z`, `binormal = T x N` (which is `-d_y`),
/// and the principal-curvature directors `r1`, `r2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrameState<T> {
    pub position: Vec3<T>,
    pub tangent: Vec3<T>,
    pub normal: Vec3<T>,
    pub binormal: Vec3<T>,
    pub r1: Vec3<T>,
    pub r2: Vec3<T>,
}

impl<T: Real> FrameState<T> {
    /// The material width direction `d_y = N x T`.
    pub fn width_direction(&self) -> Vec3<T> {
        -self.binormal
    }

    /// Largest deviation of `(T, N, B)` from an orthonormal triad.
    pub fn orthonormality_error(&self) -> T {
        let (t, n, b) = (self.tangent, self.normal, self.binormal);
        [
            t.dot(n).abs(),
            n.dot(b).abs(),
            t.dot(b).abs(),
            (t.norm() - T::one()).abs(),
            (n.norm() - T::one()).abs(),
            (b.norm() - T::one()).abs(),
        ]
        .into_iter()
        .fold(T::zero(), T::max)
    }
}

/// Closed-form frame at arclength `s`.
pub fn frame_at<T: Real>(state: &PrincipalCurvatureState<T>, s: T) -> FrameState<T> {
    let HelixInvariants { alpha, beta, tau } = state.invariants();
    let k = Kernels::new(alpha, s);
    let (sp, cp) = state.phi.sin_cos();

    let normal = Vec3::new(beta * k.sin_over, -tau * k.sin_over, k.cos);
    let tangent = Vec3::new(
        T::one() - beta * beta * k.one_minus_cos,
        beta * tau * k.one_minus_cos,
        -beta * k.sin_over,
    );
    let width = Vec3::new(
        beta * tau * k.one_minus_cos,
        T::one() - tau * tau * k.one_minus_cos,
        tau * k.sin_over,
    );
    // r_i(s) = r_i(0) - (bending rate) * integral of N
    let c1 = state.kappa1 * cp;
    let c2 = state.kappa2 * sp;
    let r1 = Vec3::new(
        cp - c1 * beta * k.one_minus_cos,
        -sp + c1 * tau * k.one_minus_cos,
        -c1 * k.sin_over,
    );
    let r2 = Vec3::new(
        sp - c2 * beta * k.one_minus_cos,
        cp + c2 * tau * k.one_minus_cos,
        -c2 * k.sin_over,
    );
    FrameState {
        position: centerline_point(state, s),
        tangent,
        normal,
        binormal: -width,
        r1,
        r2,
    }
}
