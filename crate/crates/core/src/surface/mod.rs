//! The deformed ribbon surface `Q(s, t)`.
//!
//! The short edge at `s = 0` deforms into the curve obtained by integrating
//! the director equations along the width direction; the surface is that
//! edge curve carried along the centerline by the moving frame
//! `(d_x, d_y, N)`:
//!
//! `Q(s, t) = P(s) + [X~(t), Y~(t), Z~(t)] A(s)`
//!
//! with the row-vector convention and `A(s)` holding `T`, `d_y`, `N` as rows.
//! [`surface_point`] evaluates the multiplied-out expressions directly;
//! [`surface_point_composed`] builds the same point from its factors.

mod contact;
mod curvature;
mod mesh;

pub use contact::{edge_contact, touches_within, ContactReport};
pub use curvature::{discrete_curvatures, DiscreteCurvature, VertexStars};
pub use mesh::{tessellate, MeshError, RibbonExtent, TriangleMesh};

use crate::geometry::{centerline_point, HelixInvariants, Kernels, PrincipalCurvatureState};
use crate::scalar::Real;
use crate::vec3::{Mat3, Vec3};

/// Deformed short edge `Q(0, t)` for `|t| <= w/2`.
pub fn edge_curve<T: Real>(state: &PrincipalCurvatureState<T>, t: T) -> Vec3<T> {
    let w = state.width_invariants();
    let k = Kernels::new(w.alpha, t);
    Vec3::new(
        w.beta * w.tau * k.arc_minus_sin,
        t - w.beta * w.beta * k.arc_minus_sin,
        -w.beta * k.one_minus_cos,
    )
}

/// Rotation carrying the initial frame to the frame at `s`; its rows are
/// `T(s)`, `d_y(s)` and `N(s)`.
pub fn rotation_matrix<T: Real>(state: &PrincipalCurvatureState<T>, s: T) -> Mat3<T> {
    let HelixInvariants { alpha, beta, tau } = state.invariants();
    let k = Kernels::new(alpha, s);
    Mat3::from_rows(
        Vec3::new(
            T::one() - beta * beta * k.one_minus_cos,
            beta * tau * k.one_minus_cos,
            -beta * k.sin_over,
        ),
        Vec3::new(
            beta * tau * k.one_minus_cos,
            T::one() - tau * tau * k.one_minus_cos,
            tau * k.sin_over,
        ),
        Vec3::new(beta * k.sin_over, -tau * k.sin_over, k.cos),
    )
}

/// Surface point `Q(s, t)` from the expanded closed form.
pub fn surface_point<T: Real>(state: &PrincipalCurvatureState<T>, s: T, t: T) -> Vec3<T> {
    let HelixInvariants { alpha, beta, tau } = state.invariants();
    let w = state.width_invariants();
    let ks = Kernels::new(alpha, s);
    let kt = Kernels::new(w.alpha, t);
    let p = centerline_point(state, s);

    let (b, bw) = (beta, w.beta);
    // (alpha_w t - sin alpha_w t)/alpha_w^3 and (1 - cos alpha_w t)/alpha_w^2
    let at = kt.arc_minus_sin;
    let ct = kt.one_minus_cos;
    let (sa, ca) = (ks.sin_over, ks.one_minus_cos);
    let dyy = T::one() - tau * tau * ca;

    let x = p.x + bw * tau * at * (T::one() - b * (b + bw) * ca) + b * tau * ca * t
        - b * bw * ct * sa;
    let y = p.y + bw * at * (b * tau * tau * ca - bw * dyy) + t * dyy + bw * tau * ct * sa;
    let z = p.z + tau * sa * (t - bw * (b + bw) * at) - bw * ct * ks.cos;
    Vec3::new(x, y, z)
}

/// `P(s) + edge(t) A(s)` assembled from the three factors; test oracle for
/// [`surface_point`].
pub fn surface_point_composed<T: Real>(state: &PrincipalCurvatureState<T>, s: T, t: T) -> Vec3<T> {
    centerline_point(state, s) + rotation_matrix(state, s).left_mul(edge_curve(state, t))
}
