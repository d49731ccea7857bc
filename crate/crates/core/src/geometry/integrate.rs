//! Numerical oracle for the frame and centerline equations.
//!
//! Integrates the first-order system
//! `dr1/ds = -kappa1 cos(phi) N`, `dr2/ds = -kappa2 sin(phi) N`,
//! `dN/ds = kappa1 cos(phi) r1 + kappa2 sin(phi) r2`, `dP/ds = d_x`
//! with `d_x = cos(phi) r1 + sin(phi) r2`, using classical RK4. It shares no
//! code with the closed forms and exists only to check them.

use thiserror::Error;

use super::{FrameState, PrincipalCurvatureState};
use crate::scalar::Real;
use crate::vec3::Vec3;

#[derive(Debug, Error, PartialEq)]
pub enum IntegrationError {
    #[error("integration step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("integration length must be non-negative and finite, got {0}")]
    BadLength(f64),
}

#[derive(Clone, Copy)]
struct OdeState<T> {
    p: Vec3<T>,
    r1: Vec3<T>,
    r2: Vec3<T>,
    n: Vec3<T>,
}

impl<T: Real> OdeState<T> {
    fn axpy(self, h: T, d: Self) -> Self {
        Self {
            p: self.p + d.p * h,
            r1: self.r1 + d.r1 * h,
            r2: self.r2 + d.r2 * h,
            n: self.n + d.n * h,
        }
    }
}

struct Rates<T> {
    a: T,
    b: T,
    c: T,
    s: T,
}

impl<T: Real> Rates<T> {
    fn eval(&self, y: &OdeState<T>) -> OdeState<T> {
        OdeState {
            p: y.r1 * self.c + y.r2 * self.s,
            r1: y.n * (-self.a),
            r2: y.n * (-self.b),
            n: y.r1 * self.a + y.r2 * self.b,
        }
    }
}

/// Frames at `s = 0, h, 2h, ..., s_max` from RK4 with a uniform step no larger
/// than `step`.
pub fn integrate_frames_numeric<T: Real>(
    state: &PrincipalCurvatureState<T>,
    s_max: T,
    step: T,
) -> Result<Vec<FrameState<T>>, IntegrationError> {
    if !(step > T::zero()) || !step.is_finite() {
        return Err(IntegrationError::BadStep(step.to_f64_lossy()));
    }
    if !(s_max >= T::zero()) || !s_max.is_finite() {
        return Err(IntegrationError::BadLength(s_max.to_f64_lossy()));
    }
    let (sp, cp) = state.phi.sin_cos();
    let rates = Rates {
        a: state.kappa1 * cp,
        b: state.kappa2 * sp,
        c: cp,
        s: sp,
    };
    let n_steps = (s_max / step).ceil().to_usize().unwrap_or(0).max(1);
    let h = s_max / T::from_usize(n_steps).expect("step count fits scalar");
    let half = h * T::lit(0.5);
    let sixth = h / T::lit(6.0);

    let mut y = OdeState {
        p: Vec3::zero(),
        r1: Vec3::new(cp, -sp, T::zero()),
        r2: Vec3::new(sp, cp, T::zero()),
        n: Vec3::unit_z(),
    };
    let mut out = Vec::with_capacity(n_steps + 1);
    let to_frame = |y: &OdeState<T>| {
        let t = y.r1 * cp + y.r2 * sp;
        FrameState {
            position: y.p,
            tangent: t,
            normal: y.n,
            binormal: t.cross(y.n),
            r1: y.r1,
            r2: y.r2,
        }
    };
    out.push(to_frame(&y));
    for _ in 0..n_steps {
        let k1 = rates.eval(&y);
        let k2 = rates.eval(&y.axpy(half, k1));
        let k3 = rates.eval(&y.axpy(half, k2));
        let k4 = rates.eval(&y.axpy(h, k3));
        y = OdeState {
            p: y.p + (k1.p + k2.p * T::lit(2.0) + k3.p * T::lit(2.0) + k4.p) * sixth,
            r1: y.r1 + (k1.r1 + k2.r1 * T::lit(2.0) + k3.r1 * T::lit(2.0) + k4.r1) * sixth,
            r2: y.r2 + (k1.r2 + k2.r2 * T::lit(2.0) + k3.r2 * T::lit(2.0) + k4.r2) * sixth,
            n: y.n + (k1.n + k2.n * T::lit(2.0) + k3.n * T::lit(2.0) + k4.n) * sixth,
        };
        out.push(to_frame(&y));
    }
    Ok(out)
}
