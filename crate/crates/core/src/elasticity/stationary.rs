//! Numeric equilibrium for arbitrary sections and loads.
//!
//! At fixed `phi` the energy is quadratic in the other seven unknowns, so
//! each sample of the profile `E(phi)` is one linear solve. The profile is
//! scanned densely over `[-pi/2, pi/2)` and the best sample is refined by a
//! root search on the envelope derivative `dE/dphi`.

use rayon::prelude::*;

use super::energy::Problem;
use super::linalg::brent_root;
use super::{ElasticityError, EquilibriumSolution, RibbonSection, SurfaceStressSpec};
use crate::scalar::Real;

/// Samples of the orientation profile over half a turn.
pub const PHI_SCAN_STEPS: usize = 2000;

/// Relative spread of the profile below which `phi` is undetermined.
const FLAT_PROFILE_TOL: f64 = 1e-12;

pub fn solve_stationary_numeric<T: Real>(
    section: &RibbonSection<T>,
    f_plus: &SurfaceStressSpec<T>,
    f_minus: &SurfaceStressSpec<T>,
) -> Result<EquilibriumSolution<T>, ElasticityError> {
    let p = Problem::new(section, f_minus, f_plus)?;
    let pi = T::PI();
    let step = pi / T::from_usize(PHI_SCAN_STEPS).unwrap();
    let angle = |i: usize| -T::FRAC_PI_2() + step * T::from_usize(i).unwrap();
    let profile: Vec<T> = (0..PHI_SCAN_STEPS)
        .into_par_iter()
        .map(|i| p.solve_at(angle(i)).map(|(_, e)| e))
        .collect::<Result<_, _>>()?;

    let (lo, hi) = profile
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(a, b), &e| (a.min(e), b.max(e)));
    let scale = lo.abs().max(hi.abs()).max(p.c.abs()).max(T::min_positive_value());
    let degenerate = hi - lo <= T::lit(FLAT_PROFILE_TOL) * scale;

    let phi = if degenerate {
        T::zero()
    } else {
        let mut best = 0;
        for i in 1..PHI_SCAN_STEPS {
            let (e, eb) = (profile[i], profile[best]);
            if e < eb || (e == eb && angle(i).abs() < angle(best).abs()) {
                best = i;
            }
        }
        refine(&p, angle(best), step)
    };

    let (u, _) = p.solve_at(phi)?;
    let state = p.expand(&u, phi).aligned_to(T::zero());
    Ok(EquilibriumSolution {
        state,
        energy: p.energy_at(&p.reduce(&state), state.phi) * p.e * p.h,
        gradient_norm: p.gradient_norm(&state),
        degenerate,
    })
}

fn refine<T: Real>(p: &Problem<T>, phi0: T, step: T) -> T {
    let slope = |phi: T| match p.solve_at(phi) {
        Ok((u, _)) => p.profile_slope(&u, phi),
        Err(_) => T::nan(),
    };
    let (a, b) = (phi0 - step, phi0 + step);
    let (sa, s0, sb) = (slope(a), slope(phi0), slope(b));
    let bracket = if sa <= T::zero() && s0 >= T::zero() {
        Some((a, phi0))
    } else if s0 <= T::zero() && sb >= T::zero() {
        Some((phi0, b))
    } else {
        None
    };
    bracket
        .and_then(|(x, y)| brent_root(slope, x, y, T::epsilon(), 200))
        .unwrap_or(phi0)
}
