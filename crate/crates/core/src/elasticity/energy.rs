//! Energy per unit area as an exact quadratic form.
//!
//! The strain through the thickness is `m + zeta k + g(z)` with membrane part
//! `m = (e_xx, e_yy, e_zz, e_xy)`, gradient part
//! `k = (K_xx, K_yy, q, K_xy)` and per-layer residual `g`, where `zeta` is
//! measured from the stiffness-weighted centroid. For each layer the thickness
//! integrals of `1, zeta, zeta^2` are exact, so the energy is
//! `1/2 y.A.y + b.y + c` in the generalized vector `y = (m, k)`.
//!
//! Everything here is nondimensional: lengths by `H`, stresses by the
//! section's reference modulus, surface stresses by modulus times `H`.

use super::{ElasticityError, RibbonSection, StrainState, SurfaceStressSpec, SymTensor2};
use crate::elasticity::linalg::solve_dense;
use crate::scalar::Real;

pub(crate) struct Problem<T> {
    pub a: [[T; 8]; 8],
    pub b: [T; 8],
    pub c: T,
    /// Thickness and modulus used as scales.
    pub h: T,
    pub e: T,
}

fn isotropic_d<T: Real>(e: T, nu: T) -> [[T; 4]; 4] {
    let one = T::one();
    let two = T::lit(2.0);
    let lam = e * nu / ((one + nu) * (one - two * nu));
    let mu = e / (two * (one + nu));
    let d0 = lam + two * mu;
    let z = T::zero();
    [
        [d0, lam, lam, z],
        [lam, d0, lam, z],
        [lam, lam, d0, z],
        [z, z, z, two * two * mu],
    ]
}

fn mat_vec4<T: Real>(d: &[[T; 4]; 4], v: &[T; 4]) -> [T; 4] {
    let mut out = [T::zero(); 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i] = out[i] + d[i][j] * v[j];
        }
    }
    out
}

fn dot4<T: Real>(a: &[T; 4], b: &[T; 4]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

/// Work-conjugate vector of a surface stress: `f:gamma = F.(xx, yy, zz, xy)`.
fn surface_vector<T: Real>(t: &SymTensor2<T>, scale: T) -> [T; 4] {
    [t.xx / scale, t.yy / scale, T::zero(), (t.xy + t.xy) / scale]
}

fn residual_vector<T: Real>(r: &super::ResidualStrain<T>) -> [T; 4] {
    [r.in_plane.xx, r.in_plane.yy, r.zz, r.in_plane.xy]
}

/// `y = J(phi) u` with `u = (k1, k2, q, e_xx, e_yy, e_xy, e_zz)`.
pub(crate) fn jacobian<T: Real>(phi: T) -> [[T; 7]; 8] {
    let (s, c) = phi.sin_cos();
    let (o, z) = (T::one(), T::zero());
    let mut j = [[z; 7]; 8];
    j[0][3] = o;
    j[1][4] = o;
    j[2][6] = o;
    j[3][5] = o;
    j[4][0] = c * c;
    j[4][1] = s * s;
    j[5][0] = s * s;
    j[5][1] = c * c;
    j[6][2] = o;
    j[7][0] = -s * c;
    j[7][1] = s * c;
    j
}

pub(crate) fn jacobian_dphi<T: Real>(phi: T) -> [[T; 7]; 8] {
    let two = T::lit(2.0);
    let (s2, c2) = (two * phi).sin_cos();
    let mut j = [[T::zero(); 7]; 8];
    j[4][0] = -s2;
    j[4][1] = s2;
    j[5][0] = s2;
    j[5][1] = -s2;
    j[7][0] = -c2;
    j[7][1] = c2;
    j
}

fn apply<T: Real>(j: &[[T; 7]; 8], u: &[T; 7]) -> [T; 8] {
    let mut y = [T::zero(); 8];
    for i in 0..8 {
        for k in 0..7 {
            y[i] = y[i] + j[i][k] * u[k];
        }
    }
    y
}

impl<T: Real> Problem<T> {
    pub fn new(
        section: &RibbonSection<T>,
        f_minus: &SurfaceStressSpec<T>,
        f_plus: &SurfaceStressSpec<T>,
    ) -> Result<Self, ElasticityError> {
        section.validate()?;
        if !(f_minus.is_finite() && f_plus.is_finite()) {
            return Err(ElasticityError::NonFinite);
        }
        let h = section.thickness;
        let e_ref = section.youngs_modulus;
        let plies = section.plies();
        let half = T::lit(0.5);

        // layer bounds from the bottom face, and the stiffness-weighted centroid
        let mut bounds = Vec::with_capacity(plies.len());
        let mut z0 = -half;
        let (mut num, mut den) = (T::zero(), T::zero());
        for p in &plies {
            let z1 = z0 + p.thickness / h;
            let w = p.youngs_modulus / e_ref * (z1 - z0);
            num = num + w * (z0 + z1) * half;
            den = den + w;
            bounds.push((z0, z1));
            z0 = z1;
        }
        let z_ref = num / den;

        let mut a = [[T::zero(); 8]; 8];
        let mut b = [T::zero(); 8];
        let mut c = T::zero();
        let three = T::lit(3.0);
        for (p, &(lo, hi)) in plies.iter().zip(&bounds) {
            let (lo, hi) = (lo - z_ref, hi - z_ref);
            let i0 = hi - lo;
            let i1 = (hi * hi - lo * lo) * half;
            let i2 = (hi * hi * hi - lo * lo * lo) / three;
            let d = isotropic_d(p.youngs_modulus / e_ref, p.poisson_ratio);
            for r in 0..4 {
                for q in 0..4 {
                    a[r][q] = a[r][q] + i0 * d[r][q];
                    a[r][q + 4] = a[r][q + 4] + i1 * d[r][q];
                    a[r + 4][q] = a[r + 4][q] + i1 * d[r][q];
                    a[r + 4][q + 4] = a[r + 4][q + 4] + i2 * d[r][q];
                }
            }
            let g = residual_vector(&p.residual);
            let dg = mat_vec4(&d, &g);
            for r in 0..4 {
                b[r] = b[r] + i0 * dg[r];
                b[r + 4] = b[r + 4] + i1 * dg[r];
            }
            c = c + half * i0 * dot4(&g, &dg);
        }

        let fscale = e_ref * h;
        let faces = [
            (f_minus, -half - z_ref, &plies[0]),
            (f_plus, half - z_ref, &plies[plies.len() - 1]),
        ];
        for (f, zeta, ply) in faces {
            let fv = surface_vector(&f.tensor(), fscale);
            for r in 0..4 {
                b[r] = b[r] + fv[r];
                b[r + 4] = b[r + 4] + zeta * fv[r];
            }
            c = c + dot4(&fv, &residual_vector(&ply.residual));
        }
        Ok(Problem { a, b, c, h, e: e_ref })
    }

    pub fn energy(&self, y: &[T; 8]) -> T {
        let half = T::lit(0.5);
        let mut acc = self.c;
        for i in 0..8 {
            let mut ay = T::zero();
            for k in 0..8 {
                ay = ay + self.a[i][k] * y[k];
            }
            acc = acc + y[i] * (half * ay + self.b[i]);
        }
        acc
    }

    /// `A y + b`, the gradient with respect to the generalized vector.
    pub fn force(&self, y: &[T; 8]) -> [T; 8] {
        let mut r = self.b;
        for i in 0..8 {
            for k in 0..8 {
                r[i] = r[i] + self.a[i][k] * y[k];
            }
        }
        r
    }

    /// Nondimensional reduced unknowns of a dimensional state.
    pub fn reduce(&self, st: &StrainState<T>) -> [T; 7] {
        let h = self.h;
        [
            st.kappa1 * h,
            st.kappa2 * h,
            st.q * h,
            st.eps_xx,
            st.eps_yy,
            st.eps_xy,
            st.eps_zz,
        ]
    }

    pub fn expand(&self, u: &[T; 7], phi: T) -> StrainState<T> {
        let h = self.h;
        StrainState {
            kappa1: u[0] / h,
            kappa2: u[1] / h,
            phi,
            q: u[2] / h,
            eps_xx: u[3],
            eps_yy: u[4],
            eps_xy: u[5],
            eps_zz: u[6],
        }
    }

    pub fn energy_at(&self, u: &[T; 7], phi: T) -> T {
        self.energy(&apply(&jacobian(phi), u))
    }

    /// Gradient over `(k1, k2, q, e_xx, e_yy, e_xy, e_zz, phi)`.
    pub fn gradient_at(&self, u: &[T; 7], phi: T) -> [T; 8] {
        let j = jacobian(phi);
        let r = self.force(&apply(&j, u));
        let mut g = [T::zero(); 8];
        for k in 0..7 {
            for i in 0..8 {
                g[k] = g[k] + j[i][k] * r[i];
            }
        }
        g[7] = self.phi_derivative(u, phi, &r);
        g
    }

    fn phi_derivative(&self, u: &[T; 7], phi: T, r: &[T; 8]) -> T {
        let dy = apply(&jacobian_dphi(phi), u);
        r.iter().zip(&dy).fold(T::zero(), |s, (&p, &q)| s + p * q)
    }

    /// Minimizer over the seven reduced unknowns at fixed `phi`, and its energy.
    pub fn solve_at(&self, phi: T) -> Result<([T; 7], T), ElasticityError> {
        let j = jacobian(phi);
        let mut aj = [[T::zero(); 7]; 8];
        for i in 0..8 {
            for k in 0..7 {
                for l in 0..8 {
                    aj[i][k] = aj[i][k] + self.a[i][l] * j[l][k];
                }
            }
        }
        let mut m = [[T::zero(); 7]; 7];
        let mut rhs = [T::zero(); 7];
        for p in 0..7 {
            for i in 0..8 {
                rhs[p] = rhs[p] - j[i][p] * self.b[i];
                for k in 0..7 {
                    m[p][k] = m[p][k] + j[i][p] * aj[i][k];
                }
            }
        }
        let u = solve_dense(m, rhs).ok_or(ElasticityError::Singular)?;
        // at the minimizer the energy is c + b.J.u / 2
        let by = apply(&j, &u)
            .iter()
            .zip(&self.b)
            .fold(T::zero(), |s, (&y, &b)| s + y * b);
        Ok((u, self.c + by * T::lit(0.5)))
    }

    /// Envelope derivative of the reduced energy profile.
    pub fn profile_slope(&self, u: &[T; 7], phi: T) -> T {
        let r = self.force(&apply(&jacobian(phi), u));
        self.phi_derivative(u, phi, &r)
    }

    pub fn gradient_norm(&self, st: &StrainState<T>) -> T {
        let g = self.gradient_at(&self.reduce(st), st.phi);
        g.iter().fold(T::zero(), |s, &x| s + x * x).sqrt()
    }
}

/// Elastic plus surface-stress energy per unit area of a trial state.
///
/// Residual strains are taken from the section's layers. An invalid section
/// or non-finite load yields NaN.
pub fn energy_density<T: Real>(
    section: &RibbonSection<T>,
    trial: &StrainState<T>,
    f_minus: &SurfaceStressSpec<T>,
    f_plus: &SurfaceStressSpec<T>,
) -> T {
    match Problem::new(section, f_minus, f_plus) {
        Ok(p) => p.energy_at(&p.reduce(trial), trial.phi) * p.e * p.h,
        Err(_) => T::nan(),
    }
}

/// Gradient of the nondimensional energy over
/// `(k1 H, k2 H, q H, e_xx, e_yy, e_xy, e_zz, phi)`.
pub fn energy_gradient<T: Real>(
    section: &RibbonSection<T>,
    trial: &StrainState<T>,
    f_minus: &SurfaceStressSpec<T>,
    f_plus: &SurfaceStressSpec<T>,
) -> Result<[T; 8], ElasticityError> {
    let p = Problem::new(section, f_minus, f_plus)?;
    Ok(p.gradient_at(&p.reduce(trial), trial.phi))
}
