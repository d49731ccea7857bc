//! Equilibrium shapes of thin elastic ribbons.
//!
//! A ribbon bent with uniform principal curvatures `(kappa1, kappa2)` at an
//! angle `phi` to its length is a helicoidal surface whose centerline is a
//! circular helix. The crate computes that geometry in closed form, meshes
//! the surface, predicts the curvature state from surface stresses and
//! residual strains, and sweeps parameters into phase tables.
//!
//! Kernels are generic over the scalar type ([`scalar::Real`], implemented
//! for `f32` and `f64`); the aliases below fix it to `f64`.

// negated comparisons are how NaN inputs are rejected
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod elasticity;
pub mod geometry;
pub mod io;
pub mod pipeline;
pub mod scalar;
pub mod surface;
pub mod sweep;
pub mod vec3;
pub mod verify;

pub type CurvatureState = geometry::PrincipalCurvatureState<f64>;
pub type Descriptors = geometry::HelixDescriptors<f64>;
pub type Frame = geometry::FrameState<f64>;
pub type Mesh = surface::TriangleMesh<f64>;
pub type Extent = surface::RibbonExtent<f64>;
pub type Section = elasticity::RibbonSection<f64>;
pub type SurfaceStress = elasticity::SurfaceStressSpec<f64>;
pub type Solution = elasticity::EquilibriumSolution<f64>;
