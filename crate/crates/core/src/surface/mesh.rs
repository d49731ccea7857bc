use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::surface_point;
use crate::geometry::PrincipalCurvatureState;
use crate::scalar::Real;
use crate::vec3::Vec3;

#[derive(Debug, Error, PartialEq)]
pub enum MeshError {
    #[error("need at least 2 samples along each direction, got {samples_s}x{samples_t}")]
    TooFewSamples { samples_s: usize, samples_t: usize },
    #[error("ribbon length and width must be positive and finite (L={length}, w={width})")]
    BadDimensions { length: f64, width: f64 },
    #[error("ribbon width {width} exceeds its length {length}")]
    WiderThanLong { length: f64, width: f64 },
}

/// Extent and sampling of the material parameter rectangle
/// `[0, L] x [-w/2, w/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RibbonExtent<T> {
    pub length: T,
    pub width: T,
    pub samples_s: usize,
    pub samples_t: usize,
}

impl<T: Real> RibbonExtent<T> {
    pub fn new(length: T, width: T, samples_s: usize, samples_t: usize) -> Self {
        Self {
            length,
            width,
            samples_s,
            samples_t,
        }
    }

    pub fn validate(&self) -> Result<(), MeshError> {
        if self.samples_s < 2 || self.samples_t < 2 {
            return Err(MeshError::TooFewSamples {
                samples_s: self.samples_s,
                samples_t: self.samples_t,
            });
        }
        let (l, w) = (self.length.to_f64_lossy(), self.width.to_f64_lossy());
        if !(l > 0.0 && w > 0.0 && l.is_finite() && w.is_finite()) {
            return Err(MeshError::BadDimensions { length: l, width: w });
        }
        if w > l {
            return Err(MeshError::WiderThanLong { length: l, width: w });
        }
        if 10.0 * w > l {
            log::warn!("ribbon width {w} is not small against its length {l}");
        }
        Ok(())
    }

    pub fn s_at(&self, i: usize) -> T {
        self.length * T::from_usize(i).unwrap() / T::from_usize(self.samples_s - 1).unwrap()
    }

    pub fn t_at(&self, j: usize) -> T {
        let half = self.width * T::lit(0.5);
        -half + self.width * T::from_usize(j).unwrap() / T::from_usize(self.samples_t - 1).unwrap()
    }
}

/// Regular-grid triangulation of the deformed surface.
///
/// Vertex `(i, j)` (i along the length, j across the width) has index
/// `i * samples_t + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh<T> {
    pub vertices: Vec<Vec3<T>>,
    pub triangles: Vec<[usize; 3]>,
    /// Material coordinates `(s, t)` of each vertex.
    pub params: Vec<(T, T)>,
    pub samples_s: usize,
    pub samples_t: usize,
    /// Largest principal curvature magnitude of the surface that was sampled.
    pub max_curvature: T,
}

impl<T: Real> TriangleMesh<T> {
    pub fn vertex_index(&self, i: usize, j: usize) -> usize {
        i * self.samples_t + j
    }

    pub fn triangle_area(&self, tri: usize) -> T {
        let [a, b, c] = self.triangles[tri].map(|k| self.vertices[k]);
        (b - a).cross(c - a).norm() * T::lit(0.5)
    }

    pub fn total_area(&self) -> T {
        (0..self.triangles.len())
            .map(|k| self.triangle_area(k))
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn min_triangle_area(&self) -> T {
        (0..self.triangles.len())
            .map(|k| self.triangle_area(k))
            .fold(T::infinity(), T::min)
    }
}

/// Samples the surface on a regular `(s, t)` grid, two triangles per cell.
pub fn tessellate<T: Real>(
    state: &PrincipalCurvatureState<T>,
    extent: &RibbonExtent<T>,
) -> Result<TriangleMesh<T>, MeshError> {
    extent.validate()?;
    let (ns, nt) = (extent.samples_s, extent.samples_t);
    let rows: Vec<Vec<(Vec3<T>, (T, T))>> = (0..ns)
        .into_par_iter()
        .map(|i| {
            let s = extent.s_at(i);
            (0..nt)
                .map(|j| {
                    let t = extent.t_at(j);
                    (surface_point(state, s, t), (s, t))
                })
                .collect()
        })
        .collect();
    let (vertices, params) = rows.into_iter().flatten().unzip();

    let mut triangles = Vec::with_capacity(2 * (ns - 1) * (nt - 1));
    for i in 0..ns - 1 {
        for j in 0..nt - 1 {
            let v00 = i * nt + j;
            let v10 = (i + 1) * nt + j;
            let v11 = (i + 1) * nt + j + 1;
            let v01 = i * nt + j + 1;
            triangles.push([v00, v10, v11]);
            triangles.push([v00, v11, v01]);
        }
    }
    Ok(TriangleMesh {
        vertices,
        triangles,
        params,
        samples_s: ns,
        samples_t: nt,
        max_curvature: state.kappa1.abs().max(state.kappa2.abs()),
    })
}
