//! Discrete curvature estimates on a triangle mesh: angle defect over the
//! mixed Voronoi area for the Gauss curvature, the cotangent Laplacian for
//! the mean curvature.

use std::collections::HashMap;

use thiserror::Error;

use super::TriangleMesh;
use crate::scalar::Real;
use crate::vec3::Vec3;

#[derive(Debug, Error, PartialEq)]
pub enum CurvatureError {
    #[error("vertex {0} is on the mesh boundary")]
    Boundary(usize),
    #[error("vertex {0} is out of range")]
    OutOfRange(usize),
    #[error("vertex {0} has a degenerate neighbourhood")]
    Degenerate(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteCurvature<T> {
    pub gauss: T,
    /// Signed against the averaged face normal.
    pub mean: T,
    pub area: T,
}

/// Incident triangles of every vertex.
#[derive(Debug, Clone)]
pub struct VertexStars {
    stars: Vec<Vec<usize>>,
}

impl VertexStars {
    pub fn build<T: Real>(mesh: &TriangleMesh<T>) -> Self {
        let mut stars = vec![Vec::new(); mesh.vertices.len()];
        for (k, tri) in mesh.triangles.iter().enumerate() {
            for &v in tri {
                stars[v].push(k);
            }
        }
        Self { stars }
    }

    pub fn is_boundary<T: Real>(&self, mesh: &TriangleMesh<T>, v: usize) -> bool {
        let mut edges: HashMap<usize, u32> = HashMap::new();
        for &k in &self.stars[v] {
            for &u in &mesh.triangles[k] {
                if u != v {
                    *edges.entry(u).or_default() += 1;
                }
            }
        }
        edges.is_empty() || edges.values().any(|&c| c != 2)
    }

    pub fn curvature_at<T: Real>(
        &self,
        mesh: &TriangleMesh<T>,
        v: usize,
    ) -> Result<DiscreteCurvature<T>, CurvatureError> {
        if v >= mesh.vertices.len() {
            return Err(CurvatureError::OutOfRange(v));
        }
        if self.is_boundary(mesh, v) {
            return Err(CurvatureError::Boundary(v));
        }
        let x = mesh.vertices[v];
        let half = T::lit(0.5);
        let mut angle_sum = T::zero();
        let mut area = T::zero();
        let mut laplace = Vec3::zero();
        let mut normal = Vec3::zero();
        for &k in &self.stars[v] {
            let tri = mesh.triangles[k];
            let pos = tri.iter().position(|&u| u == v).unwrap();
            let a = mesh.vertices[tri[(pos + 1) % 3]];
            let b = mesh.vertices[tri[(pos + 2) % 3]];
            let (ea, eb, ab) = (a - x, b - x, b - a);
            let n = ea.cross(eb);
            let twice_area = n.norm();
            if !(twice_area > T::zero()) {
                return Err(CurvatureError::Degenerate(v));
            }
            normal += n;
            let theta = twice_area.atan2(ea.dot(eb));
            angle_sum = angle_sum + theta;
            // cotangents of the angles at a and at b
            let cot_a = (-ea).dot(ab) / twice_area;
            let cot_b = (-eb).dot(-ab) / twice_area;
            laplace += ea * cot_b + eb * cot_a;

            let tri_area = twice_area * half;
            let obtuse_at_v = ea.dot(eb) < T::zero();
            let obtuse_other = (-ea).dot(ab) < T::zero() || (-eb).dot(-ab) < T::zero();
            area = area
                + if obtuse_at_v {
                    tri_area * half
                } else if obtuse_other {
                    tri_area * T::lit(0.25)
                } else {
                    (ea.norm_squared() * cot_b + eb.norm_squared() * cot_a) / T::lit(8.0)
                };
        }
        let mean_normal = laplace * (half / area);
        let n = normal.normalized().ok_or(CurvatureError::Degenerate(v))?;
        let mean = mean_normal.norm() * half;
        let signed = if mean_normal.dot(n) < T::zero() { mean } else { -mean };
        Ok(DiscreteCurvature {
            gauss: (T::TAU() - angle_sum) / area,
            mean: signed,
            area,
        })
    }
}

/// Discrete Gauss and mean curvature at an interior vertex.
pub fn discrete_curvatures<T: Real>(
    mesh: &TriangleMesh<T>,
    vertex: usize,
) -> Result<DiscreteCurvature<T>, CurvatureError> {
    VertexStars::build(mesh).curvature_at(mesh, vertex)
}
