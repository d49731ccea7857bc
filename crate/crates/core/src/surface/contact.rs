use std::collections::HashMap;

use rayon::prelude::*;

use super::mesh::TriangleMesh;
use crate::scalar::Real;
use crate::vec3::Vec3;

/// Closest approach between patches of a mesh that are far apart in material coordinates.
///
/// Two triangles are compared only when their material separation is at least
/// `pi / kappa_max`, the largest arc over which a curve of curvature `kappa_max`
/// cannot bend back towards itself. `min_gap` is infinite when no such pair exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactReport<T> {
    pub min_gap: T,
    pub touching: bool,
    /// Some compared pair of triangles actually crosses.
    pub intersecting: bool,
    pub closest_pair: Option<(usize, usize)>,
}

pub fn edge_contact<T: Real>(mesh: &TriangleMesh<T>, clearance: T) -> ContactReport<T> {
    let prep = Prepared::new(mesh);
    let none = ContactReport {
        min_gap: T::infinity(),
        touching: false,
        intersecting: false,
        closest_pair: None,
    };
    if !prep.exclusion.is_finite() || mesh.triangles.is_empty() {
        return none;
    }
    let diag = prep.diagonal();
    let mut radius = if clearance > T::zero() {
        clearance
    } else {
        diag * T::lit(1e-3)
    };
    loop {
        if let Some(hit) = prep.search(radius) {
            return ContactReport {
                min_gap: hit.distance,
                touching: hit.distance <= clearance,
                intersecting: hit.intersecting,
                closest_pair: Some(hit.pair),
            };
        }
        if radius > diag {
            return none;
        }
        radius = radius + radius;
    }
}

/// Single-radius variant of [`edge_contact`]: only answers whether the clearance is violated.
pub fn touches_within<T: Real>(mesh: &TriangleMesh<T>, clearance: T) -> bool {
    let prep = Prepared::new(mesh);
    if !prep.exclusion.is_finite() || mesh.triangles.is_empty() {
        return false;
    }
    prep.search(clearance.max(T::zero())).is_some()
}

struct Hit<T> {
    distance: T,
    pair: (usize, usize),
    intersecting: bool,
}

struct Prepared<'a, T> {
    mesh: &'a TriangleMesh<T>,
    lo: Vec<Vec3<T>>,
    hi: Vec<Vec3<T>>,
    centre: Vec<(T, T)>,
    spread: Vec<T>,
    exclusion: T,
    extent: T,
}

impl<'a, T: Real> Prepared<'a, T> {
    fn new(mesh: &'a TriangleMesh<T>) -> Self {
        let n = mesh.triangles.len();
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        let mut centre = Vec::with_capacity(n);
        let mut spread = Vec::with_capacity(n);
        let mut extent = T::zero();
        let three = T::lit(3.0);
        for tri in &mesh.triangles {
            let p = tri.map(|v| mesh.vertices[v]);
            let mut l = p[0];
            let mut h = p[0];
            for q in &p[1..] {
                l = Vec3::new(l.x.min(q.x), l.y.min(q.y), l.z.min(q.z));
                h = Vec3::new(h.x.max(q.x), h.y.max(q.y), h.z.max(q.z));
            }
            extent = extent.max((h - l).max_abs());
            lo.push(l);
            hi.push(h);
            let m = tri.map(|v| mesh.params[v]);
            let c = (
                (m[0].0 + m[1].0 + m[2].0) / three,
                (m[0].1 + m[1].1 + m[2].1) / three,
            );
            let r = m
                .iter()
                .map(|&(s, t)| (s - c.0).hypot(t - c.1))
                .fold(T::zero(), T::max);
            centre.push(c);
            spread.push(r);
        }
        let exclusion = if mesh.max_curvature > T::zero() {
            T::PI() / mesh.max_curvature
        } else {
            T::infinity()
        };
        Prepared {
            mesh,
            lo,
            hi,
            centre,
            spread,
            exclusion,
            extent,
        }
    }

    fn diagonal(&self) -> T {
        let mut l = self.lo[0];
        let mut h = self.hi[0];
        for (a, b) in self.lo.iter().zip(&self.hi) {
            l = Vec3::new(l.x.min(a.x), l.y.min(a.y), l.z.min(a.z));
            h = Vec3::new(h.x.max(b.x), h.y.max(b.y), h.z.max(b.z));
        }
        (h - l).norm()
    }

    fn far_apart(&self, a: usize, b: usize) -> bool {
        let (ca, cb) = (self.centre[a], self.centre[b]);
        let sep = (ca.0 - cb.0).hypot(ca.1 - cb.1) - self.spread[a] - self.spread[b];
        sep >= self.exclusion
    }

    fn box_gap(&self, a: usize, b: usize) -> T {
        let mut g = T::zero();
        for k in 0..3 {
            let d = (self.lo[b][k] - self.hi[a][k])
                .max(self.lo[a][k] - self.hi[b][k])
                .max(T::zero());
            g = g + d * d;
        }
        g.sqrt()
    }

    fn search(&self, radius: T) -> Option<Hit<T>> {
        let cell = radius.max(self.extent).max(T::min_positive_value());
        let key = |v: Vec3<T>| -> [i64; 3] {
            [0, 1, 2].map(|k| (v[k] / cell).floor().to_i64().unwrap_or(0))
        };
        let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
        for i in 0..self.lo.len() {
            let (a, b) = (key(self.lo[i]), key(self.hi[i]));
            for x in a[0]..=b[0] {
                for y in a[1]..=b[1] {
                    for z in a[2]..=b[2] {
                        grid.entry([x, y, z]).or_default().push(i);
                    }
                }
            }
        }
        let pad = Vec3::new(radius, radius, radius);
        let best = (0..self.lo.len())
            .into_par_iter()
            .filter_map(|i| {
                let (a, b) = (key(self.lo[i] - pad), key(self.hi[i] + pad));
                let mut cand = Vec::new();
                for x in a[0]..=b[0] {
                    for y in a[1]..=b[1] {
                        for z in a[2]..=b[2] {
                            if let Some(list) = grid.get(&[x, y, z]) {
                                cand.extend(list.iter().copied().filter(|&j| j > i));
                            }
                        }
                    }
                }
                cand.sort_unstable();
                cand.dedup();
                let mut local: Option<Hit<T>> = None;
                for j in cand {
                    if self.box_gap(i, j) > radius || !self.far_apart(i, j) {
                        continue;
                    }
                    let (d, crossing) = self.triangle_distance(i, j);
                    if d <= radius && local.as_ref().is_none_or(|h| d < h.distance) {
                        local = Some(Hit {
                            distance: d,
                            pair: (i, j),
                            intersecting: crossing,
                        });
                    }
                }
                local
            })
            .reduce_with(|x, y| {
                if y.distance < x.distance || (y.distance == x.distance && y.pair < x.pair) {
                    y
                } else {
                    x
                }
            });
        best
    }

    fn triangle_distance(&self, a: usize, b: usize) -> (T, bool) {
        let pa = self.mesh.triangles[a].map(|v| self.mesh.vertices[v]);
        let pb = self.mesh.triangles[b].map(|v| self.mesh.vertices[v]);
        triangle_triangle_distance(&pa, &pb)
    }
}

/// Euclidean distance between two triangles, and whether they intersect.
pub(crate) fn triangle_triangle_distance<T: Real>(a: &[Vec3<T>; 3], b: &[Vec3<T>; 3]) -> (T, bool) {
    for k in 0..3 {
        let (p, q) = (a[k], a[(k + 1) % 3]);
        if segment_hits_triangle(p, q, b) {
            return (T::zero(), true);
        }
        let (p, q) = (b[k], b[(k + 1) % 3]);
        if segment_hits_triangle(p, q, a) {
            return (T::zero(), true);
        }
    }
    let mut best = T::infinity();
    for k in 0..3 {
        best = best.min(a[k].distance(closest_on_triangle(a[k], b)));
        best = best.min(b[k].distance(closest_on_triangle(b[k], a)));
        for m in 0..3 {
            let d = segment_distance(a[k], a[(k + 1) % 3], b[m], b[(m + 1) % 3]);
            best = best.min(d);
        }
    }
    (best, false)
}

fn closest_on_triangle<T: Real>(p: Vec3<T>, tri: &[Vec3<T>; 3]) -> Vec3<T> {
    let [a, b, c] = *tri;
    let zero = T::zero();
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(ap);
    let d2 = ac.dot(ap);
    if d1 <= zero && d2 <= zero {
        return a;
    }
    let bp = p - b;
    let d3 = ab.dot(bp);
    let d4 = ac.dot(bp);
    if d3 >= zero && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= zero && d1 >= zero && d3 <= zero {
        return a + ab * (d1 / (d1 - d3));
    }
    let cp = p - c;
    let d5 = ab.dot(cp);
    let d6 = ac.dot(cp);
    if d6 >= zero && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= zero && d2 >= zero && d6 <= zero {
        return a + ac * (d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= zero && d4 - d3 >= zero && d5 - d6 >= zero {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let sum = va + vb + vc;
    if sum == zero {
        return a;
    }
    a + ab * (vb / sum) + ac * (vc / sum)
}

fn segment_distance<T: Real>(p1: Vec3<T>, q1: Vec3<T>, p2: Vec3<T>, q2: Vec3<T>) -> T {
    let (zero, one) = (T::zero(), T::one());
    let clamp = |x: T| x.max(zero).min(one);
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.dot(d1);
    let e = d2.dot(d2);
    let f = d2.dot(r);
    let tiny = T::epsilon() * T::epsilon();
    let (s, t) = if a <= tiny && e <= tiny {
        (zero, zero)
    } else if a <= tiny {
        (zero, clamp(f / e))
    } else {
        let c = d1.dot(r);
        if e <= tiny {
            (clamp(-c / a), zero)
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut s = if denom > zero {
                clamp((b * f - c * e) / denom)
            } else {
                zero
            };
            let mut t = (b * s + f) / e;
            if t < zero {
                t = zero;
                s = clamp(-c / a);
            } else if t > one {
                t = one;
                s = clamp((b - c) / a);
            }
            (s, t)
        }
    };
    (p1 + d1 * s).distance(p2 + d2 * t)
}

fn segment_hits_triangle<T: Real>(p: Vec3<T>, q: Vec3<T>, tri: &[Vec3<T>; 3]) -> bool {
    let (zero, one) = (T::zero(), T::one());
    let dir = q - p;
    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let h = dir.cross(e2);
    let det = e1.dot(h);
    let scale = e1.norm() * e2.norm() * dir.norm();
    if det.abs() <= T::epsilon() * scale {
        return false;
    }
    let inv = one / det;
    let sv = p - tri[0];
    let u = inv * sv.dot(h);
    if u < zero || u > one {
        return false;
    }
    let qv = sv.cross(e1);
    let v = inv * dir.dot(qv);
    if v < zero || u + v > one {
        return false;
    }
    let t = inv * e2.dot(qv);
    t >= zero && t <= one
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{descriptors, PrincipalCurvatureState};
    use crate::surface::{tessellate, RibbonExtent};

    fn v(x: f64, y: f64, z: f64) -> Vec3<f64> {
        Vec3::new(x, y, z)
    }

    #[test]
    fn parallel_triangles() {
        let a = [v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0)];
        let b = a.map(|p| p + v(0.2, 0.2, 0.75));
        let (d, hit) = triangle_triangle_distance(&a, &b);
        assert!((d - 0.75).abs() < 1e-15);
        assert!(!hit);
    }

    #[test]
    fn crossing_triangles() {
        let a = [v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0)];
        let b = [v(0.2, 0.2, -1.0), v(0.2, 0.2, 1.0), v(0.3, 0.5, 0.0)];
        assert_eq!(triangle_triangle_distance(&a, &b), (0.0, true));
    }

    #[test]
    fn edge_to_edge_distance() {
        let a = [v(0.0, 0.0, 0.0), v(1.0, 0.0, 0.0), v(0.0, 1.0, 0.0)];
        let b = [v(0.5, -0.5, 1.0), v(0.5, 0.5, 1.0), v(0.5, 0.0, 2.0)];
        let (d, _) = triangle_triangle_distance(&a, &b);
        assert!((d - 1.0).abs() < 1e-15);
        let c = [v(2.0, 2.0, 0.0), v(3.0, 2.0, 0.0), v(2.0, 3.0, 0.0)];
        let (d, _) = triangle_triangle_distance(&a, &c);
        assert!((d - 1.5 * 2f64.sqrt()).abs() < 1e-15);
    }

    fn helix_mesh(width: f64) -> TriangleMesh<f64> {
        let state = PrincipalCurvatureState::new(1.0f64, 0.0, 0.3);
        let ext = RibbonExtent::new(30.0, width, 600, 12);
        tessellate(&state, &ext).unwrap()
    }

    #[test]
    fn flat_strip_has_no_far_patches() {
        let ext = RibbonExtent::new(10.0, 1.0, 50, 5);
        let mesh = tessellate(&PrincipalCurvatureState::<f64>::flat(), &ext).unwrap();
        let rep = edge_contact(&mesh, 0.01);
        assert!(rep.min_gap.is_infinite());
        assert!(!rep.touching);
    }

    #[test]
    fn gap_closes_as_width_grows() {
        let d = descriptors(&PrincipalCurvatureState::new(1.0f64, 0.0, 0.3));
        let w_star = d.pitch * d.helix_angle.cos();
        let widths = [0.6, 1.0, 1.3, 1.6, 1.8];
        let gaps: Vec<f64> = widths
            .iter()
            .map(|&w| edge_contact(&helix_mesh(w), 0.01).min_gap)
            .collect();
        for pair in gaps.windows(2) {
            assert!(pair[1] < pair[0], "{gaps:?}");
        }
        assert!(gaps[0] < w_star - 0.6 + 1e-9);
        assert!(gaps.iter().all(|&g| g > 0.01));
        let closed = edge_contact(&helix_mesh(w_star + 0.05), 0.01);
        assert!(closed.touching, "{closed:?}");
        assert!(touches_within(&helix_mesh(w_star + 0.05), 0.01));
        assert!(!touches_within(&helix_mesh(1.0), 0.01));
    }
}
