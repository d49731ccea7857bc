//! Parameter sweeps producing phase tables of morphology classes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elasticity::ElasticityError;
use crate::geometry::{classify, descriptors, HelixDescriptors, MorphologyClass, PrincipalCurvatureState};
use crate::pipeline::{MechanicalSetup, SectionSpec};
use crate::surface::{edge_contact, tessellate, touches_within, MeshError, RibbonExtent};

/// Coarse and confirmation mesh resolutions for tubule detection.
pub const COARSE_SAMPLES: (usize, usize) = (120, 12);
pub const FINE_SAMPLES: (usize, usize) = (480, 48);

/// Grid points evaluated together before their records are emitted.
const CHUNK: usize = 256;

/// Relative size below which a boundary indicator on a grid point is treated as zero.
const NUMERIC_ZERO: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep needs 1 to 3 axes, got {0}")]
    AxisCount(usize),
    #[error("axis `{name}`: {reason}")]
    BadAxis { name: String, reason: String },
    #[error("parameter `{0}` is not available in this sweep mode")]
    WrongMode(String),
    #[error("parameter `{0}` appears on more than one axis")]
    DuplicateAxis(String),
    #[error(transparent)]
    Elasticity(#[from] ElasticityError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("output sink failed: {0}")]
    Sink(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    Kappa1,
    Kappa2,
    Phi,
    Width,
    Length,
    F1Minus,
    F2Minus,
    OrientationMinus,
    /// `f2_minus / f1_minus`, keeping `f1_minus`.
    StressRatioMinus,
    F1Plus,
    F2Plus,
    OrientationPlus,
    CutAngle,
    YoungsModulus,
    PoissonRatio,
    Thickness,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Kappa1 => "kappa1",
            SweepParam::Kappa2 => "kappa2",
            SweepParam::Phi => "phi",
            SweepParam::Width => "width",
            SweepParam::Length => "length",
            SweepParam::F1Minus => "f1_minus",
            SweepParam::F2Minus => "f2_minus",
            SweepParam::OrientationMinus => "orientation_minus",
            SweepParam::StressRatioMinus => "stress_ratio_minus",
            SweepParam::F1Plus => "f1_plus",
            SweepParam::F2Plus => "f2_plus",
            SweepParam::OrientationPlus => "orientation_plus",
            SweepParam::CutAngle => "cut_angle",
            SweepParam::YoungsModulus => "youngs_modulus",
            SweepParam::PoissonRatio => "poisson_ratio",
            SweepParam::Thickness => "thickness",
        }
    }

    fn is_geometric(self) -> bool {
        matches!(self, SweepParam::Kappa1 | SweepParam::Kappa2 | SweepParam::Phi)
    }

    fn is_extent(self) -> bool {
        matches!(self, SweepParam::Width | SweepParam::Length)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub name: SweepParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepAxis {
    pub fn new(name: SweepParam, min: f64, max: f64, count: usize) -> Self {
        Self { name, min, max, count }
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.count == 1 {
            self.min
        } else if i + 1 == self.count {
            self.max
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }

    fn validate(&self) -> Result<(), SweepError> {
        let bad = |reason: &str| SweepError::BadAxis {
            name: self.name.as_str().into(),
            reason: reason.into(),
        };
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(bad("range must be finite"));
        }
        if self.count == 0 {
            return Err(bad("count must be at least 1"));
        }
        if self.count == 1 && self.min != self.max {
            return Err(bad("a single-point axis needs min == max"));
        }
        if self.count > 1 && !(self.max > self.min) {
            return Err(bad("max must exceed min"));
        }
        Ok(())
    }
}

/// Fixed values of everything not swept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SweepBase {
    Geometric(PrincipalCurvatureState<f64>),
    Mechanical(MechanicalSetup),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Vec<SweepAxis>,
    pub base: SweepBase,
    /// Ribbon length and width used for tubule detection.
    pub length: f64,
    pub width: f64,
    /// Contact clearance; defaults to the section thickness in mechanical
    /// mode and to 1% of the width in geometric mode.
    pub clearance: Option<f64>,
    pub classify_tol: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.axes.is_empty() || self.axes.len() > 3 {
            return Err(SweepError::AxisCount(self.axes.len()));
        }
        for (k, a) in self.axes.iter().enumerate() {
            a.validate()?;
            if self.axes[..k].iter().any(|b| b.name == a.name) {
                return Err(SweepError::DuplicateAxis(a.name.as_str().into()));
            }
            let geometric = matches!(self.base, SweepBase::Geometric(_));
            if !a.name.is_extent() && a.name.is_geometric() != geometric {
                return Err(SweepError::WrongMode(a.name.as_str().into()));
            }
            if let SweepBase::Mechanical(m) = &self.base {
                let homogeneous_only = matches!(
                    a.name,
                    SweepParam::YoungsModulus | SweepParam::PoissonRatio | SweepParam::Thickness
                );
                if homogeneous_only && matches!(m.section, SectionSpec::Laminate(_)) {
                    return Err(SweepError::WrongMode(a.name.as_str().into()));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn width_swept(&self) -> bool {
        self.axes.iter().any(|a| a.name == SweepParam::Width)
    }

    /// Grid index of flat position `k`; the first axis varies slowest.
    pub fn grid_index(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.axes.len()];
        for (slot, a) in idx.iter_mut().zip(&self.axes).rev() {
            *slot = k % a.count;
            k /= a.count;
        }
        idx
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseRecord {
    pub index: Vec<usize>,
    pub values: Vec<f64>,
    pub state: PrincipalCurvatureState<f64>,
    pub class: MorphologyClass,
    pub gauss_curvature: f64,
    pub descriptors: HelixDescriptors<f64>,
    /// Only evaluated when the width is swept.
    pub tubule: Option<bool>,
    pub min_gap: Option<f64>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseTable {
    pub axes: Vec<SweepAxis>,
    pub records: Vec<PhaseRecord>,
}

/// Concrete inputs of one grid point.
struct Point {
    state_or_setup: SweepBase,
    length: f64,
    width: f64,
}

fn apply(spec: &SweepSpec, values: &[f64]) -> Point {
    let mut base = spec.base.clone();
    let (mut length, mut width) = (spec.length, spec.width);
    for (a, &v) in spec.axes.iter().zip(values) {
        match (&mut base, a.name) {
            (_, SweepParam::Width) => width = v,
            (_, SweepParam::Length) => length = v,
            (SweepBase::Geometric(s), SweepParam::Kappa1) => s.kappa1 = v,
            (SweepBase::Geometric(s), SweepParam::Kappa2) => s.kappa2 = v,
            (SweepBase::Geometric(s), SweepParam::Phi) => s.phi = v,
            (SweepBase::Mechanical(m), p) => set_mechanical(m, p, v),
            _ => unreachable!("validated sweep axis"),
        }
    }
    Point {
        state_or_setup: base,
        length,
        width,
    }
}

fn set_mechanical(m: &mut MechanicalSetup, p: SweepParam, v: f64) {
    match p {
        SweepParam::F1Minus => m.f_minus.f1 = v,
        SweepParam::F2Minus => m.f_minus.f2 = v,
        SweepParam::OrientationMinus => m.f_minus.orientation = v,
        SweepParam::StressRatioMinus => m.f_minus.f2 = v * m.f_minus.f1,
        SweepParam::F1Plus => m.f_plus.f1 = v,
        SweepParam::F2Plus => m.f_plus.f2 = v,
        SweepParam::OrientationPlus => m.f_plus.orientation = v,
        SweepParam::CutAngle => m.cut_angle = v,
        SweepParam::YoungsModulus | SweepParam::PoissonRatio | SweepParam::Thickness => {
            if let SectionSpec::Homogeneous {
                thickness,
                youngs_modulus,
                poisson_ratio,
            } = &mut m.section
            {
                match p {
                    SweepParam::YoungsModulus => *youngs_modulus = v,
                    SweepParam::PoissonRatio => *poisson_ratio = v,
                    _ => *thickness = v,
                }
            }
        }
        _ => unreachable!("validated sweep axis"),
    }
}

/// Curvature state at a point, and whether the orientation was undetermined.
fn resolve(point: &Point) -> Result<(PrincipalCurvatureState<f64>, bool), SweepError> {
    match &point.state_or_setup {
        SweepBase::Geometric(s) => Ok((*s, false)),
        SweepBase::Mechanical(m) => {
            let (sol, _) = m.solve()?;
            Ok((sol.curvature_state(), sol.degenerate))
        }
    }
}

fn clearance(spec: &SweepSpec, point: &Point) -> f64 {
    spec.clearance.unwrap_or(match &point.state_or_setup {
        SweepBase::Geometric(_) => 0.01 * point.width,
        SweepBase::Mechanical(m) => m.thickness(),
    })
}

fn evaluate(spec: &SweepSpec, k: usize) -> Result<PhaseRecord, SweepError> {
    let index = spec.grid_index(k);
    let values: Vec<f64> = spec.axes.iter().zip(&index).map(|(a, &i)| a.value(i)).collect();
    let point = apply(spec, &values);
    let (state, degenerate) = resolve(&point)?;
    let c = classify(&state, spec.classify_tol);
    let (tubule, min_gap) = if spec.width_swept() {
        let (flag, gap) = detect_tubule(&state, point.length, point.width, clearance(spec, &point))?;
        (Some(flag), Some(gap))
    } else {
        (None, None)
    };
    Ok(PhaseRecord {
        index,
        values,
        state,
        class: c.class,
        gauss_curvature: c.gauss_curvature,
        descriptors: descriptors(&state),
        tubule,
        min_gap,
        degenerate,
    })
}

/// Coarse contact check, confirmed on the fine mesh when it fires.
pub fn detect_tubule(
    state: &PrincipalCurvatureState<f64>,
    length: f64,
    width: f64,
    clearance: f64,
) -> Result<(bool, f64), MeshError> {
    let coarse = tessellate(state, &RibbonExtent::new(length, width, COARSE_SAMPLES.0, COARSE_SAMPLES.1))?;
    let report = edge_contact(&coarse, clearance);
    if !report.touching {
        return Ok((false, report.min_gap));
    }
    let fine = tessellate(state, &RibbonExtent::new(length, width, FINE_SAMPLES.0, FINE_SAMPLES.1))?;
    Ok((touches_within(&fine, clearance), report.min_gap))
}

/// Evaluates every grid point, handing records to `sink` in grid order.
/// Returns the number of records emitted.
pub fn run_sweep_streaming<F>(spec: &SweepSpec, mut sink: F) -> Result<usize, SweepError>
where
    F: FnMut(&PhaseRecord) -> Result<(), SweepError>,
{
    spec.validate()?;
    let n = spec.len();
    let mut start = 0;
    while start < n {
        let end = (start + CHUNK).min(n);
        let chunk: Vec<PhaseRecord> = (start..end)
            .into_par_iter()
            .map(|k| evaluate(spec, k))
            .collect::<Result<_, _>>()?;
        for r in &chunk {
            sink(r)?;
        }
        start = end;
    }
    Ok(n)
}

pub fn run_sweep(spec: &SweepSpec) -> Result<PhaseTable, SweepError> {
    let mut records = Vec::with_capacity(spec.len());
    run_sweep_streaming(spec, |r| {
        records.push(r.clone());
        Ok(())
    })?;
    Ok(PhaseTable {
        axes: spec.axes.clone(),
        records,
    })
}

/// Scalar whose sign change marks a morphology boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// `beta = 0`: purely twisted ribbon.
    Twist,
    /// `tau = 0`: ring.
    Ring,
    /// `K = 0`: cylindrical helix.
    Cylinder,
}

impl BoundaryKind {
    pub fn indicator(self, s: &PrincipalCurvatureState<f64>) -> f64 {
        let inv = s.invariants();
        match self {
            BoundaryKind::Twist => inv.beta,
            BoundaryKind::Ring => inv.tau,
            BoundaryKind::Cylinder => s.gauss_curvature(),
        }
    }
}

/// Locates sign changes of the boundary indicator along a one-axis sweep,
/// refined by bisection to `1e-10` of the axis range.
pub fn find_boundary(spec: &SweepSpec, kind: BoundaryKind) -> Result<Vec<f64>, SweepError> {
    spec.validate()?;
    if spec.axes.len() != 1 {
        return Err(SweepError::AxisCount(spec.axes.len()));
    }
    let axis = &spec.axes[0];
    let eval = |v: f64| -> Result<f64, SweepError> {
        let (s, _) = resolve(&apply(spec, &[v]))?;
        Ok(kind.indicator(&s))
    };
    let xs: Vec<f64> = (0..axis.count).map(|i| axis.value(i)).collect();
    let gs: Vec<f64> = xs.par_iter().map(|&x| eval(x)).collect::<Result<_, _>>()?;
    let tol = 1e-10 * (axis.max - axis.min).abs();
    // indicator values at rounding level count as zeros
    let scale = gs.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let zero = |g: f64| g.abs() <= NUMERIC_ZERO * scale;
    let mut out = Vec::new();
    for i in 0..xs.len() {
        if zero(gs[i]) {
            out.push(xs[i]);
            continue;
        }
        if i + 1 < xs.len() && !zero(gs[i + 1]) && gs[i].signum() != gs[i + 1].signum() {
            let (mut a, mut b) = (xs[i], xs[i + 1]);
            let sa = gs[i].signum();
            while b - a > tol {
                let m = 0.5 * (a + b);
                let gm = eval(m)?;
                if gm == 0.0 {
                    a = m;
                    b = m;
                } else if gm.signum() == sa {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elasticity::SurfaceStressSpec;
    use crate::geometry::DEFAULT_CLASSIFY_TOL;
    use std::f64::consts::FRAC_PI_4;

    fn geometric(axes: Vec<SweepAxis>, base: PrincipalCurvatureState<f64>) -> SweepSpec {
        SweepSpec {
            axes,
            base: SweepBase::Geometric(base),
            length: 30.0,
            width: 0.5,
            clearance: None,
            classify_tol: DEFAULT_CLASSIFY_TOL,
        }
    }

    fn kappa2_scan(count: usize) -> SweepSpec {
        geometric(
            vec![SweepAxis::new(SweepParam::Kappa2, -1.0, 1.0, count)],
            PrincipalCurvatureState::new(1.0, 0.0, FRAC_PI_4),
        )
    }

    #[test]
    fn kappa2_scan_visits_the_spectrum_in_order() {
        let table = run_sweep(&kappa2_scan(21)).unwrap();
        let mut seq: Vec<MorphologyClass> = table.records.iter().map(|r| r.class).collect();
        seq.dedup();
        assert_eq!(
            seq,
            vec![
                MorphologyClass::PurelyTwisted,
                MorphologyClass::GeneralHelixSaddle,
                MorphologyClass::CylindricalHelix,
                MorphologyClass::GeneralHelixConvex,
                MorphologyClass::Ring,
            ]
        );
    }

    #[test]
    fn single_point_sweep_equals_direct_classification() {
        let base = PrincipalCurvatureState::new(1.0, 0.3, 0.4);
        let spec = geometric(vec![SweepAxis::new(SweepParam::Kappa2, 0.3, 0.3, 1)], base);
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.records.len(), 1);
        assert_eq!(t.records[0].class, classify(&base, DEFAULT_CLASSIFY_TOL).class);
        assert_eq!(t.records[0].descriptors, descriptors(&base));
    }

    #[test]
    fn grid_order_is_row_major() {
        let spec = geometric(
            vec![
                SweepAxis::new(SweepParam::Kappa1, 0.5, 1.0, 2),
                SweepAxis::new(SweepParam::Phi, 0.0, 1.0, 3),
            ],
            PrincipalCurvatureState::new(1.0, 0.0, 0.0),
        );
        let t = run_sweep(&spec).unwrap();
        let idx: Vec<Vec<usize>> = t.records.iter().map(|r| r.index.clone()).collect();
        assert_eq!(idx, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![1, 2]]);
        assert_eq!(t.records[4].values, vec![1.0, 0.5]);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = kappa2_scan(1);
        assert!(matches!(s.validate(), Err(SweepError::BadAxis { .. })));
        s.axes = vec![];
        assert!(matches!(s.validate(), Err(SweepError::AxisCount(0))));
        s.axes = vec![SweepAxis::new(SweepParam::F1Minus, 0.0, 1.0, 3)];
        assert!(matches!(s.validate(), Err(SweepError::WrongMode(_))));
        s.axes = vec![
            SweepAxis::new(SweepParam::Phi, 0.0, 1.0, 3),
            SweepAxis::new(SweepParam::Phi, 0.0, 1.0, 3),
        ];
        assert!(matches!(s.validate(), Err(SweepError::DuplicateAxis(_))));
    }

    #[test]
    fn classes_are_stable_under_refinement_away_from_boundaries() {
        let coarse = run_sweep(&kappa2_scan(11)).unwrap();
        let fine = run_sweep(&kappa2_scan(41)).unwrap();
        for r in &coarse.records {
            let v = r.values[0];
            // boundaries sit at -1, 0, 1; within two coarse cells the class may change
            if [-1.0f64, 0.0, 1.0].iter().all(|b| (v - b).abs() > 2.0 * 0.2 - 1e-12) {
                let f = fine.records.iter().find(|f| (f.values[0] - v).abs() < 1e-12).unwrap();
                assert_eq!(f.class, r.class);
            }
        }
    }

    #[test]
    fn twist_and_ring_boundaries() {
        let spec = kappa2_scan(16);
        let twist = find_boundary(&spec, BoundaryKind::Twist).unwrap();
        assert_eq!(twist.len(), 1);
        assert!((twist[0] + 1.0).abs() < 1e-9, "{twist:?}");
        let ring = find_boundary(&spec, BoundaryKind::Ring).unwrap();
        assert_eq!(ring.len(), 1);
        assert!((ring[0] - 1.0).abs() < 1e-9, "{ring:?}");
        let cyl = find_boundary(&spec, BoundaryKind::Cylinder).unwrap();
        assert!(cyl.len() == 1 && cyl[0].abs() < 1e-9, "{cyl:?}");
    }

    #[test]
    fn interior_boundary_is_bisected() {
        let spec = geometric(
            vec![SweepAxis::new(SweepParam::Kappa2, -2.0, 0.5, 8)],
            PrincipalCurvatureState::new(1.0, 0.0, 0.7),
        );
        let (s, c) = 0.7f64.sin_cos();
        let expect = -c * c / (s * s);
        let b = find_boundary(&spec, BoundaryKind::Twist).unwrap();
        assert_eq!(b.len(), 1);
        assert!((b[0] - expect).abs() < 1e-9 * 2.5);
    }

    #[test]
    fn mechanical_ring_boundary_at_equal_stresses() {
        let spec = SweepSpec {
            axes: vec![SweepAxis::new(SweepParam::StressRatioMinus, 0.3, 1.7, 9)],
            base: SweepBase::Mechanical(MechanicalSetup {
                section: SectionSpec::Homogeneous {
                    thickness: 1e-3,
                    youngs_modulus: 1e6,
                    poisson_ratio: 0.3,
                },
                f_minus: SurfaceStressSpec::new(1.0, 0.5, 0.5),
                f_plus: SurfaceStressSpec::zero(),
                cut_angle: 0.0,
            }),
            length: 1.0,
            width: 0.01,
            clearance: None,
            classify_tol: DEFAULT_CLASSIFY_TOL,
        };
        let b = find_boundary(&spec, BoundaryKind::Ring).unwrap();
        assert_eq!(b.len(), 1);
        assert!((b[0] - 1.0).abs() < 1e-9 * 1.4, "{b:?}");
    }

    #[test]
    fn width_sweep_closes_into_tubule() {
        let spec = geometric(
            vec![SweepAxis::new(SweepParam::Width, 1.0, 2.4, 8)],
            PrincipalCurvatureState::new(1.0, 0.0, 0.3),
        );
        let t = run_sweep(&spec).unwrap();
        let flags: Vec<bool> = t.records.iter().map(|r| r.tubule.unwrap()).collect();
        let first = flags.iter().position(|&f| f).expect("tubule reached");
        assert!(first > 0);
        assert!(flags[first..].iter().all(|&f| f), "{flags:?}");
        let d = descriptors(&PrincipalCurvatureState::new(1.0f64, 0.0, 0.3));
        let w_star = d.pitch * d.helix_angle.cos();
        assert!(t.records[first - 1].values[0] < w_star + 0.05);
        assert!(t.records[first].values[0] > w_star - 0.25);
    }
}
