//! Oracle suites run by `ribbon verify`: each checks an invariant over a
//! seeded corpus of random cases and reports its worst residual.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elasticity::{
    solve_single_surface, solve_stationary_numeric, solve_two_surface, EquilibriumSolution, RibbonSection,
    StrainState, SurfaceStressSpec,
};
use crate::geometry::{
    centerline_point, descriptors, frame_at, integrate_frames_numeric, FrameState, PrincipalCurvatureState,
};

/// Arclength and step of the RK4 oracle.
pub const ODE_LENGTH: f64 = 20.0;
pub const ODE_STEP: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub suite: String,
    pub invariant: String,
    pub cases: usize,
    pub max_residual: f64,
    /// Case that produced the largest residual.
    pub worst_case: String,
}

impl InvariantCheck {
    fn new(suite: &str, invariant: &str) -> Self {
        Self {
            suite: suite.into(),
            invariant: invariant.into(),
            cases: 0,
            max_residual: 0.0,
            worst_case: String::new(),
        }
    }

    fn record(&mut self, residual: f64, case: impl FnOnce() -> String) {
        self.cases += 1;
        if !(residual <= self.max_residual) {
            self.max_residual = residual;
            self.worst_case = case();
        }
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.max_residual <= tol
    }

    pub fn line(&self, tol: f64) -> String {
        format!(
            "{} {}/{} cases={} max_residual={:e} tol={:e}{}",
            if self.passed(tol) { "ok  " } else { "FAIL" },
            self.suite,
            self.invariant,
            self.cases,
            self.max_residual,
            tol,
            if self.passed(tol) {
                String::new()
            } else {
                format!(" worst: {}", self.worst_case)
            }
        )
    }
}

fn random_state(rng: &mut ChaCha8Rng, kmax: f64) -> PrincipalCurvatureState<f64> {
    PrincipalCurvatureState::new(
        rng.gen_range(-kmax..kmax),
        rng.gen_range(-kmax..kmax),
        rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
    )
}

/// Centerline identity, frame orthonormality and pitch periodicity.
pub fn identity_suite(seed: u64, cases: usize) -> Vec<InvariantCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut identity = InvariantCheck::new("identity", "alpha^2-beta^2-tau^2");
    let mut ortho = InvariantCheck::new("identity", "frame_orthonormality");
    let mut period = InvariantCheck::new("identity", "pitch_periodicity");
    for _ in 0..cases {
        let st = random_state(&mut rng, 10.0);
        let d = descriptors(&st);
        let s: f64 = rng.gen_range(0.0..ODE_LENGTH);
        identity.record(d.identity_residual(), || format!("{st:?}"));
        let f = frame_at(&st, s);
        let director = [
            f.r1.dot(f.r2).abs(),
            (f.r1.norm() - 1.0).abs(),
            (f.r2.norm() - 1.0).abs(),
            f.r1.dot(f.normal).abs(),
        ];
        let e = director.into_iter().fold(f.orthonormality_error(), f64::max);
        ortho.record(e, || format!("{st:?} s={s}"));
        if d.alpha > 0.0 {
            let gap = centerline_point(&st, s + d.turn_length()).distance(centerline_point(&st, s));
            period.record((gap - d.pitch).abs() / d.pitch.max(1.0), || format!("{st:?} s={s}"));
        }
    }
    vec![identity, ortho, period]
}

fn frame_deviation(a: &FrameState<f64>, b: &FrameState<f64>) -> f64 {
    [
        a.position.distance(b.position),
        a.tangent.distance(b.tangent),
        a.normal.distance(b.normal),
        a.binormal.distance(b.binormal),
        a.r1.distance(b.r1),
        a.r2.distance(b.r2),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// Closed-form frames and centerline against RK4 integration of the frame equations.
pub fn ode_suite(seed: u64, cases: usize) -> Vec<InvariantCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0de);
    let mut check = InvariantCheck::new("ode", "closed_form_vs_rk4");
    for _ in 0..cases {
        let st = random_state(&mut rng, 5.0);
        let frames = integrate_frames_numeric(&st, ODE_LENGTH, ODE_STEP).expect("valid step");
        let h = ODE_LENGTH / (frames.len() - 1) as f64;
        let dev = frames
            .iter()
            .enumerate()
            .map(|(i, f)| frame_deviation(f, &frame_at(&st, i as f64 * h)))
            .fold(0.0, f64::max);
        check.record(dev, || format!("{st:?}"));
    }
    vec![check]
}

/// Largest relative disagreement over the eight unknowns, with curvatures
/// scaled by the largest curvature and strains by the largest strain.
pub fn unknowns_deviation(a: &StrainState<f64>, b: &StrainState<f64>) -> f64 {
    let b = b.aligned_to(a.phi);
    let ks = a.kappa1.abs().max(a.kappa2.abs()).max(a.q.abs()).max(f64::MIN_POSITIVE);
    let ms = a.membrane().max_abs().max(a.eps_zz.abs()).max(f64::MIN_POSITIVE);
    [
        (a.kappa1 - b.kappa1).abs() / ks,
        (a.kappa2 - b.kappa2).abs() / ks,
        (a.q - b.q).abs() / ks,
        (a.eps_xx - b.eps_xx).abs() / ms,
        (a.eps_yy - b.eps_yy).abs() / ms,
        (a.eps_xy - b.eps_xy).abs() / ms,
        (a.eps_zz - b.eps_zz).abs() / ms,
        (a.phi - b.phi).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn random_section(rng: &mut ChaCha8Rng) -> RibbonSection<f64> {
    RibbonSection::homogeneous(rng.gen_range(0.1..2.0), rng.gen_range(0.5..5.0), rng.gen_range(0.0..0.45))
}

fn random_stress(rng: &mut ChaCha8Rng) -> SurfaceStressSpec<f64> {
    SurfaceStressSpec::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.5..1.5))
}

fn compare(
    agree: &mut InvariantCheck,
    grad: &mut InvariantCheck,
    exact: &EquilibriumSolution<f64>,
    num: &EquilibriumSolution<f64>,
    case: String,
) {
    agree.record(unknowns_deviation(&exact.state, &num.state), || case.clone());
    grad.record(num.gradient_norm.max(exact.gradient_norm), || case);
}

/// Numeric stationarity solver against the single- and two-surface closed forms.
pub fn elasticity_suite(seed: u64, cases: usize) -> Vec<InvariantCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xe1a);
    let mut agree1 = InvariantCheck::new("elasticity", "single_surface_numeric_vs_closed_form");
    let mut grad1 = InvariantCheck::new("elasticity", "single_surface_gradient_norm");
    let mut agree2 = InvariantCheck::new("elasticity", "two_surface_numeric_vs_closed_form");
    let mut grad2 = InvariantCheck::new("elasticity", "two_surface_gradient_norm");
    let zero = SurfaceStressSpec::zero();
    for _ in 0..cases {
        let sec = random_section(&mut rng);
        let fm = random_stress(&mut rng);
        let fp = random_stress(&mut rng);
        let case = format!("{sec:?} f_minus={fm:?}");
        match (solve_single_surface(&sec, &fm), solve_stationary_numeric(&sec, &zero, &fm)) {
            (Ok(e), Ok(n)) => compare(&mut agree1, &mut grad1, &e, &n, case),
            _ => agree1.record(f64::INFINITY, || format!("solver error: {case}")),
        }
        let case = format!("{sec:?} f_minus={fm:?} f_plus={fp:?}");
        match (solve_two_surface(&sec, &fp, &fm), solve_stationary_numeric(&sec, &fp, &fm)) {
            (Ok(e), Ok(n)) => compare(&mut agree2, &mut grad2, &e.solution, &n, case),
            _ => agree2.record(f64::INFINITY, || format!("solver error: {case}")),
        }
    }
    vec![agree1, grad1, agree2, grad2]
}

/// All suites; the ODE and elasticity suites use fewer cases than requested
/// (a tenth, at least one) since each case is a full integration or scan.
pub fn run_all(seed: u64, cases: usize) -> Vec<InvariantCheck> {
    let heavy = (cases / 10).max(1);
    let mut out = identity_suite(seed, cases);
    out.extend(ode_suite(seed, heavy));
    out.extend(elasticity_suite(seed, heavy));
    out
}
