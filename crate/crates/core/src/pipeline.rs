//! Mechanical setup of an experiment: a sheet-level description of the
//! section and loads, cut into a ribbon at some angle.

use serde::{Deserialize, Serialize};

use crate::elasticity::{
    prestretched_section, solve_single_surface, solve_stationary_numeric, solve_two_surface, ElasticityError,
    EquilibriumSolution, Layer, RibbonSection, SurfaceStressSpec, SymTensor2,
};

/// Principal pre-stretch of a layer (engineering strains) and the angle of its first axis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Prestretch {
    pub first: f64,
    pub second: f64,
    pub orientation: f64,
}

impl Prestretch {
    pub fn tensor_at(&self, cut_angle: f64) -> SymTensor2<f64> {
        SymTensor2::from_principal(self.first, self.second, self.orientation - cut_angle)
    }

    pub fn is_zero(&self) -> bool {
        self.first == 0.0 && self.second == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ply {
    pub thickness: f64,
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub prestretch: Prestretch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SectionSpec {
    Homogeneous {
        thickness: f64,
        youngs_modulus: f64,
        poisson_ratio: f64,
    },
    /// Listed from the bottom face upward.
    Laminate(Vec<Ply>),
}

/// Which solver produced an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverRoute {
    SingleSurface,
    TwoSurface,
    Numeric,
}

/// Orientations of loads and pre-stretch are given in the sheet frame;
/// `cut_angle` is the angle of the ribbon's length axis in that frame, with
/// the same sign convention, so a sheet angle `a` becomes `a - cut_angle`
/// relative to the ribbon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MechanicalSetup {
    pub section: SectionSpec,
    pub f_minus: SurfaceStressSpec<f64>,
    pub f_plus: SurfaceStressSpec<f64>,
    pub cut_angle: f64,
}

impl MechanicalSetup {
    pub fn thickness(&self) -> f64 {
        match &self.section {
            SectionSpec::Homogeneous { thickness, .. } => *thickness,
            SectionSpec::Laminate(plies) => plies.iter().map(|p| p.thickness).sum(),
        }
    }

    /// Section in ribbon axes, with residual strains from any pre-stretch.
    pub fn ribbon_section(&self) -> Result<RibbonSection<f64>, ElasticityError> {
        match &self.section {
            SectionSpec::Homogeneous {
                thickness,
                youngs_modulus,
                poisson_ratio,
            } => {
                let s = RibbonSection::homogeneous(*thickness, *youngs_modulus, *poisson_ratio);
                s.validate()?;
                Ok(s)
            }
            SectionSpec::Laminate(plies) => {
                let layers: Vec<Layer<f64>> = plies
                    .iter()
                    .map(|p| Layer::new(p.thickness, p.youngs_modulus, p.poisson_ratio))
                    .collect();
                let pre: Vec<SymTensor2<f64>> = plies.iter().map(|p| p.prestretch.tensor_at(self.cut_angle)).collect();
                prestretched_section(&layers, &pre)
            }
        }
    }

    /// Face stresses in ribbon axes: `(f_minus, f_plus)`.
    pub fn ribbon_loads(&self) -> (SurfaceStressSpec<f64>, SurfaceStressSpec<f64>) {
        (self.f_minus.rotated(-self.cut_angle), self.f_plus.rotated(-self.cut_angle))
    }

    /// Closed forms for homogeneous sections, the numeric solver otherwise.
    pub fn solve(&self) -> Result<(EquilibriumSolution<f64>, SolverRoute), ElasticityError> {
        let section = self.ribbon_section()?;
        let (fm, fp) = self.ribbon_loads();
        if section.is_homogeneous() {
            if fp.f1 == 0.0 && fp.f2 == 0.0 {
                Ok((solve_single_surface(&section, &fm)?, SolverRoute::SingleSurface))
            } else {
                Ok((solve_two_surface(&section, &fp, &fm)?.solution, SolverRoute::TwoSurface))
            }
        } else {
            Ok((solve_stationary_numeric(&section, &fp, &fm)?, SolverRoute::Numeric))
        }
    }

    /// Always the numeric solver, for cross-checking the closed forms.
    pub fn solve_numeric(&self) -> Result<EquilibriumSolution<f64>, ElasticityError> {
        let section = self.ribbon_section()?;
        let (fm, fp) = self.ribbon_loads();
        solve_stationary_numeric(&section, &fp, &fm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{classify, MorphologyClass, DEFAULT_CLASSIFY_TOL};
    use std::f64::consts::FRAC_PI_4;

    fn latex(pre: Prestretch) -> Ply {
        Ply {
            thickness: 0.048e-2,
            youngs_modulus: 1.4e6,
            poisson_ratio: 0.49,
            prestretch: pre,
        }
    }

    fn tape() -> Ply {
        Ply {
            thickness: 0.1e-2,
            youngs_modulus: 10.3e6,
            poisson_ratio: 0.37,
            prestretch: Prestretch::default(),
        }
    }

    #[test]
    fn cut_angle_rotates_loads() {
        let m = MechanicalSetup {
            section: SectionSpec::Homogeneous {
                thickness: 1.0,
                youngs_modulus: 1.0,
                poisson_ratio: 0.3,
            },
            f_minus: SurfaceStressSpec::new(1.0, 0.0, 0.5),
            f_plus: SurfaceStressSpec::zero(),
            cut_angle: 0.2,
        };
        let (sol, route) = m.solve().unwrap();
        assert_eq!(route, SolverRoute::SingleSurface);
        assert!((sol.state.phi - 0.3).abs() < 1e-15);
    }

    #[test]
    fn crossed_prestretch_on_both_faces_twists() {
        let p = 0.1;
        let m = MechanicalSetup {
            section: SectionSpec::Laminate(vec![
                latex(Prestretch { first: p, second: 0.0, orientation: 0.0 }),
                tape(),
                latex(Prestretch { first: p, second: 0.0, orientation: std::f64::consts::FRAC_PI_2 }),
            ]),
            f_minus: SurfaceStressSpec::zero(),
            f_plus: SurfaceStressSpec::zero(),
            cut_angle: FRAC_PI_4,
        };
        let (sol, route) = m.solve().unwrap();
        assert_eq!(route, SolverRoute::Numeric);
        let inv = sol.curvature_state().invariants();
        assert!(inv.beta.abs() <= 1e-10 * inv.alpha, "{inv:?}");
        let st = sol.state;
        assert!((st.kappa1 + st.kappa2).abs() <= 1e-8 * st.kappa1.abs());
        let c = classify(&sol.curvature_state(), DEFAULT_CLASSIFY_TOL);
        assert_eq!(c.class, MorphologyClass::PurelyTwisted);
    }
}
