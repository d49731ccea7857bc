//! Residual strain of layers that were stretched before bonding.

use super::{ElasticityError, Layer, ResidualStrain, RibbonSection, SymTensor2};
use crate::scalar::Real;

/// Largest principal pre-stretch treated without a warning.
pub const PRESTRETCH_WARN_LIMIT: f64 = 0.3;

/// A pre-stretched layer stays elastically stretched by its pre-stretch once
/// bonded: the in-plane residual equals the pre-stretch, and the thickness
/// residual is the plane-stress Poisson contraction `-nu/(1-nu) tr`.
pub fn laminate_prestretch_to_residual<T: Real>(
    layers: &[Layer<T>],
    prestretch: &[SymTensor2<T>],
) -> Result<Vec<ResidualStrain<T>>, ElasticityError> {
    if layers.len() != prestretch.len() {
        return Err(ElasticityError::InvalidSection(format!(
            "{} layers but {} pre-stretch entries",
            layers.len(),
            prestretch.len()
        )));
    }
    layers
        .iter()
        .zip(prestretch)
        .enumerate()
        .map(|(i, (layer, p))| {
            if !p.max_abs().is_finite() {
                return Err(ElasticityError::NonFinite);
            }
            let pr = p.principal();
            let peak = pr.first.abs().max(pr.second.abs());
            if peak > T::lit(PRESTRETCH_WARN_LIMIT) {
                log::warn!("layer {i}: pre-stretch {peak} is beyond the linear range");
            }
            let nu = layer.poisson_ratio;
            Ok(ResidualStrain {
                in_plane: *p,
                zz: -nu / (T::one() - nu) * p.trace(),
            })
        })
        .collect()
}

/// Builds a laminate section with the residual strains of the given pre-stretches.
pub fn prestretched_section<T: Real>(
    layers: &[Layer<T>],
    prestretch: &[SymTensor2<T>],
) -> Result<RibbonSection<T>, ElasticityError> {
    let residual = laminate_prestretch_to_residual(layers, prestretch)?;
    RibbonSection::layered(
        layers
            .iter()
            .zip(residual)
            .map(|(l, r)| l.with_residual(r))
            .collect(),
    )
}
