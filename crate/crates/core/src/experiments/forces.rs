use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::lattice::{ChainConfig, PeriodicField};

use super::config::{ForceKind, ForceParams};

/// Sine: `0.01 s sin(−π x)`. Gaussian: `0.01 s exp(−(x − μ)² / 2σ²)`.
pub fn external_force(kind: ForceKind, params: &ForceParams, config: &ChainConfig) -> Result<PeriodicField<f64>> {
    let s = params.amplitude_scale;
    match kind {
        ForceKind::Sine => Ok(PeriodicField::from_fn(*config, |_, x: f64| 0.01 * s * (-PI * x).sin())),
        ForceKind::Gaussian => {
            if !(params.sigma > 0.0) {
                return Err(Error::InvalidParameter(format!("sigma must be positive, got {}", params.sigma)));
            }
            let two_var = 2.0 * params.sigma * params.sigma;
            Ok(PeriodicField::from_fn(*config, |_, x: f64| {
                0.01 * s * (-(x - params.mu).powi(2) / two_var).exp()
            }))
        }
        ForceKind::None => Ok(PeriodicField::zeros(*config)),
    }
}
