use crate::blending::pair_weight;
use crate::error::{Error, Result};
use crate::lattice::{ChainConfig, PeriodicField};
use crate::potential::PairPotential;
use crate::scalar::Scalar;

use super::banded::BandedPeriodicOperator;

/// Which linearized force to assemble.
#[derive(Debug, Clone, Copy)]
pub enum LinearModel<'a, T> {
    /// `−Σ_k φ_xx(kγ) (u_{ℓ+k} − 2u_ℓ + u_{ℓ−k}) / a²`.
    Atomistic,
    /// `−(Σ_k k² φ_xx(kγ)) u''_ℓ`.
    Continuum,
    /// Per neighbour `k`, the atomistic `k`-stencil weighted by the pair weight of `β`
    /// plus the remaining fraction of `k²` times the nearest-neighbour stencil.
    Blended(&'a PeriodicField<T>),
}

/// Per-neighbour force operators `F_k`, `k = 1..=N`, linearized about the uniform
/// stretch `y = γx` (coefficients `φ_xx(kγ)`).
pub fn assemble_components<T: Scalar, P: PairPotential<T> + ?Sized>(
    model: LinearModel<'_, T>,
    potential: &P,
    config: &ChainConfig,
    gamma: T,
) -> Result<Vec<BandedPeriodicOperator<T>>> {
    if !(gamma > T::zero()) {
        return Err(Error::InvalidParameter(format!("stretch must be positive, got {gamma}")));
    }
    if let LinearModel::Blended(beta) = model {
        if beta.config() != config {
            return Err(Error::ConfigMismatch);
        }
    }
    let n = config.len();
    let range = config.range();
    let a = config.spacing::<T>();
    let inv_a2 = T::one() / (a * a);

    (1..=range)
        .map(|k| {
            let kk = T::from_count(k);
            let k2 = kk * kk;
            let stiff = potential.phi_xx(kk * gamma) * inv_a2;
            let k = k as i64;
            let mut op = BandedPeriodicOperator::zeros(*config, range)?;
            for slot in 0..n {
                let w = match model {
                    LinearModel::Atomistic => T::one(),
                    LinearModel::Continuum => T::zero(),
                    LinearModel::Blended(beta) => pair_weight(beta, config.site(slot), k),
                };
                let local = -(w * stiff);
                op.add_difference(slot, k, local);
                op.add_difference(slot, -k, local);
                let nearest = -((T::one() - w) * k2 * stiff);
                op.add_difference(slot, 1, nearest);
                op.add_difference(slot, -1, nearest);
            }
            Ok(op)
        })
        .collect()
}

/// Full linearized force operator, the sum of [`assemble_components`].
pub fn assemble_linear<T: Scalar, P: PairPotential<T> + ?Sized>(
    model: LinearModel<'_, T>,
    potential: &P,
    config: &ChainConfig,
    gamma: T,
) -> Result<BandedPeriodicOperator<T>> {
    let parts = assemble_components(model, potential, config, gamma)?;
    let mut total = BandedPeriodicOperator::zeros(*config, config.range())?;
    for part in &parts {
        total = total.add(part)?;
    }
    Ok(total)
}
