//! Coercivity in the `H¹` semi-norm, critical-strain sweeps, the `N = 2`
//! bilinear-form decomposition and blend-size scaling studies.

pub mod bordered;
mod coercivity;
mod decomposition;
mod scaling;
mod sweep;

pub use coercivity::{
    coercivity_constant, coercivity_constant_dense, is_coercive, Eigenpair, EigenOptions, DENSE_MAX_HALF_ATOMS,
};
pub use decomposition::{decompose_bilinear_n2, DecompositionReport};
pub use scaling::{scaling_study, BlendRule};
pub use sweep::{coarse_profile, critical_strain, monotonicity_violations, SweepOptions, SweepOutcome};

use crate::blending::{default_half_width, sample_beta, BlendFamily, BlendingProfile, Layout};
use crate::error::Result;
use crate::lattice::{ChainConfig, PeriodicField};
use crate::operators::{assemble_linear, BandedPeriodicOperator, LinearModel};
use crate::potential::PairPotential;
use crate::scalar::Scalar;

/// Which linearized operator a study runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Atomistic,
    Continuum,
    /// B-QCF with a blend of `width` lattice spacings on each side of the
    /// atomistic plateau; `one_sided` makes the continuum-to-atomistic side sharp.
    Blended { family: BlendFamily, width: usize, one_sided: bool },
}

impl Model {
    pub fn blended(family: BlendFamily, width: usize) -> Self {
        Model::Blended { family, width, one_sided: false }
    }

    /// Tag written to the `family` column of result tables.
    pub fn tag(&self) -> &'static str {
        match self {
            Model::Atomistic => "atomistic",
            Model::Continuum => "continuum",
            Model::Blended { family, .. } => family.name(),
        }
    }

    pub fn width(&self) -> usize {
        match self {
            Model::Blended { width, .. } => *width,
            _ => 0,
        }
    }

    pub fn beta<T: Scalar>(&self, config: &ChainConfig) -> Result<Option<PeriodicField<T>>> {
        let Model::Blended { family, width, one_sided } = *self else {
            return Ok(None);
        };
        let half = default_half_width(config);
        let layout = if one_sided {
            Layout::one_sided(*config, half, width)?
        } else {
            Layout::symmetric(*config, half, width)?
        };
        sample_beta(&BlendingProfile::new(family, layout), config).map(Some)
    }
}

/// Assembles the linearized operator of one [`Model`] at any stretch,
/// sampling `β` once.
pub struct OperatorFactory<'p, T, P: ?Sized> {
    config: ChainConfig,
    model: Model,
    beta: Option<PeriodicField<T>>,
    potential: &'p P,
}

impl<'p, T: Scalar, P: PairPotential<T> + ?Sized> OperatorFactory<'p, T, P> {
    pub fn new(config: ChainConfig, model: Model, potential: &'p P) -> Result<Self> {
        Ok(Self {
            config,
            model,
            beta: model.beta(&config)?,
            potential,
        })
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn beta(&self) -> Option<&PeriodicField<T>> {
        self.beta.as_ref()
    }

    pub fn build(&self, gamma: T) -> Result<BandedPeriodicOperator<T>> {
        let linear = match (&self.model, &self.beta) {
            (Model::Atomistic, _) => LinearModel::Atomistic,
            (Model::Continuum, _) => LinearModel::Continuum,
            (Model::Blended { .. }, Some(beta)) => LinearModel::Blended(beta),
            (Model::Blended { .. }, None) => unreachable!("blended model always samples β"),
        };
        assemble_linear(linear, self.potential, &self.config, gamma)
    }
}

/// One coercivity evaluation with the configuration it was computed for.
#[derive(Debug, Clone, PartialEq)]
pub struct CoercivityReport<T> {
    pub half_atoms: usize,
    pub range: usize,
    pub family: &'static str,
    pub blend_width: usize,
    pub gamma: T,
    pub c_min: T,
    pub iterations: usize,
    pub residual: T,
}

impl<T: Scalar> CoercivityReport<T> {
    pub fn evaluate<P: PairPotential<T> + ?Sized>(
        factory: &OperatorFactory<'_, T, P>,
        gamma: T,
        opts: &EigenOptions<T>,
    ) -> Result<Self> {
        let op = factory.build(gamma)?;
        let eig = coercivity_constant(&op, opts)?;
        Ok(Self {
            half_atoms: factory.config.half_atoms(),
            range: factory.config.range(),
            family: factory.model.tag(),
            blend_width: factory.model.width(),
            gamma,
            c_min: eig.value,
            iterations: eig.iterations,
            residual: eig.residual,
        })
    }
}
