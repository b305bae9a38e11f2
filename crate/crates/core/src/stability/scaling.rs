use rayon::prelude::*;

use crate::blending::BlendFamily;
use crate::error::{Error, Result};
use crate::lattice::ChainConfig;
use crate::potential::PairPotential;
use crate::scalar::Scalar;

use super::{CoercivityReport, EigenOptions, Model, OperatorFactory};

/// How the blend width grows with the chain size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlendRule {
    /// `⌈M^{1/3}⌉`
    CubeRoot,
    /// `⌈M^{1/5}⌉`
    FifthRoot,
    Fixed(usize),
}

impl BlendRule {
    pub fn width(self, half_atoms: usize) -> usize {
        let ceil_root = |p: u32| (1..).find(|&l: &usize| l.pow(p) >= half_atoms).unwrap_or(1);
        match self {
            BlendRule::CubeRoot => ceil_root(3),
            BlendRule::FifthRoot => ceil_root(5),
            BlendRule::Fixed(l) => l,
        }
    }

    pub fn parse(s: &str, fixed: usize) -> Result<Self> {
        match s {
            "m13" | "cube" => Ok(BlendRule::CubeRoot),
            "m15" | "fifth" => Ok(BlendRule::FifthRoot),
            "fixed" => Ok(BlendRule::Fixed(fixed)),
            other => Err(Error::InvalidConfig(format!("unknown blend-size rule `{other}`"))),
        }
    }
}

/// Coercivity of the symmetric blended operator for each `M` in `half_atoms`
/// with the width set by `rule`. Points are evaluated in parallel.
pub fn scaling_study<T, P>(
    family: BlendFamily,
    rule: BlendRule,
    half_atoms: &[usize],
    potential: &P,
    range: usize,
    gamma: T,
    opts: &EigenOptions<T>,
) -> Result<Vec<CoercivityReport<T>>>
where
    T: Scalar,
    P: PairPotential<T> + ?Sized,
{
    if half_atoms.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("chain sizes must be strictly ascending".into()));
    }
    half_atoms
        .par_iter()
        .map(|&m| {
            let cfg = ChainConfig::new(m, range)?;
            let factory = OperatorFactory::new(cfg, Model::blended(family, rule.width(m)), potential)?;
            CoercivityReport::evaluate(&factory, gamma, opts)
        })
        .collect()
}
