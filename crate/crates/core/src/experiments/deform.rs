use crate::error::{Error, Result};
use crate::lattice::PeriodicField;
use crate::operators::BandedPeriodicOperator;
use crate::potential::Morse;
use crate::stability::bordered::{cyclic_offset, BorderedBand};
use crate::stability::{coercivity_constant, is_coercive, EigenOptions, OperatorFactory};

use super::config::{ExperimentConfig, Scenario};
use super::forces::external_force;
use super::table::{Cell, ResultTable};

/// Solution of `K u = f` on the mean-zero subspace.
#[derive(Debug, Clone)]
pub struct MeanZeroSolution {
    pub u: PeriodicField<f64>,
    /// Mean removed from `f` before solving.
    pub removed_mean: f64,
    /// Border multiplier `μ` of `K u + μ 1 = f − mean(f)`, `Σ u = 0`.
    pub multiplier: f64,
}

/// Solves the bordered system `K u + μ 1 = P f`, `Σ u = 0`, which is the
/// Galerkin form `P K u = P f` with `P` the mean-removing projection.
pub fn solve_mean_zero(op: &BandedPeriodicOperator<f64>, f: &PeriodicField<f64>) -> Result<MeanZeroSolution> {
    if op.config() != f.config() {
        return Err(Error::ConfigMismatch);
    }
    let n = op.config().len();
    let b = op.bandwidth() as i64;
    let removed_mean = f.mean();
    let rhs = f.without_mean();
    let factor = BorderedBand::from_cyclic(n, op.bandwidth().max(1), |i, j| {
        let off = cyclic_offset(i, j, n);
        if off.abs() <= b {
            op.coefficient(i, off)
        } else {
            0.0
        }
    })?
    .factor()?;
    let (u, multiplier) = factor.solve(rhs.values(), 0.0)?;
    Ok(MeanZeroSolution {
        u: PeriodicField::from_values(*op.config(), u)?,
        removed_mean,
        multiplier,
    })
}

/// Linearized response to the configured external force for `N = 1, 2, 3`.
///
/// Columns: `ell, x, u_N1, u_N2, u_N3, f_ext`.
pub fn solve_deformation(cfg: &ExperimentConfig) -> Result<(Vec<PeriodicField<f64>>, ResultTable)> {
    if cfg.scenario != Scenario::Deform {
        return Err(Error::InvalidConfig("solve_deformation needs the deform scenario".into()));
    }
    cfg.validate()?;
    let base = cfg.chain()?;
    let potential = Morse::new(cfg.potential);
    let params = cfg.force_params(&base);
    let mut table = ResultTable::new(["ell", "x", "u_N1", "u_N2", "u_N3", "f_ext"]);
    for (k, v) in cfg.echo() {
        table.set_meta(k, v);
    }
    table.set_meta("force", cfg.force.name());
    table.set_meta("amplitude_scale", format!("{:?}", params.amplitude_scale));
    table.set_meta("mu", format!("{:?}", params.mu));
    table.set_meta("sigma", format!("{:?}", params.sigma));

    let force = external_force(cfg.force, &params, &base)?;
    let mut solutions = Vec::with_capacity(3);
    for n in 1..=3 {
        let chain = base.with_range(n)?;
        let factory = OperatorFactory::new(chain, cfg.model(), &potential)?;
        let op = factory.build(1.0)?;
        if !is_coercive(&op)? {
            let c_min = coercivity_constant(&op, &EigenOptions::default())
                .map(|e| e.value)
                .unwrap_or(f64::NAN);
            return Err(Error::NotCoerciveAtStart { c_min });
        }
        let f = PeriodicField::from_values(chain, force.values().to_vec())?;
        let sol = solve_mean_zero(&op, &f)?;
        table.set_meta("removed_mean", format!("{:?}", sol.removed_mean));
        table.set_meta(format!("multiplier_N{n}"), format!("{:?}", sol.multiplier));
        solutions.push(PeriodicField::from_values(base, sol.u.into_values())?);
    }
    for ell in base.sites() {
        let x = base.position::<f64>(ell);
        table.push_row(vec![
            Cell::Int(ell),
            x.into(),
            solutions[0].at(ell).into(),
            solutions[1].at(ell).into(),
            solutions[2].at(ell).into(),
            force.at(ell).into(),
        ])?;
    }
    Ok((solutions, table))
}
