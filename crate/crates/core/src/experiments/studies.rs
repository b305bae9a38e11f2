use rayon::prelude::*;

use crate::blending::BlendFamily;
use crate::error::{Error, Result};
use crate::lattice::{ChainConfig, PeriodicField};
use crate::operators::{assemble_linear, energy_linearized, EnergyModel, LinearModel};
use crate::potential::{Morse, PairPotential};
use crate::stability::{
    critical_strain, scaling_study, CoercivityReport, EigenOptions, Model, OperatorFactory, SweepOptions,
};

use super::config::{ExperimentConfig, Scenario};
use super::table::{Cell, ResultTable};

/// Blend sizes of the critical-strain grid.
pub const TABLE_WIDTHS: [usize; 8] = [1, 2, 3, 4, 5, 6, 7, 10];
pub const TABLE_FAMILIES: [BlendFamily; 3] = [BlendFamily::Linear, BlendFamily::Cubic, BlendFamily::Quintic];

fn sweep_options(cfg: &ExperimentConfig) -> SweepOptions<f64> {
    SweepOptions {
        dgamma: cfg.dgamma,
        gamma_max: cfg.gamma_max,
        scan_exact: cfg.scan_exact,
        ..SweepOptions::default()
    }
}

fn header(cfg: &ExperimentConfig, columns: &[&str]) -> ResultTable {
    let mut t = ResultTable::new(columns.iter().copied());
    for (k, v) in cfg.echo() {
        t.set_meta(k, v);
    }
    t
}

/// Critical strain of one model. A model that is already unstable at `γ = 1`
/// is reported with `γ = 1` and status `not_coercive_at_start`.
pub fn critical_strain_of(
    config: ChainConfig,
    model: Model,
    potential: &Morse<f64>,
    opts: &SweepOptions<f64>,
) -> Result<(f64, usize, &'static str)> {
    let f = OperatorFactory::new(config, model, potential)?;
    match critical_strain(|g| f.build(g), opts) {
        Ok(out) => Ok((out.gamma, out.evaluations, "ok")),
        Err(Error::NotCoerciveAtStart { .. }) => Ok((1.0, 1, "not_coercive_at_start")),
        Err(e) => Err(e),
    }
}

const STRAIN_COLUMNS: [&str; 6] = ["family", "L", "gamma_crit", "abs_error", "evaluations", "status"];

/// Single critical strain for the configured model.
pub fn run_critical_strain(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let chain = cfg.chain()?;
    let potential = Morse::new(cfg.potential);
    let opts = sweep_options(cfg);
    let model = cfg.model();
    let (own, atom) = rayon::join(
        || critical_strain_of(chain, model, &potential, &opts),
        || critical_strain_of(chain, Model::Atomistic, &potential, &opts),
    );
    let (g, evals, status) = own?;
    let (ga, _, _) = atom?;
    let mut t = header(cfg, &STRAIN_COLUMNS);
    t.set_meta("gamma_atomistic", format!("{ga:?}"));
    t.push_row(vec![
        model.tag().into(),
        model.width().into(),
        g.into(),
        (g - ga).abs().into(),
        evals.into(),
        status.into(),
    ])?;
    Ok(t)
}

/// Critical strains over blend sizes `{1, …, 7, 10}` for the linear, cubic
/// and quintic families, plus the atomistic row (`L = 0`). `abs_error` is
/// `|γ^a − γ|`.
pub fn run_critical_strain_table(cfg: &ExperimentConfig) -> Result<ResultTable> {
    if cfg.scenario != Scenario::CriticalStrain {
        return Err(Error::InvalidConfig("critical-strain table needs the critical-strain scenario".into()));
    }
    cfg.validate()?;
    let chain = cfg.chain()?;
    let potential = Morse::new(cfg.potential);
    let opts = sweep_options(cfg);
    let mut jobs = vec![Model::Atomistic];
    for &w in &TABLE_WIDTHS {
        for &family in &TABLE_FAMILIES {
            jobs.push(Model::Blended { family, width: w, one_sided: cfg.one_sided });
        }
    }
    let results: Vec<(Model, (f64, usize, &'static str))> = jobs
        .par_iter()
        .map(|&m| critical_strain_of(chain, m, &potential, &opts).map(|r| (m, r)))
        .collect::<Result<_>>()?;
    let ga = results[0].1 .0;
    let mut t = header(cfg, &STRAIN_COLUMNS);
    t.set_meta("gamma_atomistic", format!("{ga:?}"));
    for (m, (g, evals, status)) in results {
        t.push_row(vec![
            m.tag().into(),
            m.width().into(),
            g.into(),
            (g - ga).abs().into(),
            evals.into(),
            status.into(),
        ])?;
    }
    Ok(t)
}

const COERCIVITY_COLUMNS: [&str; 8] = ["M", "N", "family", "L", "gamma", "c_min", "iterations", "residual"];

fn report_row(r: &CoercivityReport<f64>) -> Vec<Cell> {
    vec![
        r.half_atoms.into(),
        r.range.into(),
        r.family.into(),
        r.blend_width.into(),
        r.gamma.into(),
        r.c_min.into(),
        r.iterations.into(),
        r.residual.into(),
    ]
}

pub fn run_coercivity(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let potential = Morse::new(cfg.potential);
    let factory = OperatorFactory::new(cfg.chain()?, cfg.model(), &potential)?;
    let report = CoercivityReport::evaluate(&factory, cfg.gamma, &EigenOptions::default())?;
    let mut t = header(cfg, &COERCIVITY_COLUMNS);
    t.push_row(report_row(&report))?;
    Ok(t)
}

pub fn run_scaling(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let family = cfg
        .choice
        .family()
        .ok_or_else(|| Error::InvalidConfig("scaling needs a blending family".into()))?;
    let potential = Morse::new(cfg.potential);
    let reports = scaling_study(
        family,
        cfg.rule,
        &cfg.sizes,
        &potential,
        cfg.range,
        cfg.gamma,
        &EigenOptions::default(),
    )?;
    let mut t = header(cfg, &COERCIVITY_COLUMNS);
    t.set_meta("rule", format!("{:?}", cfg.rule));
    for r in &reports {
        t.push_row(report_row(r))?;
    }
    Ok(t)
}

/// Least-squares slope of `log(err)` against `log(a)`, i.e. the observed order.
pub fn fit_order(half_atoms: &[usize], errors: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = half_atoms
        .iter()
        .zip(errors)
        .map(|(&m, &e)| ((1.0 / m as f64).ln(), e.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Force and energy consistency errors between the linearized atomistic and
/// continuum models for `u = sin(πx)` at `γ = 1`.
///
/// Columns `M, N, force_l2, force_linf, energy`; fitted orders go to metadata.
pub fn run_consistency_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let potential = Morse::new(cfg.potential);
    let mut t = ResultTable::new(["M", "N", "force_l2", "force_linf", "energy"]);
    for (k, v) in cfg.echo() {
        t.set_meta(k, v);
    }
    t.set_meta("displacement", "sin(pi x)");
    let rows: Vec<[f64; 3]> = cfg
        .sizes
        .par_iter()
        .map(|&m| consistency_errors(ChainConfig::new(m, cfg.range)?, &potential))
        .collect::<Result<_>>()?;
    for (&m, e) in cfg.sizes.iter().zip(&rows) {
        t.push_row(vec![m.into(), cfg.range.into(), e[0].into(), e[1].into(), e[2].into()])?;
    }
    if cfg.sizes.len() >= 2 {
        for (i, name) in ["force_l2", "force_linf", "energy"].iter().enumerate() {
            let errs: Vec<f64> = rows.iter().map(|r| r[i]).collect();
            t.set_meta(format!("order_{name}"), format!("{:?}", fit_order(&cfg.sizes, &errs)));
        }
    }
    Ok(t)
}

/// `[‖F^c u − F^a u‖_ℓ2, ‖F^c u − F^a u‖_∞, |E^c(u) − E^a(u)|]`.
pub fn consistency_errors<P: PairPotential<f64>>(config: ChainConfig, potential: &P) -> Result<[f64; 3]> {
    use std::f64::consts::PI;
    let u = PeriodicField::from_fn(config, |_, x: f64| (PI * x).sin());
    let fa = assemble_linear(LinearModel::Atomistic, potential, &config, 1.0)?.apply(&u)?;
    let fc = assemble_linear(LinearModel::Continuum, potential, &config, 1.0)?.apply(&u)?;
    let d = &fc - &fa;
    let ea = energy_linearized(&u, potential, EnergyModel::Atomistic);
    let ec = energy_linearized(&u, potential, EnergyModel::Continuum);
    Ok([d.l2_norm(), d.linf_norm(), (ec - ea).abs()])
}
