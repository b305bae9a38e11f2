use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::stability::BlendRule;

use super::config::{ExperimentConfig, ForceKind, ForceParams, ModelChoice, Scenario};
use super::deform::solve_deformation;
use super::studies::{run_coercivity, run_consistency_sweep, run_critical_strain, run_critical_strain_table, run_scaling};
use super::table::ResultTable;

#[derive(Debug, Parser)]
#[command(name = "bqcf", version, about = "Blended force-based coupling experiments on a periodic 1D chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Largest uniform stretch at which the linearized operator stays coercive.
    CriticalStrain {
        #[command(flatten)]
        common: Common,
        /// Full grid of blend sizes and families plus the atomistic row.
        #[arg(long)]
        table: bool,
    },
    /// Coercivity constant c_min at one stretch.
    Coercivity {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
    },
    /// Atomistic/continuum consistency errors and fitted orders.
    Consistency {
        #[command(flatten)]
        common: Common,
        /// Chain sizes M (default 250 500 1000 2000).
        sizes: Vec<usize>,
    },
    /// Linearized displacement under an external force for N = 1, 2, 3.
    Deform {
        #[command(flatten)]
        common: Common,
    },
    /// Coercivity over chain sizes with a blend-size rule.
    Scaling {
        #[command(flatten)]
        common: Common,
        /// m13 = ceil(M^(1/3)), m15 = ceil(M^(1/5)), fixed = --L.
        #[arg(long, default_value = "m13")]
        rule: String,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Chain sizes M (default 500 1000 2000 4000).
        sizes: Vec<usize>,
    },
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long = "M", default_value_t = 2000)]
    half_atoms: usize,
    #[arg(long = "N", default_value_t = 2)]
    range: usize,
    #[arg(long = "De", default_value_t = 3.0)]
    well_depth: f64,
    #[arg(long, default_value_t = 3.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    re: f64,
    /// linear | cubic | quintic | one | zero | atomistic | continuum
    #[arg(long, default_value = "cubic")]
    family: String,
    /// Blend width in lattice spacings.
    #[arg(long = "L", default_value_t = 5)]
    width: usize,
    #[arg(long, default_value_t = 1e-5)]
    dgamma: f64,
    #[arg(long = "gamma-max", default_value_t = 1.5)]
    gamma_max: f64,
    /// sine | gaussian
    #[arg(long)]
    force: Option<String>,
    /// Force amplitude scale s (default 1/5 for sine, a for gaussian).
    #[arg(long = "amp-scale")]
    amp_scale: Option<f64>,
    /// Use s = a for the sine force.
    #[arg(long = "amp-literal")]
    amp_literal: bool,
    /// Gaussian centre in lattice spacings.
    #[arg(long, default_value_t = 4.0)]
    mu: f64,
    /// Gaussian width in lattice spacings.
    #[arg(long, default_value_t = 50.0)]
    sigma: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "scan-exact")]
    scan_exact: bool,
    /// Sharp interface on the continuum-to-atomistic side.
    #[arg(long)]
    oneside: bool,
}

impl Common {
    fn into_config(self, scenario: Scenario) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::new(scenario);
        cfg.half_atoms = self.half_atoms;
        cfg.range = self.range;
        cfg.potential = crate::potential::MorseParams::new(self.well_depth, self.alpha, self.re)?;
        cfg.choice = ModelChoice::parse(&self.family)?;
        cfg.blend_width = self.width;
        cfg.one_sided = self.oneside;
        cfg.dgamma = self.dgamma;
        cfg.gamma_max = self.gamma_max;
        cfg.scan_exact = self.scan_exact;
        if let Some(kind) = &self.force {
            cfg.force = ForceKind::parse(kind)?;
        }
        let chain = cfg.chain()?;
        let a = chain.spacing::<f64>();
        let defaults = ForceParams::defaults(cfg.force, &chain);
        let amplitude_scale = match (self.amp_scale, self.amp_literal) {
            (Some(s), _) => s,
            (None, true) => a,
            (None, false) => defaults.amplitude_scale,
        };
        cfg.force_params = Some(ForceParams { amplitude_scale, mu: self.mu * a, sigma: self.sigma * a });
        if let Some(out) = self.out {
            cfg.output_path = out;
        }
        Ok(cfg)
    }
}

fn summary(cfg: &ExperimentConfig, table: &ResultTable) -> String {
    let col = |name: &str| table.real_column(name).unwrap_or_default();
    match cfg.scenario {
        Scenario::CriticalStrain if cfg.table => format!(
            "critical-strain table: {} rows, gamma_atomistic = {}",
            table.rows().len(),
            table.meta("gamma_atomistic").unwrap_or("?")
        ),
        Scenario::CriticalStrain => format!(
            "gamma_crit = {:.5} ({} L={}), gamma_atomistic = {}",
            col("gamma_crit").first().copied().unwrap_or(f64::NAN),
            cfg.model().tag(),
            cfg.model().width(),
            table.meta("gamma_atomistic").unwrap_or("?")
        ),
        Scenario::Coercivity => {
            let row = &table.rows()[0];
            format!(
                "c_min = {} (M={} N={} family={} L={} gamma={} iterations={} residual={:e})",
                row[5], row[0], row[1], row[2], row[3], row[4], row[6],
                row[7].as_f64().unwrap_or(f64::NAN)
            )
        }
        Scenario::Consistency => format!(
            "consistency orders: force_l2 {} force_linf {} energy {}",
            table.meta("order_force_l2").unwrap_or("-"),
            table.meta("order_force_linf").unwrap_or("-"),
            table.meta("order_energy").unwrap_or("-")
        ),
        Scenario::Deform => {
            let (u1, u2, u3) = (col("u_N1"), col("u_N2"), col("u_N3"));
            let gap = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            format!(
                "deform ({}): max|u_N2| = {:e}, |u1-u2|_inf = {:e}, |u2-u3|_inf = {:e}",
                cfg.force.name(),
                u2.iter().map(|x| x.abs()).fold(0.0, f64::max),
                gap(&u1, &u2),
                gap(&u2, &u3)
            )
        }
        Scenario::Scaling => {
            let c = col("c_min");
            format!(
                "scaling: min c_min = {} over {} sizes",
                c.iter().copied().fold(f64::INFINITY, f64::min),
                c.len()
            )
        }
    }
}

fn dispatch(command: Command) -> Result<(ExperimentConfig, ResultTable)> {
    let cfg = match command {
        Command::CriticalStrain { common, table } => {
            let mut cfg = common.into_config(Scenario::CriticalStrain)?;
            cfg.table = table;
            cfg
        }
        Command::Coercivity { common, gamma } => {
            let mut cfg = common.into_config(Scenario::Coercivity)?;
            cfg.gamma = gamma;
            cfg
        }
        Command::Consistency { common, sizes } => {
            let mut cfg = common.into_config(Scenario::Consistency)?;
            if !sizes.is_empty() {
                cfg.sizes = sizes;
            }
            cfg
        }
        Command::Deform { common } => common.into_config(Scenario::Deform)?,
        Command::Scaling { common, rule, gamma, sizes } => {
            let mut cfg = common.into_config(Scenario::Scaling)?;
            cfg.rule = BlendRule::parse(&rule, cfg.blend_width)?;
            cfg.gamma = gamma;
            if !sizes.is_empty() {
                cfg.sizes = sizes;
            }
            cfg
        }
    };
    cfg.validate()?;
    let table = match cfg.scenario {
        Scenario::CriticalStrain if cfg.table => run_critical_strain_table(&cfg)?,
        Scenario::CriticalStrain => run_critical_strain(&cfg)?,
        Scenario::Coercivity => run_coercivity(&cfg)?,
        Scenario::Consistency => run_consistency_sweep(&cfg)?,
        Scenario::Deform => solve_deformation(&cfg)?.1,
        Scenario::Scaling => run_scaling(&cfg)?,
    };
    Ok((cfg, table))
}

/// Parses `argv` (program name first), runs the scenario, writes the CSV and
/// prints a summary line. Returns 0 on success, 2 on a configuration error
/// and 3 on a numerical failure.
pub fn cli_main<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let run = dispatch(cli.command).and_then(|(cfg, table)| {
        table.write_csv_file(&cfg.output_path)?;
        Ok((cfg, table))
    });
    match run {
        Ok((cfg, table)) => {
            println!("{} -> {}", summary(&cfg, &table), cfg.output_path.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_config_error() {
        2
    } else if matches!(e, Error::Io(_) | Error::Csv(_)) {
        // unwritable output path, etc.
        2
    } else {
        3
    }
}

