//! Experiment drivers: critical-strain tables, coercivity and scaling
//! studies, consistency sweeps, external-force deformation, CSV output and
//! the command-line front end.

mod cli;
mod config;
mod deform;
mod forces;
mod studies;
mod table;

pub use cli::cli_main;
pub use config::{ExperimentConfig, ForceKind, ForceParams, ModelChoice, Scenario};
pub use deform::{solve_deformation, solve_mean_zero, MeanZeroSolution};
pub use forces::external_force;
pub use studies::{
    consistency_errors, critical_strain_of, fit_order, run_coercivity, run_consistency_sweep, run_critical_strain,
    run_critical_strain_table, run_scaling, TABLE_FAMILIES, TABLE_WIDTHS,
};
pub use table::{Cell, ResultTable};
