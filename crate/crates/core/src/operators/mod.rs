//! Force operators of the chain: banded periodic storage, assembly of the
//! linearized atomistic / continuum / blended forces, and the energies and
//! nonlinear force they derive from.

mod assembly;
mod banded;
mod energy;

pub use assembly::{assemble_components, assemble_linear, LinearModel};
pub use banded::{bilinear, BandedPeriodicOperator};
pub use energy::{energy_atomistic, energy_linearized, force_nonlinear_atomistic, Deformation, EnergyModel};
