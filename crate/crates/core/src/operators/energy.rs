use crate::error::{Error, Result};
use crate::lattice::{ChainConfig, PeriodicField};
use crate::potential::PairPotential;
use crate::scalar::Scalar;

/// Deformed configuration `y_ℓ = γ x_ℓ + u_ℓ` with periodic `u`.
///
/// Periodic images satisfy `y_{ℓ+2M} = y_ℓ + 2γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Deformation<T> {
    pub stretch: T,
    pub displacement: PeriodicField<T>,
}

impl<T: Scalar> Deformation<T> {
    /// Reference configuration displaced by `u` (`γ = 1`).
    pub fn from_displacement(u: PeriodicField<T>) -> Self {
        Self {
            stretch: T::one(),
            displacement: u,
        }
    }

    pub fn stretched(config: ChainConfig, stretch: T) -> Self {
        Self {
            stretch,
            displacement: PeriodicField::zeros(config),
        }
    }

    pub fn config(&self) -> &ChainConfig {
        self.displacement.config()
    }

    /// Position `y_ℓ` of any integer site, including periodic images.
    pub fn position(&self, ell: i64) -> T {
        self.stretch * self.config().position::<T>(ell) + self.displacement.at(ell)
    }

    /// Scaled bond `(y_{ℓ+k} − y_ℓ) / a = γk + (u_{ℓ+k} − u_ℓ)/a`.
    #[inline]
    pub fn bond(&self, ell: i64, k: i64) -> T {
        let a = self.config().spacing::<T>();
        self.stretch * T::from_index(k) + (self.displacement.at(ell + k) - self.displacement.at(ell)) / a
    }

    fn checked_bond(&self, ell: i64, k: i64) -> Result<T> {
        let b = self.bond(ell, k);
        // bonds to the left are negative in an ordered chain
        if !(b * T::from_index(k.signum()) > T::zero()) {
            return Err(Error::NonPhysicalBond {
                ell,
                k,
                length: b.as_f64(),
            });
        }
        Ok(b)
    }
}

/// `E = Σ_ℓ Σ_{0<|k|≤N} (a/2) φ((y_{ℓ+k} − y_ℓ)/a)`.
pub fn energy_atomistic<T: Scalar, P: PairPotential<T> + ?Sized>(y: &Deformation<T>, potential: &P) -> Result<T> {
    let cfg = *y.config();
    let half_a = cfg.spacing::<T>() / T::lit(2.0);
    let n = cfg.range() as i64;
    let mut e = T::zero();
    for ell in cfg.sites() {
        for k in (-n..=n).filter(|&k| k != 0) {
            e = e + half_a * potential.phi(y.checked_bond(ell, k)?);
        }
    }
    Ok(e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyModel {
    Atomistic,
    Continuum,
}

/// Quadratic energies about the reference lattice.
///
/// Atomistic: `Σ_ℓ Σ_{k≠0} (a/2)·½((u_{ℓ+k} − u_ℓ)/a)² φ_xx(k)`.
/// Continuum: `Σ_ℓ (Σ_{k=1..N} (k²/2) φ_xx(k)) (u'_ℓ)² a`.
pub fn energy_linearized<T: Scalar, P: PairPotential<T> + ?Sized>(
    u: &PeriodicField<T>,
    potential: &P,
    model: EnergyModel,
) -> T {
    let cfg = *u.config();
    let a = cfg.spacing::<T>();
    let n = cfg.range() as i64;
    let half = T::lit(0.5);
    match model {
        EnergyModel::Atomistic => {
            let mut e = T::zero();
            for ell in cfg.sites() {
                for k in (-n..=n).filter(|&k| k != 0) {
                    let d = (u.at(ell + k) - u.at(ell)) / a;
                    e = e + half * a * half * d * d * potential.phi_xx(T::from_index(k));
                }
            }
            e
        }
        EnergyModel::Continuum => {
            let density: T = (1..=n)
                .map(|k| {
                    let kk = T::from_index(k);
                    half * kk * kk * potential.phi_xx(kk)
                })
                .sum();
            let du = u.forward_diff();
            du.values().iter().map(|&d| density * d * d * a).sum()
        }
    }
}

/// `F_ℓ = −Σ_{0<|k|≤N} (1/2a) [φ_x(bond(ℓ, k)) − φ_x(bond(ℓ−k, k))]`.
///
/// This is `a⁻¹ ∂E/∂u_ℓ` of [`energy_atomistic`].
pub fn force_nonlinear_atomistic<T: Scalar, P: PairPotential<T> + ?Sized>(
    y: &Deformation<T>,
    potential: &P,
) -> Result<PeriodicField<T>> {
    let cfg = *y.config();
    let two_a = T::lit(2.0) * cfg.spacing::<T>();
    let n = cfg.range() as i64;
    let mut f = PeriodicField::zeros(cfg);
    for ell in cfg.sites() {
        let mut s = T::zero();
        for k in (-n..=n).filter(|&k| k != 0) {
            let ahead = y.checked_bond(ell, k)?;
            let behind = y.checked_bond(ell - k, k)?;
            s = s + potential.phi_x(ahead) - potential.phi_x(behind);
        }
        f.set(ell, -s / two_a);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{Morse, MorseParams};

    fn morse() -> Morse<f64> {
        Morse::new(MorseParams::default())
    }

    #[test]
    fn reference_energy_is_zero() {
        let c = ChainConfig::new(10, 1).unwrap();
        let y = Deformation::stretched(c, 1.0);
        assert_eq!(energy_atomistic(&y, &morse()).unwrap(), 0.0);
    }

    #[test]
    fn uniform_stretch_energy() {
        let c = ChainConfig::new(10, 2).unwrap();
        let g = 1.07;
        let y = Deformation::stretched(c, g);
        let m = morse();
        let e = energy_atomistic(&y, &m).unwrap();
        let expect = 2.0 * (m.phi(g) + m.phi(2.0 * g));
        assert!((e - expect).abs() < 1e-13 * expect.abs().max(1.0));
    }

    #[test]
    fn crossed_bonds_are_rejected() {
        let c = ChainConfig::new(4, 1).unwrap();
        let mut u = PeriodicField::zeros(c);
        u.set(0, 0.5); // atom 0 pushed past atom 1 (a = 0.25)
        let y = Deformation::from_displacement(u);
        assert!(matches!(energy_atomistic(&y, &morse()), Err(Error::NonPhysicalBond { .. })));
        assert!(force_nonlinear_atomistic(&y, &morse()).is_err());
    }

    #[test]
    fn zero_displacement_has_zero_force() {
        let c = ChainConfig::new(9, 3).unwrap();
        for g in [1.0, 1.1] {
            let y = Deformation::stretched(c, g);
            let f = force_nonlinear_atomistic(&y, &morse()).unwrap();
            assert!(f.linf_norm() < 1e-10, "{}", f.linf_norm());
        }
    }

    #[test]
    fn linearized_energies_vanish_on_constants() {
        let c = ChainConfig::new(7, 2).unwrap();
        let u = PeriodicField::constant(c, 0.3);
        assert_eq!(energy_linearized(&u, &morse(), EnergyModel::Atomistic), 0.0);
        assert_eq!(energy_linearized(&u, &morse(), EnergyModel::Continuum), 0.0);
    }
}
