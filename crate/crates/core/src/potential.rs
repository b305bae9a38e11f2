//! Pair potentials evaluated in lattice units, and the Morse well used in the experiments.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default largest neighbour distance checked by [`check_lattice_assumptions`].
pub const DEFAULT_K_MAX: usize = 10;

/// A symmetric pair interaction `φ(r) = φ(|r|)` with two derivatives.
///
/// `r` is a bond length in lattice units, so the reference nearest-neighbour
/// bond is `r = 1`.
pub trait PairPotential<T: Scalar>: Send + Sync {
    /// `φ` at `r > 0`.
    fn value(&self, r: T) -> T;
    /// `φ_x` at `r > 0`.
    fn first(&self, r: T) -> T;
    /// `φ_xx` at `r > 0`.
    fn second(&self, r: T) -> T;

    fn phi(&self, r: T) -> T {
        self.value(r.abs())
    }

    /// Odd extension of `φ_x`.
    fn phi_x(&self, r: T) -> T {
        let d = self.first(r.abs());
        if r < T::zero() {
            -d
        } else {
            d
        }
    }

    fn phi_xx(&self, r: T) -> T {
        self.second(r.abs())
    }
}

/// Checks `φ_xx(1) > 0` and `φ_xx(k) ≤ 0` for `2 ≤ k ≤ k_max`.
pub fn check_lattice_assumptions<T: Scalar, P: PairPotential<T> + ?Sized>(
    p: &P,
    k_max: usize,
) -> Result<()> {
    let c1 = p.phi_xx(T::one());
    if !(c1 > T::zero()) {
        return Err(Error::InvalidParameter(format!(
            "potential needs phi_xx(1) > 0, got {c1}"
        )));
    }
    for k in 2..=k_max {
        let ck = p.phi_xx(T::from_count(k));
        if ck > T::zero() {
            return Err(Error::InvalidParameter(format!(
                "potential needs phi_xx({k}) <= 0, got {ck}"
            )));
        }
    }
    Ok(())
}

/// `A_N(γ) = Σ_{k=1..N} k² φ_xx(kγ)`, the long-wave stiffness of the stretched chain.
pub fn stability_constant<T: Scalar, P: PairPotential<T> + ?Sized>(p: &P, range: usize, gamma: T) -> T {
    (1..=range)
        .map(|k| {
            let kk = T::from_count(k);
            kk * kk * p.phi_xx(kk * gamma)
        })
        .sum()
}

/// Morse parameters `(D_e, α, r_e)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorseParams<T> {
    pub well_depth: T,
    pub width: T,
    pub equilibrium: T,
}

impl<T: Scalar> MorseParams<T> {
    pub fn new(well_depth: T, width: T, equilibrium: T) -> Result<Self> {
        let positive = |name: &str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("Morse {name} must be positive, got {v}")))
            }
        };
        positive("D_e", well_depth)?;
        positive("alpha", width)?;
        positive("r_e", equilibrium)?;
        Ok(Self {
            well_depth,
            width,
            equilibrium,
        })
    }
}

impl Default for MorseParams<f64> {
    /// `D_e = 3`, `α = 3`, `r_e = 1`.
    fn default() -> Self {
        Self {
            well_depth: 3.0,
            width: 3.0,
            equilibrium: 1.0,
        }
    }
}

/// `φ(r) = D_e [1 − e^{−α(r − r_e)}]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Morse<T> {
    params: MorseParams<T>,
}

impl<T: Scalar> Morse<T> {
    pub fn new(params: MorseParams<T>) -> Self {
        Self { params }
    }

    /// Builds the potential and verifies the lattice sign assumptions up to `k_max`.
    pub fn checked(params: MorseParams<T>, k_max: usize) -> Result<Self> {
        let m = Self::new(params);
        check_lattice_assumptions(&m, k_max)?;
        Ok(m)
    }

    pub fn params(&self) -> &MorseParams<T> {
        &self.params
    }

    #[inline]
    fn decay(&self, r: T) -> T {
        (-self.params.width * (r - self.params.equilibrium)).exp()
    }
}

impl<T: Scalar> PairPotential<T> for Morse<T> {
    fn value(&self, r: T) -> T {
        let s = T::one() - self.decay(r);
        self.params.well_depth * s * s
    }

    fn first(&self, r: T) -> T {
        let e = self.decay(r);
        let two = T::lit(2.0);
        two * self.params.well_depth * self.params.width * e * (T::one() - e)
    }

    fn second(&self, r: T) -> T {
        let e = self.decay(r);
        let two = T::lit(2.0);
        let alpha = self.params.width;
        two * self.params.well_depth * alpha * alpha * e * (two * e - T::one())
    }
}

/// Evaluates the Morse potential (`deriv = 0`) or one of its first two derivatives.
pub fn morse_eval<T: Scalar>(params: &MorseParams<T>, r: T, deriv: u8) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::NonPositiveDistance(r.as_f64()));
    }
    let m = Morse::new(*params);
    match deriv {
        0 => Ok(m.value(r)),
        1 => Ok(m.first(r)),
        2 => Ok(m.second(r)),
        _ => Err(Error::InvalidParameter(format!("derivative order must be 0, 1 or 2, got {deriv}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn morse(alpha: f64) -> Morse<f64> {
        Morse::new(MorseParams::new(3.0, alpha, 1.0).unwrap())
    }

    fn central(f: impl Fn(f64) -> f64, r: f64, h: f64) -> f64 {
        (f(r + h) - f(r - h)) / (2.0 * h)
    }

    #[test]
    fn minimum_at_equilibrium() {
        let p = MorseParams::new(3.0, 3.0, 1.0).unwrap();
        assert_eq!(morse_eval(&p, 1.0, 0).unwrap(), 0.0);
        assert_eq!(morse_eval(&p, 1.0, 1).unwrap(), 0.0);
        let p2 = MorseParams::new(1.7, 4.0, 1.3).unwrap();
        assert_eq!(morse_eval(&p2, 1.3, 0).unwrap(), 0.0);
        assert_eq!(morse_eval(&p2, 1.3, 1).unwrap(), 0.0);
    }

    #[test]
    fn curvature_at_equilibrium_matches_finite_difference() {
        let p = MorseParams::new(3.0, 3.0, 1.0).unwrap();
        let exact = morse_eval(&p, 1.0, 2).unwrap();
        assert_eq!(exact, 54.0);
        let h = 1e-6;
        let fd = central(|r| morse_eval(&p, r, 1).unwrap(), 1.0, h);
        assert!(((fd - exact) / exact).abs() <= 1e-6, "fd {fd}");
        // second difference of φ itself as an independent check
        let fd2 = (morse(3.0).value(1.0 + 1e-4) - 2.0 * morse(3.0).value(1.0) + morse(3.0).value(1.0 - 1e-4)) / 1e-8;
        assert!(((fd2 - exact) / exact).abs() <= 1e-6, "fd2 {fd2}");
    }

    #[test]
    fn rejects_bad_input() {
        let p = MorseParams::new(3.0, 3.0, 1.0).unwrap();
        assert!(matches!(morse_eval(&p, 0.0, 0), Err(Error::NonPositiveDistance(_))));
        assert!(morse_eval(&p, -1.0, 2).is_err());
        assert!(morse_eval(&p, 1.0, 3).is_err());
        assert!(MorseParams::new(0.0, 3.0, 1.0).is_err());
        assert!(MorseParams::new(3.0, -1.0, 1.0).is_err());
        assert!(MorseParams::new(3.0, 3.0, f64::NAN).is_err());
    }

    #[test]
    fn derivatives_match_central_differences_on_grid() {
        let h = 1e-6;
        for alpha in [3.0, 4.0, 5.0] {
            let m = morse(alpha);
            for i in 0..=90 {
                let r = 0.5 + 0.05 * i as f64;
                let d1 = central(|s| m.value(s), r, h);
                let d2 = central(|s| m.first(s), r, h);
                let tol1 = 1e-5 * m.first(r).abs().max(1e-3);
                let tol2 = 1e-5 * m.second(r).abs().max(1e-3);
                assert!((d1 - m.first(r)).abs() <= tol1, "phi_x at r={r}, alpha={alpha}");
                assert!((d2 - m.second(r)).abs() <= tol2, "phi_xx at r={r}, alpha={alpha}");
            }
        }
    }

    #[test]
    fn symmetric_extension() {
        let m = morse(3.0);
        for r in [0.7, 1.0, 2.3] {
            assert_eq!(m.phi(-r), m.phi(r));
            assert_eq!(m.phi_x(-r), -m.phi_x(r));
            assert_eq!(m.phi_xx(-r), m.phi_xx(r));
        }
    }

    #[test]
    fn lattice_assumptions_hold_for_experiment_widths() {
        for alpha in [3.0, 4.0, 5.0] {
            let m = morse(alpha);
            assert!(m.phi_xx(1.0) > 0.0);
            assert!(m.phi_xx(2.0) <= 0.0);
            assert!(m.phi_xx(3.0) <= 0.0);
            assert!(Morse::checked(*m.params(), DEFAULT_K_MAX).is_ok());
        }
        // a very wide well has positive curvature at the second neighbour
        assert!(Morse::checked(MorseParams::new(3.0, 0.5, 1.0).unwrap(), DEFAULT_K_MAX).is_err());
    }

    #[test]
    fn stability_constant_examples() {
        let m = morse(3.0);
        assert_eq!(stability_constant(&m, 1, 1.0), 54.0);
        let fd = central(|r| m.first(r), 2.0, 1e-6);
        let a2 = stability_constant(&m, 2, 1.0);
        assert!((a2 - (54.0 + 4.0 * fd)).abs() < 1e-6);
        assert!(a2 > 0.0);
        for alpha in [3.0, 4.0, 5.0] {
            for n in 1..=3 {
                assert!(stability_constant(&morse(alpha), n, 1.0) > 0.0);
            }
        }
    }

    #[test]
    fn stability_constant_decreases_near_reference() {
        let m = morse(3.0);
        let grid: Vec<f64> = (0..=300).map(|i| 1.0 + 1e-3 * i as f64).collect();
        for w in grid.windows(2) {
            assert!(stability_constant(&m, 2, w[1]) < stability_constant(&m, 2, w[0]));
        }
    }

    #[test]
    fn single_precision_evaluation() {
        let m = Morse::new(MorseParams::new(3.0f32, 3.0, 1.0).unwrap());
        assert_eq!(m.phi_xx(1.0), 54.0f32);
    }
}
