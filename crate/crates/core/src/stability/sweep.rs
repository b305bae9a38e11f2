use crate::error::{Error, Result};
use crate::operators::BandedPeriodicOperator;
use crate::scalar::Scalar;

use super::coercivity::{coercivity_constant, is_coercive, EigenOptions};

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions<T> {
    /// Grid resolution `Δγ`.
    pub dgamma: T,
    pub gamma_max: T,
    /// Stride of the first pass before bisection.
    pub coarse_step: T,
    /// Visit every grid point instead of coarse scan plus bisection.
    pub scan_exact: bool,
}

impl<T: Scalar> Default for SweepOptions<T> {
    fn default() -> Self {
        Self {
            dgamma: T::lit(1e-5),
            gamma_max: T::lit(1.5),
            coarse_step: T::lit(1e-3),
            scan_exact: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOutcome<T> {
    /// Largest grid stretch `1 + jΔγ` at which the operator is coercive.
    pub gamma: T,
    /// First grid stretch at which it is not.
    pub first_unstable: T,
    pub evaluations: usize,
}

/// Scans `γ_j = 1 + jΔγ` for the loss of coercivity of `build(γ_j)`.
///
/// Assumes a single sign change; the coarse pass brackets it and integer
/// bisection resolves it to one grid step.
pub fn critical_strain<T, F>(build: F, opts: &SweepOptions<T>) -> Result<SweepOutcome<T>>
where
    T: Scalar,
    F: Fn(T) -> Result<BandedPeriodicOperator<T>>,
{
    if !(opts.dgamma > T::zero()) || !(opts.coarse_step > T::zero()) {
        return Err(Error::InvalidParameter("sweep steps must be positive".into()));
    }
    if !(opts.gamma_max > T::one()) {
        return Err(Error::InvalidParameter("gamma_max must exceed 1".into()));
    }
    let grid = |j: u64| T::one() + T::lit(j as f64) * opts.dgamma;
    let j_max = ((opts.gamma_max - T::one()) / opts.dgamma).floor().as_f64() as u64;
    let mut evaluations = 0usize;
    let mut stable = |j: u64| -> Result<bool> {
        evaluations += 1;
        is_coercive(&build(grid(j))?)
    };

    let start = build(T::one())?;
    if !is_coercive(&start)? {
        let c_min = coercivity_constant(&start, &EigenOptions::default())
            .map(|e| e.value.as_f64())
            .unwrap_or(f64::NAN);
        return Err(Error::NotCoerciveAtStart { c_min });
    }

    let stride = if opts.scan_exact {
        1
    } else {
        ((opts.coarse_step / opts.dgamma).round().as_f64() as u64).max(1)
    };
    let mut good = 0u64;
    let mut bad = None;
    let mut j = stride;
    while j <= j_max {
        if stable(j)? {
            good = j;
            j += stride;
        } else {
            bad = Some(j);
            break;
        }
    }
    let mut bad = match bad {
        Some(b) => b,
        None if good < j_max => {
            // the last partial stride
            let mut k = good + 1;
            loop {
                if k > j_max {
                    return Err(Error::NoSignChange { gamma_max: opts.gamma_max.as_f64() });
                }
                if !stable(k)? {
                    break k;
                }
                good = k;
                k += 1;
            }
        }
        None => return Err(Error::NoSignChange { gamma_max: opts.gamma_max.as_f64() }),
    };
    while bad - good > 1 {
        let mid = good + (bad - good) / 2;
        if stable(mid)? {
            good = mid;
        } else {
            bad = mid;
        }
    }
    Ok(SweepOutcome {
        gamma: grid(good),
        first_unstable: grid(bad),
        evaluations: evaluations + 1,
    })
}

/// `c_min` at each of `gammas`.
pub fn coarse_profile<T, F>(build: F, gammas: &[T], opts: &EigenOptions<T>) -> Result<Vec<(T, T)>>
where
    T: Scalar,
    F: Fn(T) -> Result<BandedPeriodicOperator<T>>,
{
    gammas
        .iter()
        .map(|&g| Ok((g, coercivity_constant(&build(g)?, opts)?.value)))
        .collect()
}

/// Points of a `(γ, c_min)` profile where `c_min` fails to decrease.
pub fn monotonicity_violations<T: Scalar>(profile: &[(T, T)]) -> Vec<(T, T)> {
    profile
        .windows(2)
        .filter(|w| w[1].1 > w[0].1)
        .map(|w| (w[1].0, w[1].1 - w[0].1))
        .collect()
}
