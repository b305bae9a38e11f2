//! Periodic reference lattice, displacement fields and their discrete calculus.
//!
//! A chain of `2M` atoms sits at `x_ℓ = aℓ`, `ℓ ∈ {−M+1, …, M}`, with spacing
//! `a = 1/M`, on the periodic domain `(−1, 1]`. Logical site `ℓ` is stored at
//! physical slot `ℓ + M − 1`; every wraparound is modular arithmetic on that
//! slot.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Periodic lattice descriptor: `M` (half the atom count) and interaction range `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainConfig {
    half_atoms: usize,
    range: usize,
}

impl ChainConfig {
    /// Requires `1 ≤ N < M`.
    pub fn new(half_atoms: usize, range: usize) -> Result<Self> {
        if half_atoms == 0 {
            return Err(Error::InvalidConfig("M must be positive".into()));
        }
        if range == 0 || range >= half_atoms {
            return Err(Error::InvalidConfig(format!(
                "interaction range N = {range} must satisfy 1 <= N < M = {half_atoms}"
            )));
        }
        Ok(Self { half_atoms, range })
    }

    /// `M`.
    #[inline]
    pub fn half_atoms(&self) -> usize {
        self.half_atoms
    }

    /// `N`, the largest neighbour distance that interacts.
    #[inline]
    pub fn range(&self) -> usize {
        self.range
    }

    /// Same lattice with a different interaction range.
    pub fn with_range(&self, range: usize) -> Result<Self> {
        Self::new(self.half_atoms, range)
    }

    /// Number of atoms `2M`.
    #[inline]
    pub fn len(&self) -> usize {
        2 * self.half_atoms
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lattice spacing `a = 1/M`.
    #[inline]
    pub fn spacing<T: Scalar>(&self) -> T {
        T::one() / T::from_count(self.half_atoms)
    }

    #[inline]
    pub fn first_site(&self) -> i64 {
        1 - self.half_atoms as i64
    }

    #[inline]
    pub fn last_site(&self) -> i64 {
        self.half_atoms as i64
    }

    /// Logical sites in storage order, `−M+1 ..= M`.
    pub fn sites(&self) -> impl Iterator<Item = i64> {
        self.first_site()..=self.last_site()
    }

    /// Physical slot of logical site `ell`, wrapping any integer into range.
    #[inline]
    pub fn slot(&self, ell: i64) -> usize {
        let n = self.len() as i64;
        (ell + self.half_atoms as i64 - 1).rem_euclid(n) as usize
    }

    /// Logical site stored in physical slot `slot`.
    #[inline]
    pub fn site(&self, slot: usize) -> i64 {
        slot as i64 - self.half_atoms as i64 + 1
    }

    /// Reference position `x_ℓ = aℓ`.
    #[inline]
    pub fn position<T: Scalar>(&self, ell: i64) -> T {
        T::from_index(ell) * self.spacing::<T>()
    }
}

/// A `2M`-periodic real sequence on a chain (displacements, forces, blending samples).
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField<T> {
    config: ChainConfig,
    values: Vec<T>,
}

impl<T: Scalar> PeriodicField<T> {
    pub fn zeros(config: ChainConfig) -> Self {
        Self::constant(config, T::zero())
    }

    pub fn constant(config: ChainConfig, value: T) -> Self {
        Self {
            config,
            values: vec![value; config.len()],
        }
    }

    /// Wraps values given in storage order (`ℓ = −M+1` first).
    pub fn from_values(config: ChainConfig, values: Vec<T>) -> Result<Self> {
        if values.len() != config.len() {
            return Err(Error::InvalidParameter(format!(
                "field needs {} values, got {}",
                config.len(),
                values.len()
            )));
        }
        Ok(Self { config, values })
    }

    /// Samples `f(ℓ, x_ℓ)` at every site.
    pub fn from_fn(config: ChainConfig, mut f: impl FnMut(i64, T) -> T) -> Self {
        let values = config
            .sites()
            .map(|ell| f(ell, config.position(ell)))
            .collect();
        Self { config, values }
    }

    #[inline]
    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    /// Value at any integer site, periodically extended.
    #[inline]
    pub fn at(&self, ell: i64) -> T {
        self.values[self.config.slot(ell)]
    }

    #[inline]
    pub fn set(&mut self, ell: i64, value: T) {
        let slot = self.config.slot(ell);
        self.values[slot] = value;
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// `(ℓ, value)` pairs in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        self.config.sites().zip(self.values.iter().copied())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            config: self.config,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn same_chain(&self, other: &Self) -> Result<()> {
        if self.config == other.config {
            Ok(())
        } else {
            Err(Error::ConfigMismatch)
        }
    }

    /// `alpha·self + beta·other`.
    pub fn combine(&self, alpha: T, other: &Self, beta: T) -> Result<Self> {
        self.same_chain(other)?;
        Ok(Self {
            config: self.config,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&u, &v)| alpha * u + beta * v)
                .collect(),
        })
    }

    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::from_count(self.values.len())
    }

    /// Copy with the mean subtracted.
    pub fn without_mean(&self) -> Self {
        let m = self.mean();
        self.map(|v| v - m)
    }

    /// `u'_ℓ = (u_{ℓ+1} − u_ℓ)/a`.
    pub fn forward_diff(&self) -> Self {
        let n = self.values.len();
        let a = self.config.spacing::<T>();
        let values = (0..n)
            .map(|p| (self.values[(p + 1) % n] - self.values[p]) / a)
            .collect();
        Self {
            config: self.config,
            values,
        }
    }

    /// `(u_ℓ − u_{ℓ−1})/a`.
    pub fn backward_diff(&self) -> Self {
        let n = self.values.len();
        let a = self.config.spacing::<T>();
        let values = (0..n)
            .map(|p| (self.values[p] - self.values[(p + n - 1) % n]) / a)
            .collect();
        Self {
            config: self.config,
            values,
        }
    }

    /// Higher differences built by alternating stencils:
    /// `u''` is backward-of-forward, `u⁽³⁾` forward-of-second, `u⁽⁴⁾` backward-of-third.
    pub fn higher_diff(&self, order: u8) -> Result<Self> {
        let second = || self.forward_diff().backward_diff();
        match order {
            2 => Ok(second()),
            3 => Ok(second().forward_diff()),
            4 => Ok(second().forward_diff().backward_diff()),
            _ => Err(Error::InvalidParameter(format!(
                "difference order must be 2, 3 or 4, got {order}"
            ))),
        }
    }

    /// `sqrt(Σ u_ℓ² a)`.
    pub fn l2_norm(&self) -> T {
        let a = self.config.spacing::<T>();
        (self.values.iter().map(|&v| v * v).sum::<T>() * a).sqrt()
    }

    pub fn linf_norm(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }

    /// `⟨u, w⟩ = Σ u_ℓ w_ℓ a`.
    pub fn inner(&self, other: &Self) -> Result<T> {
        self.same_chain(other)?;
        let a = self.config.spacing::<T>();
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &w)| u * w)
            .sum::<T>()
            * a)
    }

    /// Discrete `H¹` semi-norm `‖u'‖_{ℓ²}`.
    pub fn h1_seminorm(&self) -> T {
        self.forward_diff().l2_norm()
    }
}

/// The four scalar measures of a field pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms<T> {
    pub l2: T,
    pub linf: T,
    pub inner: T,
    pub h1_semi: T,
}

/// Norms of `u` and the inner product `⟨u, w⟩`.
pub fn norms_and_inner<T: Scalar>(u: &PeriodicField<T>, w: &PeriodicField<T>) -> Result<Norms<T>> {
    Ok(Norms {
        l2: u.l2_norm(),
        linf: u.linf_norm(),
        inner: u.inner(w)?,
        h1_semi: u.h1_seminorm(),
    })
}

/// `|Σ u_ℓ(v_ℓ − v_{ℓ−1}) + Σ (u_ℓ − u_{ℓ−1}) v_{ℓ−1}|` over one period.
///
/// Vanishes for periodic sequences up to rounding.
pub fn summation_by_parts_residual<T: Scalar>(
    u: &PeriodicField<T>,
    v: &PeriodicField<T>,
) -> Result<T> {
    u.same_chain(v)?;
    let cfg = u.config();
    let (mut lhs, mut rhs) = (T::zero(), T::zero());
    for ell in cfg.sites() {
        lhs = lhs + u.at(ell) * (v.at(ell) - v.at(ell - 1));
        rhs = rhs + (u.at(ell) - u.at(ell - 1)) * v.at(ell - 1);
    }
    Ok((lhs + rhs).abs())
}

impl<T: Scalar> Add for &PeriodicField<T> {
    type Output = PeriodicField<T>;

    fn add(self, rhs: Self) -> PeriodicField<T> {
        self.combine(T::one(), rhs, T::one())
            .expect("adding fields from different chains")
    }
}

impl<T: Scalar> Sub for &PeriodicField<T> {
    type Output = PeriodicField<T>;

    fn sub(self, rhs: Self) -> PeriodicField<T> {
        self.combine(T::one(), rhs, -T::one())
            .expect("subtracting fields from different chains")
    }
}

impl<T: Scalar> Mul<T> for &PeriodicField<T> {
    type Output = PeriodicField<T>;

    fn mul(self, rhs: T) -> PeriodicField<T> {
        self.map(|v| v * rhs)
    }
}
