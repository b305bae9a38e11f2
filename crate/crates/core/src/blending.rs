//! Domain decomposition into atomistic, blending and continuum regions, and the
//! blending-function samples `β_ℓ` built from it.
//!
//! Region boundaries are given in integer site coordinates. A plateau covers the
//! closed site range `[start, end]`; a blend interval is the open range
//! `(start, end)` whose endpoints are the last/first plateau sites on either
//! side, so a blend of width `L` lattice spacings holds `L − 1` atoms.

use crate::error::{Error, Result};
use crate::lattice::{ChainConfig, PeriodicField};
use crate::scalar::Scalar;

/// Shape of the transition on a blend interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlendFamily {
    Linear,
    Cubic,
    Quintic,
    /// `β ≡ 1`: recovers the atomistic operator.
    ConstantOne,
    /// `β ≡ 0`: recovers the continuum operator.
    ConstantZero,
}

impl BlendFamily {
    pub const SPLINES: [BlendFamily; 3] = [BlendFamily::Linear, BlendFamily::Cubic, BlendFamily::Quintic];

    /// Decreasing transition profile with `s(0) = 1` and `s(1) = 0`.
    pub fn spline<T: Scalar>(self, t: T) -> T {
        let one = T::one();
        match self {
            BlendFamily::Linear => one - t,
            BlendFamily::Cubic => one + T::lit(2.0) * t * t * t - T::lit(3.0) * t * t,
            BlendFamily::Quintic => {
                let t3 = t * t * t;
                one - T::lit(6.0) * t3 * t * t + T::lit(15.0) * t3 * t - T::lit(10.0) * t3
            }
            BlendFamily::ConstantOne => one,
            BlendFamily::ConstantZero => T::zero(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BlendFamily::Linear => "linear",
            BlendFamily::Cubic => "cubic",
            BlendFamily::Quintic => "quintic",
            BlendFamily::ConstantOne => "one",
            BlendFamily::ConstantZero => "zero",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(BlendFamily::Linear),
            "cubic" => Ok(BlendFamily::Cubic),
            "quintic" => Ok(BlendFamily::Quintic),
            "one" | "constant_one" => Ok(BlendFamily::ConstantOne),
            "zero" | "constant_zero" => Ok(BlendFamily::ConstantZero),
            other => Err(Error::InvalidParameter(format!("unknown blending family '{other}'"))),
        }
    }
}

impl std::fmt::Display for BlendFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Atomistic,
    /// Atomistic on the left, continuum on the right.
    BlendDown,
    Continuum,
    /// Continuum on the left, atomistic on the right.
    BlendUp,
}

impl Region {
    fn is_blend(self) -> bool {
        matches!(self, Region::BlendDown | Region::BlendUp)
    }
}

/// One labelled piece of the periodic domain, in unwrapped site coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval {
    pub region: Region,
    pub start: i64,
    pub end: i64,
}

impl Interval {
    pub fn new(region: Region, start: i64, end: i64) -> Self {
        Self { region, start, end }
    }

    /// Sites owned by this interval (closed for plateaus, open for blends).
    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        if self.region.is_blend() {
            self.start + 1..=self.end - 1
        } else {
            self.start..=self.end
        }
    }

    /// Blend width in lattice spacings; zero for plateaus.
    pub fn width(&self) -> i64 {
        if self.region.is_blend() {
            self.end - self.start
        } else {
            0
        }
    }
}

/// A cyclic tiling of the `2M` sites into labelled intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    config: ChainConfig,
    intervals: Vec<Interval>,
}

impl Layout {
    /// Validates that `intervals`, read cyclically, tile one period exactly.
    pub fn new(config: ChainConfig, intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidLayout("no intervals".into()));
        }
        let period = config.len() as i64;
        for iv in &intervals {
            if iv.region.is_blend() {
                if iv.end - iv.start < 1 {
                    return Err(Error::InvalidLayout(format!(
                        "blend interval ({}, {}) is shorter than one lattice spacing",
                        iv.start, iv.end
                    )));
                }
            } else if iv.end < iv.start {
                return Err(Error::InvalidLayout(format!(
                    "plateau [{}, {}] is empty",
                    iv.start, iv.end
                )));
            }
        }
        let n = intervals.len();
        for i in 0..n {
            let prev = intervals[i];
            let (mut next, wraps) = (intervals[(i + 1) % n], i + 1 == n);
            if wraps {
                next.start += period;
                next.end += period;
            }
            let ok = match (prev.region.is_blend(), next.region.is_blend()) {
                (false, true) => next.start == prev.end,
                (true, false) => next.start == prev.end,
                (false, false) => next.start == prev.end + 1 && next.region != prev.region,
                (true, true) => false,
            };
            if !ok {
                return Err(Error::InvalidLayout(format!(
                    "intervals {prev:?} and {next:?} do not join"
                )));
            }
            let expected = match prev.region {
                Region::Atomistic => next.region == Region::BlendDown || next.region == Region::Continuum,
                Region::BlendDown => next.region == Region::Continuum,
                Region::Continuum => next.region == Region::BlendUp || next.region == Region::Atomistic,
                Region::BlendUp => next.region == Region::Atomistic,
            };
            if !expected {
                return Err(Error::InvalidLayout(format!(
                    "{:?} cannot be followed by {:?}",
                    prev.region, next.region
                )));
            }
        }
        let covered: i64 = intervals.iter().map(|iv| iv.sites().count() as i64).sum();
        if covered != period {
            return Err(Error::InvalidLayout(format!(
                "intervals cover {covered} sites, the chain has {period}"
            )));
        }
        Ok(Self { config, intervals })
    }

    /// Atomistic plateau `[−h, h]` centred at the origin, blend intervals of
    /// `width` spacings on both sides, continuum elsewhere.
    pub fn symmetric(config: ChainConfig, half_width: usize, width: usize) -> Result<Self> {
        Self::build(config, half_width, width, width)
    }

    /// Like [`Layout::symmetric`] but with a sharp continuum-to-atomistic jump on the left.
    pub fn one_sided(config: ChainConfig, half_width: usize, width: usize) -> Result<Self> {
        Self::build(config, half_width, width, 0)
    }

    fn build(config: ChainConfig, half_width: usize, down: usize, up: usize) -> Result<Self> {
        if down == 0 {
            return Err(Error::InvalidLayout("blend width must be at least one lattice spacing".into()));
        }
        let h = half_width as i64;
        let m = config.half_atoms() as i64;
        let (down, up) = (down as i64, up as i64);
        // continuum plateau runs from h + down to (2M − h − up) in unwrapped coordinates
        let c_start = h + down;
        let c_end = 2 * m - h - up.max(1);
        if c_end < c_start {
            return Err(Error::InvalidLayout(format!(
                "chain with M = {m} too short for atomistic half-width {h} and blend widths {down}/{up}"
            )));
        }
        let mut intervals = vec![
            Interval::new(Region::Atomistic, -h, h),
            Interval::new(Region::BlendDown, h, c_start),
            Interval::new(Region::Continuum, c_start, c_end),
        ];
        if up > 0 {
            intervals.push(Interval::new(Region::BlendUp, c_end, 2 * m - h));
        }
        Self::new(config, intervals)
    }

    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Label of every site, in storage order.
    pub fn regions(&self) -> Vec<Region> {
        let mut out = vec![Region::Continuum; self.config.len()];
        for iv in &self.intervals {
            for s in iv.sites() {
                out[self.config.slot(s)] = iv.region;
            }
        }
        out
    }
}

/// Default atomistic half-width: a quarter of the half-chain.
pub fn default_half_width(config: &ChainConfig) -> usize {
    config.half_atoms() / 4
}

/// Blending family on a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct BlendingProfile {
    pub family: BlendFamily,
    pub layout: Layout,
}

impl BlendingProfile {
    pub fn new(family: BlendFamily, layout: Layout) -> Self {
        Self { family, layout }
    }

    /// Default two-sided layout with blend width `width` lattice spacings.
    pub fn symmetric(config: ChainConfig, family: BlendFamily, width: usize) -> Result<Self> {
        Ok(Self::new(
            family,
            Layout::symmetric(config, default_half_width(&config), width)?,
        ))
    }

    pub fn one_sided(config: ChainConfig, family: BlendFamily, width: usize) -> Result<Self> {
        Ok(Self::new(
            family,
            Layout::one_sided(config, default_half_width(&config), width)?,
        ))
    }

    /// Width (in lattice spacings) of the widest blend interval.
    pub fn width(&self) -> usize {
        self.layout
            .intervals()
            .iter()
            .map(|iv| iv.width())
            .max()
            .unwrap_or(0) as usize
    }
}

/// Samples `β_ℓ` at every site of `config`.
pub fn sample_beta<T: Scalar>(profile: &BlendingProfile, config: &ChainConfig) -> Result<PeriodicField<T>> {
    if profile.layout.config() != config {
        return Err(Error::ConfigMismatch);
    }
    match profile.family {
        BlendFamily::ConstantOne => return Ok(PeriodicField::constant(*config, T::one())),
        BlendFamily::ConstantZero => return Ok(PeriodicField::zeros(*config)),
        _ => {}
    }
    let mut beta = PeriodicField::zeros(*config);
    for iv in profile.layout.intervals() {
        let width = T::from_index(iv.end - iv.start);
        for s in iv.sites() {
            let v = match iv.region {
                Region::Atomistic => T::one(),
                Region::Continuum => T::zero(),
                Region::BlendDown => profile.family.spline(T::from_index(s - iv.start) / width),
                Region::BlendUp => profile.family.spline(T::from_index(iv.end - s) / width),
            };
            beta.set(s, v);
        }
    }
    Ok(beta)
}

/// `(β_{ℓ−k} + 2β_ℓ + β_{ℓ+k}) / 4`.
#[inline]
pub fn pair_weight<T: Scalar>(beta: &PeriodicField<T>, ell: i64, k: i64) -> T {
    (beta.at(ell - k) + T::lit(2.0) * beta.at(ell) + beta.at(ell + k)) / T::lit(4.0)
}

/// Scaled sup-norms `c_j = ‖β^{(j)}‖_∞ (La)^j`, `j = 1, 2, 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeBounds<T> {
    pub c1: T,
    pub c2: T,
    pub c3: T,
}

pub fn derivative_sup_bounds<T: Scalar>(
    beta: &PeriodicField<T>,
    config: &ChainConfig,
    width: usize,
) -> Result<DerivativeBounds<T>> {
    if width == 0 {
        return Err(Error::InvalidParameter("blend width must be positive".into()));
    }
    if beta.config() != config {
        return Err(Error::ConfigMismatch);
    }
    let la = T::from_count(width) * config.spacing::<T>();
    let d1 = beta.forward_diff();
    let d2 = beta.higher_diff(2)?;
    let d3 = beta.higher_diff(3)?;
    Ok(DerivativeBounds {
        c1: d1.linf_norm() * la,
        c2: d2.linf_norm() * la * la,
        c3: d3.linf_norm() * la * la * la,
    })
}
