use crate::error::{Error, Result};
use crate::lattice::PeriodicField;
use crate::operators::{assemble_components, bilinear, LinearModel};
use crate::potential::PairPotential;
use crate::scalar::Scalar;

/// Both sides of the second-neighbour bilinear-form identity at `γ = 1`:
///
/// `⟨F₂u, u⟩ = 2 {T1 + T2 + R + S}` with
/// `T1 = 2φ''(2)‖u'‖²` and
/// `T2 = −(φ''(2)/2) a² ‖√β u''‖² + (φ''(2)/2) a² ‖√|β''| u'‖²`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionReport<T> {
    pub direct: T,
    pub t1: T,
    pub t2: T,
    pub r: T,
    pub s: T,
    pub identity: T,
    /// `|direct − identity| / max(|direct|, |identity|)`.
    pub identity_residual: T,
    /// The identity with `β''` in place of `|β''|` in `T2`.
    pub identity_signed: T,
    pub signed_residual: T,
}

impl<T: Scalar> DecompositionReport<T> {
    pub fn terms(&self) -> Vec<(&'static str, T)> {
        vec![
            ("direct", self.direct),
            ("T1", self.t1),
            ("T2", self.t2),
            ("R", self.r),
            ("S", self.s),
            ("identity", self.identity),
            ("identity_residual", self.identity_residual),
            ("identity_signed", self.identity_signed),
            ("signed_residual", self.signed_residual),
        ]
    }
}

fn relative_gap<T: Scalar>(x: T, y: T) -> T {
    let scale = x.abs().max(y.abs());
    if scale == T::zero() {
        T::zero()
    } else {
        (x - y).abs() / scale
    }
}

pub fn decompose_bilinear_n2<T: Scalar, P: PairPotential<T> + ?Sized>(
    u: &PeriodicField<T>,
    beta: &PeriodicField<T>,
    potential: &P,
) -> Result<DecompositionReport<T>> {
    u.same_chain(beta)?;
    let cfg = *u.config();
    if cfg.range() != 2 {
        return Err(Error::InvalidConfig(format!("decomposition needs N = 2, got {}", cfg.range())));
    }
    let a = cfg.spacing::<T>();
    let f2 = assemble_components(LinearModel::Blended(beta), potential, &cfg, T::one())?
        .pop()
        .expect("two components for N = 2");
    let direct = bilinear(&f2, u, u)?;

    let c = potential.phi_xx(T::lit(2.0));
    let half_c = c * T::lit(0.5);
    let up = u.forward_diff();
    let upp = u.higher_diff(2)?;
    let bp = beta.forward_diff();
    let bpp = beta.higher_diff(2)?;
    let b3 = beta.higher_diff(3)?;

    let mut beta_upp = T::zero();
    let mut curv = T::zero();
    let mut curv_signed = T::zero();
    let mut r = T::zero();
    let mut s = T::zero();
    for l in cfg.sites() {
        let (u1, u2) = (up.at(l), upp.at(l));
        beta_upp = beta_upp + beta.at(l) * u2 * u2 * a;
        curv = curv + bpp.at(l).abs() * u1 * u1 * a;
        curv_signed = curv_signed + bpp.at(l) * u1 * u1 * a;
        r = r + half_c * (u1 * b3.at(l - 1) * u.at(l - 1) - u2 * bpp.at(l) * u1 * a) * a * a * a;
        s = s + half_c * u1 * a * a * (bp.at(l) * u1 - bp.at(l - 2) * up.at(l - 2));
    }
    let a2 = a * a;
    let t1 = T::lit(2.0) * c * up.inner(&up)?;
    let t2 = -half_c * a2 * beta_upp + half_c * a2 * curv;
    let t2_signed = -half_c * a2 * beta_upp + half_c * a2 * curv_signed;
    let two = T::lit(2.0);
    let identity = two * (t1 + t2 + r + s);
    let identity_signed = two * (t1 + t2_signed + r + s);
    Ok(DecompositionReport {
        direct,
        t1,
        t2,
        r,
        s,
        identity,
        identity_residual: relative_gap(direct, identity),
        identity_signed,
        signed_residual: relative_gap(direct, identity_signed),
    })
}
