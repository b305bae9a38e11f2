use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lattice::PeriodicField;
use crate::operators::BandedPeriodicOperator;
use crate::scalar::Scalar;

use super::bordered::{cyclic_offset, BorderedBand, BorderedFactor};

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions<T> {
    /// Target for the relative eigen-residual.
    pub tolerance: T,
    pub max_iterations: usize,
    /// Residual accepted once the iteration stops improving, which happens
    /// at the rounding floor of large chains.
    pub stagnation_accept: T,
    /// Relative width at which spectrum bisection stops.
    pub bisection_tolerance: T,
}

impl<T: Scalar> Default for EigenOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(1e-10).max(T::lit(1e3) * T::epsilon()),
            max_iterations: 10_000,
            stagnation_accept: T::lit(1e-8).max(T::lit(1e4) * T::epsilon()),
            bisection_tolerance: T::lit(500.0) * T::epsilon(),
        }
    }
}

/// Smallest eigenpair of `(K_sym, G)` on the mean-zero subspace.
///
/// `residual` is `‖P(K_sym v − λ G v)‖ / (‖G v‖ (1 + |λ|))` with `P` the
/// mean-removing projection; `eigenvector` is mean-zero with `‖v'‖ = 1`.
#[derive(Debug, Clone)]
pub struct Eigenpair<T> {
    pub value: T,
    pub eigenvector: PeriodicField<T>,
    pub iterations: usize,
    pub residual: T,
}

/// Pencil data shared by the inertia counts and the inverse iteration.
struct Pencil<T> {
    sym: BandedPeriodicOperator<T>,
    inv_a2: T,
    n: usize,
    bandwidth: usize,
}

impl<T: Scalar> Pencil<T> {
    fn new(op: &BandedPeriodicOperator<T>) -> Self {
        let a = op.config().spacing::<T>();
        Self {
            sym: op.symmetric_part(),
            inv_a2: T::one() / (a * a),
            n: op.config().len(),
            bandwidth: op.bandwidth().max(1),
        }
    }

    /// `G = DᵀD` in slot coordinates.
    #[inline]
    fn gram(&self, i: usize, j: usize) -> T {
        match cyclic_offset(i, j, self.n) {
            0 => T::lit(2.0) * self.inv_a2,
            1 | -1 => -self.inv_a2,
            _ => T::zero(),
        }
    }

    fn shifted(&self, sigma: T) -> Result<BorderedFactor<T>> {
        let b = self.sym.bandwidth() as i64;
        BorderedBand::from_cyclic(self.n, self.bandwidth, |i, j| {
            let off = cyclic_offset(i, j, self.n);
            let k = if off.abs() <= b { self.sym.coefficient(i, off) } else { T::zero() };
            k - sigma * self.gram(i, j)
        })?
        .factor()
    }

    /// Number of pencil eigenvalues below `sigma`. Nudges `sigma` downwards
    /// when elimination meets a vanishing pivot.
    fn count_below(&self, sigma: T) -> Result<usize> {
        let nudge = T::lit(64.0) * T::epsilon() * sigma.abs().max(T::one());
        let mut s = sigma;
        for _ in 0..8 {
            match self.shifted(s) {
                Ok(f) => return Ok(f.negative_count()),
                Err(Error::SingularSystem { .. }) => s = s - nudge,
                Err(e) => return Err(e),
            }
        }
        self.shifted(s).map(|f| f.negative_count())
    }

    fn apply_gram(&self, x: &[T]) -> Vec<T> {
        let n = self.n;
        (0..n)
            .map(|i| (T::lit(2.0) * x[i] - x[(i + 1) % n] - x[(i + n - 1) % n]) * self.inv_a2)
            .collect()
    }

    fn rayleigh(&self, x: &[T]) -> Result<(T, T)> {
        let cfg = *self.sym.config();
        let field = PeriodicField::from_values(cfg, x.to_vec())?;
        let kx = self.sym.apply(&field)?.into_values();
        let gx = self.apply_gram(x);
        let num: T = kx.iter().zip(x).map(|(&p, &q)| p * q).sum();
        let den: T = gx.iter().zip(x).map(|(&p, &q)| p * q).sum();
        let lambda = num / den;
        let mut r: Vec<T> = kx.iter().zip(&gx).map(|(&k, &g)| k - lambda * g).collect();
        let mean = r.iter().copied().sum::<T>() / T::from_count(self.n);
        r.iter_mut().for_each(|v| *v = *v - mean);
        let rn = r.iter().map(|&v| v * v).sum::<T>().sqrt();
        let gn = gx.iter().map(|&v| v * v).sum::<T>().sqrt();
        Ok((lambda, rn / (gn * (T::one() + lambda.abs()))))
    }
}

fn normalize_h1<T: Scalar>(p: &Pencil<T>, x: &mut [T]) {
    let mean = x.iter().copied().sum::<T>() / T::from_count(x.len());
    x.iter_mut().for_each(|v| *v = *v - mean);
    let g = p.apply_gram(x);
    let q: T = g.iter().zip(x.iter()).map(|(&a, &b)| a * b).sum();
    let s = T::one() / q.sqrt();
    x.iter_mut().for_each(|v| *v = *v * s);
}

/// Lowest Fourier mode with a small deterministic perturbation, so the start
/// vector is never orthogonal to the target eigenvector.
fn start_vector<T: Scalar>(n: usize) -> Vec<T> {
    let mut s: u64 = 0x9e37_79b9_7f4a_7c15;
    (0..n)
        .map(|i| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let noise = T::lit(((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5);
            let theta = T::lit(2.0) * T::PI() * T::from_count(i) / T::from_count(n);
            theta.sin() + T::lit(0.1) * noise
        })
        .collect()
}

/// Coercivity constant `min ⟨K u, u⟩ / ‖u'‖²` over mean-zero `u`.
///
/// The minimum is first bracketed by bisection on eigenvalue counts, then
/// refined by shifted inverse iteration just below the bracket.
pub fn coercivity_constant<T: Scalar>(op: &BandedPeriodicOperator<T>, opts: &EigenOptions<T>) -> Result<Eigenpair<T>> {
    let p = Pencil::new(op);
    let x0 = {
        let mut x = start_vector::<T>(p.n);
        normalize_h1(&p, &mut x);
        x
    };
    let (rq, _) = p.rayleigh(&x0)?;

    let unit = rq.abs().max(T::one());
    let mut hi = rq + T::lit(1e-8) * unit;
    let mut step = T::lit(1e-6) * unit;
    let mut guard = 0;
    while p.count_below(hi)? == 0 {
        hi = hi + step;
        step = step * T::lit(2.0);
        guard += 1;
        if guard > 200 {
            return Err(Error::NonConvergence { iterations: guard, residual: f64::NAN });
        }
    }
    let mut step = T::lit(0.5) * unit;
    let mut lo = hi - step;
    guard = 0;
    while p.count_below(lo)? > 0 {
        step = step * T::lit(2.0);
        lo = hi - step;
        guard += 1;
        if guard > 200 {
            return Err(Error::NonConvergence { iterations: guard, residual: f64::NAN });
        }
    }
    while hi - lo > opts.bisection_tolerance * lo.abs().max(hi.abs()).max(T::one()) {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if p.count_below(mid)? == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // back off from `lo` if the shifted matrix is numerically singular there
    let width = unit;
    let factor = [T::zero(), T::lit(1e-12), T::lit(1e-10), T::lit(1e-8), T::lit(1e-6)]
        .iter()
        .find_map(|&d| p.shifted(lo - d * width).ok())
        .ok_or(Error::NonConvergence { iterations: 0, residual: f64::NAN })?;

    const STALL_LIMIT: usize = 50;
    let mut x = x0;
    let mut best: Option<(T, T, Vec<T>, usize)> = None;
    let mut stall = 0;
    for it in 1..=opts.max_iterations {
        let gx = p.apply_gram(&x);
        let (mut y, _) = factor.solve(&gx, T::zero())?;
        normalize_h1(&p, &mut y);
        x = y;
        let (lambda, res) = p.rayleigh(&x)?;
        if res <= opts.tolerance {
            let eigenvector = PeriodicField::from_values(*op.config(), x)?;
            return Ok(Eigenpair { value: lambda, eigenvector, iterations: it, residual: res });
        }
        match &best {
            Some((_, r, _, _)) if !(res < T::lit(0.9) * *r) => stall += 1,
            _ => {
                best = Some((lambda, res, x.clone(), it));
                stall = 0;
            }
        }
        if stall >= STALL_LIMIT {
            let (lambda, res, v, it) = best.take().expect("set on the first iteration");
            if res <= opts.stagnation_accept {
                let eigenvector = PeriodicField::from_values(*op.config(), v)?;
                return Ok(Eigenpair { value: lambda, eigenvector, iterations: it, residual: res });
            }
            return Err(Error::NonConvergence { iterations: it + STALL_LIMIT, residual: res.as_f64() });
        }
    }
    let residual = best.map(|b| b.1.as_f64()).unwrap_or(f64::NAN);
    Err(Error::NonConvergence { iterations: opts.max_iterations, residual })
}

/// `true` when the quadratic form is positive definite on mean-zero fields.
pub fn is_coercive<T: Scalar>(op: &BandedPeriodicOperator<T>) -> Result<bool> {
    Ok(Pencil::new(op).count_below(T::zero())? == 0)
}

/// Largest chain handled by [`coercivity_constant_dense`].
pub const DENSE_MAX_HALF_ATOMS: usize = 256;

/// Full-spectrum reference solve in an orthonormal basis of the mean-zero
/// subspace (Householder reflection of the constant vector).
pub fn coercivity_constant_dense(op: &BandedPeriodicOperator<f64>) -> Result<Eigenpair<f64>> {
    let cfg = *op.config();
    if cfg.half_atoms() > DENSE_MAX_HALF_ATOMS {
        return Err(Error::InvalidParameter(format!(
            "dense coercivity solve limited to M ≤ {DENSE_MAX_HALF_ATOMS}"
        )));
    }
    let n = cfg.len();
    let p = Pencil::new(op);
    let k = DMatrix::from_fn(n, n, |i, j| {
        let off = cyclic_offset(i, j, n);
        if off.unsigned_abs() as usize <= p.sym.bandwidth() {
            p.sym.coefficient(i, off)
        } else {
            0.0
        }
    });
    let g = DMatrix::from_fn(n, n, |i, j| p.gram(i, j));

    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    v[0] -= 1.0;
    let vv = v.dot(&v);
    let h = DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / vv);
    let basis = h.columns(1, n - 1).into_owned();

    let kr = basis.transpose() * &k * &basis;
    let gr = basis.transpose() * &g * &basis;
    let chol = gr
        .cholesky()
        .ok_or(Error::SingularSystem { row: 0, pivot: f64::NAN })?;
    let l = chol.l();
    let linv = l
        .clone()
        .try_inverse()
        .ok_or(Error::SingularSystem { row: 0, pivot: f64::NAN })?;
    let mut c = &linv * kr * linv.transpose();
    c = (&c + c.transpose()) * 0.5;
    let eig = c.symmetric_eigen();
    let (imin, &lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty spectrum");
    let z = linv.transpose() * eig.eigenvectors.column(imin);
    let mut x: Vec<f64> = (&basis * z).iter().copied().collect();
    normalize_h1(&p, &mut x);
    let (_, residual) = p.rayleigh(&x)?;
    Ok(Eigenpair {
        value: lambda,
        eigenvector: PeriodicField::from_values(cfg, x)?,
        iterations: 0,
        residual,
    })
}
