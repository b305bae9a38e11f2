#![allow(dead_code)]

use bqcf::lattice::{ChainConfig, PeriodicField};
use bqcf::operators::BandedPeriodicOperator;
use bqcf::potential::PairPotential;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_field(config: ChainConfig, seed: u64) -> PeriodicField<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..config.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    PeriodicField::from_values(config, values).unwrap()
}

pub fn dense(op: &BandedPeriodicOperator<f64>) -> DMatrix<f64> {
    let rows = op.to_dense();
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

pub fn rel_gap(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(1e-300)
}

pub fn max_gap(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max)
}

/// `D^T D` for the forward difference with the lattice weight, so that
/// `v^T G v = ‖v'‖²`.
fn gram(n: usize, a: f64) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = 2.0 / a;
        g[(i, (i + 1) % n)] -= 1.0 / a;
        g[((i + 1) % n, i)] -= 1.0 / a;
    }
    g
}

/// Smallest `⟨Ku, u⟩ / ‖u'‖²` over mean-zero `u`, using the basis `e_i − e_{n−1}`.
pub fn dense_cmin(op: &BandedPeriodicOperator<f64>) -> f64 {
    let cfg = *op.config();
    let n = cfg.len();
    let a = cfg.spacing::<f64>();
    let k = dense(op);
    let ks = (&k + k.transpose()) * (0.5 * a);
    let v = DMatrix::from_fn(n, n - 1, |i, j| {
        if i == j {
            1.0
        } else if i == n - 1 {
            -1.0
        } else {
            0.0
        }
    });
    let ar = v.transpose() * ks * &v;
    let br = v.transpose() * gram(n, a) * &v;
    let l = br.cholesky().expect("gram is positive definite on the mean-zero space").l();
    let li = l.clone().try_inverse().unwrap();
    let c = &li * ar * li.transpose();
    let c = (&c + c.transpose()) * 0.5;
    c.symmetric_eigenvalues().min()
}

/// Dense LU solve of `[[K, 1], [1^T, 0]] [u; μ] = [f − mean f; 0]`.
pub fn dense_mean_zero_solve(op: &BandedPeriodicOperator<f64>, f: &PeriodicField<f64>) -> Vec<f64> {
    let n = op.config().len();
    let k = dense(op);
    let mut m = DMatrix::zeros(n + 1, n + 1);
    m.view_mut((0, 0), (n, n)).copy_from(&k);
    for i in 0..n {
        m[(i, n)] = 1.0;
        m[(n, i)] = 1.0;
    }
    let mean = f.mean();
    let rhs = DVector::from_fn(n + 1, |i, _| if i < n { f.values()[i] - mean } else { 0.0 });
    let x = m.lu().solve(&rhs).expect("bordered system is regular");
    x.as_slice()[..n].to_vec()
}

/// Closed-form coercivity constant of the linearized atomistic chain: the
/// minimum over the nonzero lattice wavenumbers of its Fourier symbol divided
/// by that of `‖u'‖²`.
pub fn atomistic_fourier_cmin<P: PairPotential<f64>>(p: &P, config: &ChainConfig, gamma: f64) -> f64 {
    let n = config.len();
    (1..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let den = (theta / 2.0).sin().powi(2);
            (1..=config.range())
                .map(|k| p.phi_xx(k as f64 * gamma) * (k as f64 * theta / 2.0).sin().powi(2))
                .sum::<f64>()
                / den
        })
        .fold(f64::INFINITY, f64::min)
}
