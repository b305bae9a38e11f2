//! Pivot-free band elimination of the bordered system
//!
//! ```text
//! [ A   1 ] [x]   [r]
//! [ 1ᵀ  0 ] [μ] = [s]
//! ```
//!
//! for a cyclically banded `A`. Solving it restricts `A` to the mean-zero
//! subspace without forming a basis of that subspace. Slots are taken in
//! zig-zag order (`0, n−1, 1, n−2, …`), which turns the cyclic band into an
//! ordinary band of twice the width. The last slot and the border are kept
//! as a final 2×2 block, so a singular `A` (one that annihilates constants)
//! is handled without a tiny scalar pivot.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Zig-zag order: `order[pos]` is the slot eliminated at position `pos`.
pub fn zigzag_order(n: usize) -> Vec<usize> {
    let mut order = Vec::with_capacity(n);
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        order.push(lo);
        lo += 1;
        if lo < hi {
            hi -= 1;
            order.push(hi);
        }
    }
    order
}

/// Signed offset `j − i` reduced to `(−n/2, n/2]`.
#[inline]
pub fn cyclic_offset(i: usize, j: usize, n: usize) -> i64 {
    let n = n as i64;
    let d = (j as i64 - i as i64).rem_euclid(n);
    if d > n / 2 {
        d - n
    } else {
        d
    }
}

#[derive(Debug, Clone)]
pub struct BorderedBand<T> {
    n: usize,
    width: usize,
    order: Vec<usize>,
    band: Vec<T>,
    border_col: Vec<T>,
    border_row: Vec<T>,
    corner: T,
    scale: T,
}

impl<T: Scalar> BorderedBand<T> {
    /// Assembles the bordered matrix from `entry(i, j)`, called for every slot
    /// pair within cyclic distance `bandwidth`.
    pub fn from_cyclic(n: usize, bandwidth: usize, entry: impl Fn(usize, usize) -> T) -> Result<Self> {
        if n < 3 || 2 * bandwidth >= n {
            return Err(Error::InvalidParameter(format!(
                "bordered band needs n ≥ 3 and 2·bandwidth < n (n = {n}, bandwidth = {bandwidth})"
            )));
        }
        let order = zigzag_order(n);
        let mut pos = vec![0usize; n];
        for (p, &s) in order.iter().enumerate() {
            pos[s] = p;
        }
        let b = bandwidth as i64;
        let mut width = 0usize;
        for i in 0..n {
            for d in -b..=b {
                let j = (i as i64 + d).rem_euclid(n as i64) as usize;
                width = width.max(pos[i].abs_diff(pos[j]));
            }
        }
        let stride = 2 * width + 1;
        let mut band = vec![T::zero(); n * stride];
        let mut scale = T::zero();
        for i in 0..n {
            for d in -b..=b {
                let j = (i as i64 + d).rem_euclid(n as i64) as usize;
                let v = entry(i, j);
                scale = scale.max(v.abs());
                band[pos[i] * stride + (pos[j] + width - pos[i])] = v;
            }
        }
        Ok(Self {
            n,
            width,
            order,
            band,
            border_col: vec![T::one(); n],
            border_row: vec![T::one(); n],
            corner: T::zero(),
            scale,
        })
    }

    /// Half bandwidth after reordering.
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (2 * self.width + 1) + (j + self.width - i)
    }

    /// Eliminates all slots but the last; fails on a pivot below `16 ε · max|entry|`.
    pub fn factor(mut self) -> Result<BorderedFactor<T>> {
        let n = self.n;
        let w = self.width;
        let floor = T::lit(16.0) * T::epsilon() * self.scale;
        for k in 0..n - 1 {
            let p = self.band[self.idx(k, k)];
            if !(p.abs() > floor) {
                return Err(Error::SingularSystem { row: k, pivot: p.as_f64() });
            }
            let hi = (k + w).min(n - 1);
            for i in k + 1..=hi {
                let ik = self.idx(i, k);
                let aik = self.band[ik];
                if aik == T::zero() {
                    continue;
                }
                let l = aik / p;
                self.band[ik] = l;
                for j in k + 1..=hi {
                    let kj = self.band[self.idx(k, j)];
                    let ij = self.idx(i, j);
                    self.band[ij] = self.band[ij] - l * kj;
                }
                self.border_col[i] = self.border_col[i] - l * self.border_col[k];
            }
            let lb = self.border_row[k] / p;
            for j in k + 1..=hi {
                let kj = self.band[self.idx(k, j)];
                self.border_row[j] = self.border_row[j] - lb * kj;
            }
            self.corner = self.corner - lb * self.border_col[k];
            self.border_row[k] = lb;
        }
        let last = n - 1;
        let block = [
            [self.band[self.idx(last, last)], self.border_col[last]],
            [self.border_row[last], self.corner],
        ];
        Ok(BorderedFactor { inner: self, block })
    }
}

#[derive(Debug, Clone)]
pub struct BorderedFactor<T> {
    inner: BorderedBand<T>,
    block: [[T; 2]; 2],
}

impl<T: Scalar> BorderedFactor<T> {
    /// For a symmetric input: the number of negative eigenvalues of `A`
    /// restricted to the mean-zero subspace (Sylvester inertia of the bordered
    /// matrix, minus the one negative direction the border contributes).
    pub fn negative_count(&self) -> usize {
        let f = &self.inner;
        let mut neg = (0..f.n - 1).filter(|&k| f.band[f.idx(k, k)] < T::zero()).count();
        let [[x, y], [_, z]] = self.block;
        let half = T::lit(0.5);
        let t = (x + z) * half;
        let r = ((x - z) * half).hypot(y);
        neg += usize::from(t - r < T::zero()) + usize::from(t + r < T::zero());
        neg.saturating_sub(1)
    }

    /// Solves the bordered system; `rhs` is indexed by slot.
    pub fn solve(&self, rhs: &[T], border: T) -> Result<(Vec<T>, T)> {
        let f = &self.inner;
        let n = f.n;
        let w = f.width;
        if rhs.len() != n {
            return Err(Error::ConfigMismatch);
        }
        let mut y: Vec<T> = f.order.iter().map(|&s| rhs[s]).collect();
        let mut yb = border;
        for k in 0..n - 1 {
            let yk = y[k];
            let hi = (k + w).min(n - 1);
            for i in k + 1..=hi {
                y[i] = y[i] - f.band[f.idx(i, k)] * yk;
            }
            yb = yb - f.border_row[k] * yk;
        }
        let [[a, b], [c, d]] = self.block;
        let det = a * d - b * c;
        if !(det.abs() > T::lit(16.0) * T::epsilon() * ((a * d).abs() + (b * c).abs())) {
            return Err(Error::SingularSystem { row: n - 1, pivot: det.as_f64() });
        }
        let last = (d * y[n - 1] - b * yb) / det;
        let mu = (a * yb - c * y[n - 1]) / det;
        y[n - 1] = last;
        for k in (0..n - 1).rev() {
            let hi = (k + w).min(n - 1);
            let mut s = y[k] - f.border_col[k] * mu;
            for j in k + 1..=hi {
                s = s - f.band[f.idx(k, j)] * y[j];
            }
            y[k] = s / f.band[f.idx(k, k)];
        }
        let mut x = vec![T::zero(); n];
        for (p, &s) in f.order.iter().enumerate() {
            x[s] = y[p];
        }
        Ok((x, mu))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(seed: u64) -> impl FnMut() -> f64 {
        let mut s = seed;
        move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        }
    }

    fn dense_cyclic(n: usize, b: usize, seed: u64, symmetric: bool) -> Vec<Vec<f64>> {
        let mut r = lcg(seed);
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for d in -(b as i64)..=(b as i64) {
                let j = (i as i64 + d).rem_euclid(n as i64) as usize;
                a[i][j] = r() + if i == j { 4.0 } else { 0.0 };
            }
        }
        if symmetric {
            for i in 0..n {
                for j in 0..i {
                    let m = 0.5 * (a[i][j] + a[j][i]);
                    a[i][j] = m;
                    a[j][i] = m;
                }
            }
        }
        a
    }

    #[test]
    fn zigzag_is_a_permutation() {
        for n in 3..20 {
            let mut o = zigzag_order(n);
            o.sort_unstable();
            assert_eq!(o, (0..n).collect::<Vec<_>>());
        }
        assert_eq!(zigzag_order(5), vec![0, 4, 1, 3, 2]);
    }

    #[test]
    fn reordered_width_is_twice_the_cyclic_band() {
        let band = BorderedBand::<f64>::from_cyclic(40, 3, |_, _| 1.0).unwrap();
        assert_eq!(band.width(), 6);
    }

    #[test]
    fn solve_matches_dense_residual() {
        let n = 23;
        let a = dense_cyclic(n, 2, 7, false);
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let f = BorderedBand::from_cyclic(n, 2, |i, j| a[i][j]).unwrap().factor().unwrap();
        let (x, mu) = f.solve(&rhs, 0.25).unwrap();
        for i in 0..n {
            let ax: f64 = (0..n).map(|j| a[i][j] * x[j]).sum();
            assert!((ax + mu - rhs[i]).abs() < 1e-12, "row {i}");
        }
        assert!((x.iter().sum::<f64>() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn singular_laplacian_is_handled_by_the_final_block() {
        let n = 16;
        let lap = |i: usize, j: usize| match cyclic_offset(i, j, n) {
            0 => 2.0,
            1 | -1 => -1.0,
            _ => 0.0,
        };
        let f = BorderedBand::from_cyclic(n, 1, lap).unwrap().factor().unwrap();
        assert_eq!(f.negative_count(), 0);
        let rhs: Vec<f64> = (0..n).map(|i| if i == 3 { 1.0 } else if i == 9 { -1.0 } else { 0.0 }).collect();
        let (x, mu) = f.solve(&rhs, 0.0).unwrap();
        assert!(mu.abs() < 1e-12);
        for i in 0..n {
            let ax: f64 = (0..n).map(|j| lap(i, j) * x[j]).sum();
            assert!((ax - rhs[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn inertia_counts_shifted_laplacian() {
        // eigenvalues on the mean-zero subspace: 2 − 2cos(2πk/n), k = 1..n−1
        let n = 12;
        let eig: Vec<f64> = (1..n).map(|k| 2.0 - 2.0 * (2.0 * std::f64::consts::PI * k as f64 / n as f64).cos()).collect();
        for sigma in [0.1, 0.5, 1.2, 2.5, 3.3, 4.5] {
            let f = BorderedBand::from_cyclic(n, 1, |i, j| match cyclic_offset(i, j, n) {
                0 => 2.0 - sigma,
                1 | -1 => -1.0,
                _ => 0.0,
            })
            .unwrap()
            .factor()
            .unwrap();
            let expect = eig.iter().filter(|&&l| l < sigma).count();
            assert_eq!(f.negative_count(), expect, "sigma {sigma}");
        }
    }

    #[test]
    fn rejects_oversized_band() {
        assert!(BorderedBand::<f64>::from_cyclic(6, 3, |_, _| 0.0).is_err());
    }
}
