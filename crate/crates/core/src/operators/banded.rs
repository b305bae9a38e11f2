use std::io::Write;

use crate::error::{Error, Result};
use crate::lattice::{ChainConfig, PeriodicField};
use crate::scalar::Scalar;

/// A `2M × 2M` periodic operator whose row `ℓ` couples `u_{ℓ−b} … u_{ℓ+b}`.
///
/// Off-diagonal coefficients are stored per offset. The diagonal is kept
/// implicitly through the row sums, so `apply` evaluates
/// `Σ_{j≠0} d_j (u_{ℓ+j} − u_ℓ) + r_ℓ u_ℓ`; operators assembled from
/// difference stencils have `r ≡ 0` and annihilate constants exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedPeriodicOperator<T> {
    config: ChainConfig,
    bandwidth: usize,
    /// `offdiag[b + j][slot]` for `j ∈ −b..=b`; the `j = 0` row is unused and kept at zero.
    offdiag: Vec<Vec<T>>,
    row_sums: Vec<T>,
}

impl<T: Scalar> BandedPeriodicOperator<T> {
    /// Zero operator that annihilates constants.
    pub fn zeros(config: ChainConfig, bandwidth: usize) -> Result<Self> {
        if 2 * bandwidth >= config.len() {
            return Err(Error::InvalidParameter(format!(
                "bandwidth {bandwidth} does not fit a chain of {} atoms",
                config.len()
            )));
        }
        let n = config.len();
        Ok(Self {
            config,
            bandwidth,
            offdiag: vec![vec![T::zero(); n]; 2 * bandwidth + 1],
            row_sums: vec![T::zero(); n],
        })
    }

    /// Builds from full coefficient rows `diagonals[b + j][slot]`, diagonal included.
    pub fn from_diagonals(config: ChainConfig, diagonals: Vec<Vec<T>>) -> Result<Self> {
        if diagonals.len() % 2 == 0 || diagonals.iter().any(|d| d.len() != config.len()) {
            return Err(Error::InvalidParameter("malformed diagonal storage".into()));
        }
        let b = diagonals.len() / 2;
        let mut op = Self::zeros(config, b)?;
        for p in 0..config.len() {
            op.row_sums[p] = diagonals.iter().map(|d| d[p]).sum();
        }
        for (idx, d) in diagonals.into_iter().enumerate() {
            if idx != b {
                op.offdiag[idx] = d;
            }
        }
        Ok(op)
    }

    #[inline]
    pub fn config(&self) -> &ChainConfig {
        &self.config
    }

    #[inline]
    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    /// Adds `value` at `(slot, slot + offset)`, keeping the row sum unchanged
    /// (the diagonal absorbs `−value`).
    #[inline]
    pub(crate) fn add_difference(&mut self, slot: usize, offset: i64, value: T) {
        debug_assert!(offset != 0 && offset.unsigned_abs() as usize <= self.bandwidth);
        let idx = (self.bandwidth as i64 + offset) as usize;
        self.offdiag[idx][slot] = self.offdiag[idx][slot] + value;
    }

    /// Coefficient of `u_{ℓ+offset}` in row `slot`.
    pub fn coefficient(&self, slot: usize, offset: i64) -> T {
        let b = self.bandwidth as i64;
        if offset.abs() > b {
            return T::zero();
        }
        if offset != 0 {
            return self.offdiag[(b + offset) as usize][slot];
        }
        let off: T = (-b..=b)
            .filter(|&j| j != 0)
            .map(|j| self.offdiag[(b + j) as usize][slot])
            .sum();
        self.row_sums[slot] - off
    }

    /// All `2b + 1` coefficient sequences, offset `−b` first.
    pub fn diagonals(&self) -> Vec<Vec<T>> {
        let b = self.bandwidth as i64;
        (-b..=b)
            .map(|j| (0..self.config.len()).map(|p| self.coefficient(p, j)).collect())
            .collect()
    }

    pub fn row_sums(&self) -> &[T] {
        &self.row_sums
    }

    /// Matrix-vector product with periodic wraparound.
    pub fn apply(&self, u: &PeriodicField<T>) -> Result<PeriodicField<T>> {
        if *u.config() != self.config {
            return Err(Error::ConfigMismatch);
        }
        let n = self.config.len();
        let b = self.bandwidth as i64;
        let x = u.values();
        let mut y = vec![T::zero(); n];
        for (p, out) in y.iter_mut().enumerate() {
            let up = x[p];
            let mut acc = T::zero();
            for j in (-b..=b).filter(|&j| j != 0) {
                let q = (p as i64 + j).rem_euclid(n as i64) as usize;
                acc = acc + self.offdiag[(b + j) as usize][p] * (x[q] - up);
            }
            *out = acc + self.row_sums[p] * up;
        }
        PeriodicField::from_values(self.config, y)
    }

    pub fn transpose(&self) -> Self {
        let n = self.config.len();
        let b = self.bandwidth as i64;
        let full = self.diagonals();
        // (Kᵀ)[p][p + j] = K[p + j][p], i.e. offset −j in row p + j
        let diagonals: Vec<Vec<T>> = (-b..=b)
            .map(|j| {
                (0..n)
                    .map(|p| {
                        let q = (p as i64 + j).rem_euclid(n as i64) as usize;
                        full[(b - j) as usize][q]
                    })
                    .collect()
            })
            .collect();
        Self::from_diagonals(self.config, diagonals).expect("transpose keeps the shape")
    }

    /// `(K + Kᵀ)/2`.
    pub fn symmetric_part(&self) -> Self {
        let t = self.transpose();
        let half = T::lit(0.5);
        let diagonals = self
            .diagonals()
            .into_iter()
            .zip(t.diagonals())
            .map(|(a, b)| a.into_iter().zip(b).map(|(x, y)| half * (x + y)).collect())
            .collect();
        Self::from_diagonals(self.config, diagonals).expect("symmetric part keeps the shape")
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.config != other.config {
            return Err(Error::ConfigMismatch);
        }
        let b = self.bandwidth.max(other.bandwidth);
        let mut out = Self::zeros(self.config, b)?;
        for src in [self, other] {
            let sb = src.bandwidth as i64;
            for j in (-sb..=sb).filter(|&j| j != 0) {
                for p in 0..self.config.len() {
                    out.add_difference(p, j, src.offdiag[(sb + j) as usize][p]);
                }
            }
            for p in 0..self.config.len() {
                out.row_sums[p] = out.row_sums[p] + src.row_sums[p];
            }
        }
        Ok(out)
    }

    /// Largest `|coefficient(ℓ, j) − other.coefficient(ℓ, j)|` over all rows and offsets.
    pub fn max_coefficient_gap(&self, other: &Self) -> T {
        let b = self.bandwidth.max(other.bandwidth) as i64;
        let mut gap = T::zero();
        for p in 0..self.config.len() {
            for j in -b..=b {
                gap = gap.max((self.coefficient(p, j) - other.coefficient(p, j)).abs());
            }
        }
        gap
    }

    /// Dense row-major materialization.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.config.len();
        let b = self.bandwidth as i64;
        let mut out = vec![vec![T::zero(); n]; n];
        for (p, row) in out.iter_mut().enumerate() {
            for j in -b..=b {
                let q = (p as i64 + j).rem_euclid(n as i64) as usize;
                row[q] = row[q] + self.coefficient(p, j);
            }
        }
        out
    }

    /// Writes the dense matrix as CSV, one row per line, `2M` columns.
    pub fn write_dense_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        for row in self.to_dense() {
            w.write_record(row.iter().map(|v| format!("{:?}", v.as_f64())))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `⟨K u, v⟩` with the lattice inner product.
pub fn bilinear<T: Scalar>(
    op: &BandedPeriodicOperator<T>,
    u: &PeriodicField<T>,
    v: &PeriodicField<T>,
) -> Result<T> {
    op.apply(u)?.inner(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_op(config: ChainConfig, b: usize, seed: u64) -> BandedPeriodicOperator<f64> {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let diagonals = (0..2 * b + 1)
            .map(|_| (0..config.len()).map(|_| next()).collect())
            .collect();
        BandedPeriodicOperator::from_diagonals(config, diagonals).unwrap()
    }

    #[test]
    fn round_trips_full_diagonals() {
        let c = ChainConfig::new(5, 2).unwrap();
        let op = random_op(c, 2, 7);
        let again = BandedPeriodicOperator::from_diagonals(c, op.diagonals()).unwrap();
        assert!(op.max_coefficient_gap(&again) < 1e-15);
    }

    #[test]
    fn transpose_matches_dense() {
        let c = ChainConfig::new(6, 3).unwrap();
        let op = random_op(c, 3, 11);
        let d = op.to_dense();
        let t = op.transpose().to_dense();
        for i in 0..c.len() {
            for j in 0..c.len() {
                assert!((d[i][j] - t[j][i]).abs() < 1e-14);
            }
        }
        let s = op.symmetric_part().to_dense();
        for i in 0..c.len() {
            for j in 0..c.len() {
                assert!((s[i][j] - s[j][i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_oversized_band() {
        let c = ChainConfig::new(2, 1).unwrap();
        assert!(BandedPeriodicOperator::<f64>::zeros(c, 2).is_err());
    }

    #[test]
    fn dense_csv_shape() {
        let c = ChainConfig::new(3, 1).unwrap();
        let op = random_op(c, 1, 3);
        let mut buf = Vec::new();
        op.write_dense_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.split(',').count() == 6));
        let parsed: f64 = rows[0].split(',').next().unwrap().parse().unwrap();
        assert_eq!(parsed, op.coefficient(0, 0));
    }
}
