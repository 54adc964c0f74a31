//! Banded LU factorization with partial pivoting confined to the band.
//!
//! Row `i` keeps a dense window of columns `i - kl ..= i + ku + kl`; the
//! extra `kl` columns on the right absorb the fill produced by row swaps.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub(crate) fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    #[inline]
    fn slot(&self, row: usize, col: usize) -> Option<usize> {
        let off = col as isize - row as isize + self.kl as isize;
        (off >= 0 && (off as usize) < self.width).then(|| row * self.width + off as usize)
    }

    #[inline]
    fn get(&self, row: usize, col: usize) -> f64 {
        self.slot(row, col).map_or(0.0, |k| self.data[k])
    }

    /// Stores an entry inside the original band; panics outside it.
    pub(crate) fn set(&mut self, row: usize, col: usize, value: f64) {
        let off = col as isize - row as isize;
        assert!(
            off >= -(self.kl as isize) && off <= self.ku as isize,
            "entry ({row}, {col}) outside band"
        );
        let k = self.slot(row, col).expect("band slot");
        self.data[k] = value;
    }

    /// Factorizes in place. Fails when a pivot column is numerically zero.
    pub(crate) fn factorize(mut self) -> Result<BandedLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let scale = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        let mut pivots = vec![0usize; n];
        let mut lower = vec![0.0; n * kl.max(1)];
        for i in 0..n {
            let last_row = (i + kl).min(n - 1);
            let last_col = (i + ku + kl).min(n - 1);
            let mut piv = i;
            let mut best = self.get(i, i).abs();
            for r in i + 1..=last_row {
                let v = self.get(r, i).abs();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best <= 1e-14 * scale {
                return Err(Error::CollocationSingular { row: i });
            }
            pivots[i] = piv;
            if piv != i {
                for c in i..=last_col {
                    let a = self.slot(i, c).expect("pivot row window");
                    let b = self.slot(piv, c).expect("swap row window");
                    self.data.swap(a, b);
                }
            }
            let d = self.get(i, i);
            for r in i + 1..=last_row {
                let l = self.get(r, i) / d;
                lower[i * kl + (r - i - 1)] = l;
                if l == 0.0 {
                    continue;
                }
                let k = self.slot(r, i).expect("sub-diagonal window");
                self.data[k] = 0.0;
                for c in i + 1..=last_col {
                    let u = self.get(i, c);
                    if u != 0.0 {
                        let k = self.slot(r, c).expect("update window");
                        self.data[k] -= l * u;
                    }
                }
            }
        }
        Ok(BandedLu {
            upper: self,
            lower,
            pivots,
        })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct BandedLu {
    upper: BandedMatrix,
    lower: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub(crate) fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let u = &self.upper;
        let (n, kl, ku) = (u.n, u.kl, u.ku);
        assert_eq!(rhs.len(), n);
        let mut x = rhs.to_vec();
        for i in 0..n {
            x.swap(i, self.pivots[i]);
            let xi = x[i];
            for r in i + 1..=(i + kl).min(n.saturating_sub(1)) {
                x[r] -= self.lower[i * kl + (r - i - 1)] * xi;
            }
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for c in i + 1..=(i + ku + kl).min(n - 1) {
                acc -= u.get(i, c) * x[c];
            }
            x[i] = acc / u.get(i, i);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_mul(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        a.iter()
            .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
            .collect()
    }

    #[test]
    fn solves_tridiagonal_needing_pivots() {
        let n = 7;
        let (kl, ku) = (1, 1);
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            // Tiny diagonal forces row exchanges.
            dense[i][i] = if i % 2 == 0 { 1e-3 } else { 2.0 };
            if i + 1 < n {
                dense[i][i + 1] = 1.0 + i as f64;
                dense[i + 1][i] = 3.0 - 0.5 * i as f64;
            }
        }
        let mut band = BandedMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                band.set(i, j, dense[i][j]);
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin() + 1.0).collect();
        let b = dense_mul(&dense, &x_true);
        let x = band.factorize().unwrap().solve(&b);
        for (a, e) in x.iter().zip(&x_true) {
            assert!((a - e).abs() < 1e-12, "{a} vs {e}");
        }
    }

    #[test]
    fn asymmetric_band() {
        let n = 9;
        let (kl, ku) = (2, 3);
        let mut dense = vec![vec![0.0; n]; n];
        let mut band = BandedMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let v = ((i * 7 + j * 3) % 5) as f64 - 1.5 + if i == j { 0.2 } else { 0.0 };
                dense[i][j] = v;
                band.set(i, j, v);
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| i as f64 - 4.0).collect();
        let b = dense_mul(&dense, &x_true);
        let x = band.factorize().unwrap().solve(&b);
        for (a, e) in x.iter().zip(&x_true) {
            assert!((a - e).abs() < 1e-10, "{a} vs {e}");
        }
    }

    #[test]
    fn singular_detected() {
        let mut band = BandedMatrix::zeros(3, 1, 1);
        band.set(0, 0, 1.0);
        band.set(0, 1, 1.0);
        band.set(1, 0, 1.0);
        band.set(1, 1, 1.0);
        band.set(2, 2, 1.0);
        assert!(matches!(
            band.factorize(),
            Err(Error::CollocationSingular { .. })
        ));
    }
}
