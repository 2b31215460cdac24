use crate::error::{Error, Result};

/// Symmetric positive-definite band matrix stored by diagonals:
/// `diagonals[d][i] = A[i][i + d]` for `d <= bandwidth`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricBandMatrix {
    n: usize,
    diagonals: Vec<Vec<f64>>,
}

impl SymmetricBandMatrix {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let diagonals = (0..=bandwidth)
            .map(|d| vec![0.0; n.saturating_sub(d)])
            .collect();
        SymmetricBandMatrix { n, diagonals }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.diagonals.len() - 1
    }

    /// Element `A[i][j]`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.diagonals
            .get(hi - lo)
            .and_then(|diag| diag.get(lo))
            .copied()
            .unwrap_or(0.0)
    }

    /// Adds `value` to `A[i][j]` (and, by symmetry, `A[j][i]`).
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.diagonals[hi - lo][lo] += value;
    }

    /// Solves `A x = b` by banded Cholesky factorization.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let bw = self.bandwidth();
        if rhs.len() != n {
            return Err(Error::InvalidInput(format!(
                "right-hand side has {} entries for a {n}x{n} system",
                rhs.len()
            )));
        }
        // l[i][d] = L[i][i - d]
        let mut l = vec![vec![0.0; bw + 1]; n];
        for j in 0..n {
            let first = j.saturating_sub(bw);
            let mut diag = self.get(j, j);
            for k in first..j {
                diag -= l[j][j - k] * l[j][j - k];
            }
            if !(diag > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "band matrix is not positive definite (pivot {j} = {diag:e})"
                )));
            }
            let ljj = diag.sqrt();
            l[j][0] = ljj;
            for i in j + 1..n.min(j + bw + 1) {
                let mut v = self.get(i, j);
                for k in i.saturating_sub(bw)..j {
                    v -= l[i][i - k] * l[j][j - k];
                }
                l[i][i - j] = v / ljj;
            }
        }

        let mut z = rhs.to_vec();
        for i in 0..n {
            for k in i.saturating_sub(bw)..i {
                z[i] -= l[i][i - k] * z[k];
            }
            z[i] /= l[i][0];
        }
        for i in (0..n).rev() {
            for k in i + 1..n.min(i + bw + 1) {
                z[i] -= l[k][k - i] * z[k];
            }
            z[i] /= l[i][0];
        }
        Ok(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_pentadiagonal_system() {
        let n = 7;
        let mut a = SymmetricBandMatrix::zeros(n, 2);
        for i in 0..n {
            a.add(i, i, 6.0 + i as f64);
            if i + 1 < n {
                a.add(i, i + 1, -1.5);
            }
            if i + 2 < n {
                a.add(i + 2, i, 0.5);
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64).sin() + 0.3).collect();
        let b: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| a.get(i, j) * x_true[j]).sum())
            .collect();
        let x = a.solve(&b).unwrap();
        for (got, want) in x.iter().zip(&x_true) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn indefinite_matrix_is_reported() {
        let mut a = SymmetricBandMatrix::zeros(2, 1);
        a.add(0, 0, 1.0);
        a.add(1, 1, 1.0);
        a.add(0, 1, 2.0);
        assert!(a.solve(&[1.0, 1.0]).is_err());
    }
}
