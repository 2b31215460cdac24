//! Reference computations for tests.
//!
//! Everything here is written from the textbook definitions and shares no
//! code path with `nlfm-core`: brute-force correlation, normal equations with
//! explicit elimination, a finite-difference discretization of the smoothing
//! objective, a tridiagonal interpolating spline and plain quadrature.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (2n+1)!!`; every term
/// is positive, so there is no cancellation anywhere on the real line.
pub fn erf_series(x: f64) -> f64 {
    let ax = x.abs();
    let x2 = ax * ax;
    let mut term = ax;
    let mut sum = ax;
    let mut n = 0.0;
    while term > sum * 1e-18 {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
    }
    (std::f64::consts::FRAC_2_SQRT_PI * (-x2).exp() * sum).copysign(x)
}

/// `R(k) = sum_n x[n] conj(x[n - k])` for `k = -(N-1) .. N-1`, by direct summation.
pub fn direct_autocorrelation(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len() as isize;
    (-(n - 1)..n)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let j = i - k;
                if j >= 0 && j < n {
                    acc += x[i as usize] * x[j as usize].conj();
                }
            }
            acc
        })
        .collect()
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// Dense Gaussian elimination with partial pivoting.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= factor * src;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Least-squares polynomial coefficients in `u = (x - c)/h` (with
/// `c`, `h` the midpoint and half-width of the x range) for `y / y_scale`,
/// from the normal equations `(V^T V) a = V^T y`.
pub fn normal_equations_polyfit(x: &[f64], y: &[f64], degree: usize, y_scale: f64) -> Vec<f64> {
    let lo = x[0];
    let hi = x[x.len() - 1];
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let cols = degree + 1;
    let mut gram = vec![vec![0.0; cols]; cols];
    let mut rhs = vec![0.0; cols];
    for (&xi, &yi) in x.iter().zip(y) {
        let u = (xi - c) / h;
        let powers: Vec<f64> = (0..cols).map(|p| u.powi(p as i32)).collect();
        for r in 0..cols {
            rhs[r] += powers[r] * yi / y_scale;
            for s in 0..cols {
                gram[r][s] += powers[r] * powers[s];
            }
        }
    }
    solve_dense(gram, rhs)
}

/// Solves a general band system (lower and upper bandwidth `bw`) by
/// elimination without pivoting; `a[i]` holds columns `i - bw ..= i + bw`.
fn solve_band_general(mut a: Vec<Vec<f64>>, mut b: Vec<f64>, bw: usize) -> Vec<f64> {
    let n = b.len();
    let idx = |i: usize, j: usize| j + bw - i;
    for col in 0..n {
        let piv = a[col][idx(col, col)];
        for row in col + 1..n.min(col + bw + 1) {
            let factor = a[row][idx(row, col)] / piv;
            for k in col..n.min(col + bw + 1) {
                let v = a[col][idx(col, k)];
                a[row][idx(row, k)] -= factor * v;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n.min(row + bw + 1) {
            s -= a[row][idx(row, k)] * x[k];
        }
        x[row] = s / a[row][idx(row, row)];
    }
    x
}

/// Finite-difference smoothing oracle.
///
/// Discretizes `f` on `grid_points` uniform nodes spanning `[x_1, x_n]`
/// (every `x_i` must be a node: `x_i = x_1 + node_i * h`), and minimizes
/// `lambda * sum_j ((f_{j-1} - 2 f_j + f_{j+1}) / h^2)^2 h + sum_i (f(node_i) - y_i)^2`
/// through its linear stationarity conditions. Returns `f` at the data nodes.
pub fn fd_smoothing_oracle(
    nodes: &[usize],
    y: &[f64],
    h: f64,
    grid_points: usize,
    lambda: f64,
) -> Vec<f64> {
    let g = grid_points;
    let bw = 2;
    let mut a = vec![vec![0.0; 2 * bw + 1]; g];
    let mut rhs = vec![0.0; g];
    let idx = |i: usize, j: usize| j + bw - i;
    let weight = lambda / (h * h * h);
    for j in 1..g - 1 {
        let stencil = [(j - 1, 1.0), (j, -2.0), (j + 1, 1.0)];
        for &(r, cr) in &stencil {
            for &(s, cs) in &stencil {
                a[r][idx(r, s)] += weight * cr * cs;
            }
        }
    }
    for (&node, &yi) in nodes.iter().zip(y) {
        a[node][idx(node, node)] += 1.0;
        rhs[node] += yi;
    }
    let f = solve_band_general(a, rhs, bw);
    nodes.iter().map(|&n| f[n]).collect()
}

/// [`fd_smoothing_oracle`] Richardson-extrapolated over the grid and its
/// halved-step refinement, cancelling the `O(h^2)` discretization error while
/// keeping both systems small enough to stay clear of roundoff.
pub fn fd_smoothing_oracle_extrapolated(
    nodes: &[usize],
    y: &[f64],
    h: f64,
    grid_points: usize,
    lambda: f64,
) -> Vec<f64> {
    let coarse = fd_smoothing_oracle(nodes, y, h, grid_points, lambda);
    let fine_nodes: Vec<usize> = nodes.iter().map(|&n| 2 * n).collect();
    let fine = fd_smoothing_oracle(&fine_nodes, y, h / 2.0, 2 * grid_points - 1, lambda);
    fine.iter()
        .zip(&coarse)
        .map(|(f, c)| (4.0 * f - c) / 3.0)
        .collect()
}

/// Natural cubic interpolating spline (second derivatives from the classic
/// tridiagonal system, Thomas algorithm), evaluated at `t`.
pub fn natural_spline_interpolate(x: &[f64], y: &[f64], t: f64) -> f64 {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let mut m = vec![0.0; n];
    if n > 2 {
        let k = n - 2;
        let mut diag: Vec<f64> = (1..n - 1).map(|i| 2.0 * (h[i - 1] + h[i])).collect();
        let off: Vec<f64> = (1..n - 2).map(|i| h[i]).collect();
        let mut d: Vec<f64> = (1..n - 1)
            .map(|i| 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]))
            .collect();
        for i in 1..k {
            let w = off[i - 1] / diag[i - 1];
            diag[i] -= w * off[i - 1];
            d[i] -= w * d[i - 1];
        }
        m[k] = d[k - 1] / diag[k - 1];
        for i in (0..k - 1).rev() {
            m[i + 1] = (d[i] - off[i] * m[i + 2]) / diag[i];
        }
    }
    let i = (0..n - 1).find(|&i| t <= x[i + 1]).unwrap_or(n - 2);
    let a = x[i + 1] - t;
    let b = t - x[i];
    let hi = h[i];
    m[i] * a * a * a / (6.0 * hi)
        + m[i + 1] * b * b * b / (6.0 * hi)
        + (y[i] / hi - m[i] * hi / 6.0) * a
        + (y[i + 1] / hi - m[i + 1] * hi / 6.0) * b
}

/// Composite Simpson rule with `panels` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels + panels % 2;
    let h = (b - a) / panels as f64;
    let inner: f64 = (1..panels)
        .map(|i| {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            w * f(a + i as f64 * h)
        })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

/// Random unit-magnitude complex samples.
pub fn random_phasors(n: usize, rng: &mut StdRng) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            Complex64::from_polar(
                1.0,
                rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            )
        })
        .collect()
}

/// Random dataset on grid nodes: returns `(nodes, x, y)` with `n` strictly
/// increasing nodes in `0..grid_points` including both ends.
pub fn random_grid_data(
    n: usize,
    grid_points: usize,
    x0: f64,
    span: f64,
    rng: &mut StdRng,
) -> (Vec<usize>, Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0, grid_points - 1];
    while nodes.len() < n {
        let c = rng.gen_range(1..grid_points - 1);
        if !nodes.contains(&c) {
            nodes.push(c);
        }
    }
    nodes.sort_unstable();
    let h = span / (grid_points - 1) as f64;
    let x: Vec<f64> = nodes.iter().map(|&k| x0 + k as f64 * h).collect();
    let y: Vec<f64> = x
        .iter()
        .map(|&xi| {
            let s = (xi - x0) / span;
            (5.0 * s).sin() + 0.5 * s + rng.gen_range(-0.3..0.3)
        })
        .collect();
    (nodes, x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erf_series_known_value() {
        assert!((erf_series(1.0) - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!((erf_series(6.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn textbook_spline_interpolates() {
        let x = [0.0, 1.0, 2.5, 3.0, 4.2];
        let y = [1.0, -1.0, 0.5, 2.0, 0.0];
        for (xi, yi) in x.iter().zip(&y) {
            assert!((natural_spline_interpolate(&x, &y, *xi) - yi).abs() < 1e-12);
        }
    }

    #[test]
    fn dense_solver() {
        let a = vec![
            vec![0.0, 2.0, 1.0],
            vec![1.0, 1.0, 0.0],
            vec![3.0, 0.0, 1.0],
        ];
        let x = solve_dense(a, vec![5.0, 3.0, 4.0]);
        for (got, want) in x.iter().zip([1.0, 2.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
