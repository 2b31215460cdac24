use crate::error::{Error, Result};
use crate::fit::{DataSet, Model, SymmetricBandMatrix};

/// Natural cubic spline through `(knots, values)` with second derivatives
/// `second_derivatives` at the knots (zero at both ends).
#[derive(Debug, Clone, PartialEq)]
pub struct SplineModel {
    knots: Vec<f64>,
    values: Vec<f64>,
    second_derivatives: Vec<f64>,
    lambda: f64,
}

impl SplineModel {
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn second_derivatives(&self) -> &[f64] {
        &self.second_derivatives
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.knots.len();
        self.knots
            .partition_point(|&k| k <= x)
            .saturating_sub(1)
            .min(n - 2)
    }

    /// Second derivative at `x`; piecewise linear between knots.
    pub fn eval_second_derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        let i = self.segment(x);
        let h = self.knots[i + 1] - self.knots[i];
        let t = (x - self.knots[i]) / h;
        Ok((1.0 - t) * self.second_derivatives[i] + t * self.second_derivatives[i + 1])
    }

    /// Exact `int f''(x)^2 dx` over the knot span. On each segment `f''` is
    /// linear from `a` to `b`, which integrates to `h (a^2 + a b + b^2) / 3`.
    pub fn roughness(&self) -> f64 {
        self.knots
            .windows(2)
            .zip(self.second_derivatives.windows(2))
            .map(|(k, g)| (k[1] - k[0]) * (g[0] * g[0] + g[0] * g[1] + g[1] * g[1]) / 3.0)
            .sum()
    }

    /// Penalized objective `lambda * roughness + sse` on `data`.
    pub fn objective(&self, data: &DataSet) -> Result<f64> {
        Ok(self.lambda * self.roughness() + super::sse(self, data)?)
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.domain();
        if x >= lo && x <= hi {
            Ok(())
        } else {
            Err(Error::OutOfDomain { x, lo, hi })
        }
    }
}

impl Model for SplineModel {
    fn domain(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    fn eval(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        let i = self.segment(x);
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (g0, g1) = (self.second_derivatives[i], self.second_derivatives[i + 1]);
        let h = x1 - x0;
        let left = x - x0;
        let right = x1 - x;
        let linear = (left * y1 + right * y0) / h;
        let bend = left * right / 6.0 * ((1.0 + left / h) * g1 + (1.0 + right / h) * g0);
        Ok(linear - bend)
    }
}

/// Natural cubic smoothing spline minimizing
/// `lambda * int f''(x)^2 dx + sum_i (f(x_i) - y_i)^2`.
///
/// Reinsch formulation: with `Q` the `n x (n-2)` second-difference matrix and
/// `R` the `(n-2) x (n-2)` tridiagonal Gram matrix of the hat functions,
/// the interior second derivatives solve `(R + lambda Q^T Q) gamma = Q^T y`
/// (pentadiagonal, SPD) and the fitted knot values are `g = y - lambda Q gamma`.
/// The system is assembled on `u = (x - x_1) / (x_n - x_1)` with `lambda`
/// rescaled by the cube of the span, then mapped back.
pub fn fit_smoothing_spline(data: &DataSet, lambda: f64) -> Result<SplineModel> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "smoothing parameter must be finite and non-negative, got {lambda}"
        )));
    }
    let n = data.len();
    let needed = if lambda > 0.0 { 3 } else { 2 };
    if n < needed {
        return Err(Error::InsufficientData { needed, got: n });
    }
    let x = data.x();
    let y = data.y();
    if n == 2 {
        return Ok(SplineModel {
            knots: x.to_vec(),
            values: y.to_vec(),
            second_derivatives: vec![0.0; 2],
            lambda,
        });
    }

    let span = data.span();
    let y_max = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let y_scale = if y_max > 0.0 { y_max } else { 1.0 };
    let u: Vec<f64> = x.iter().map(|xi| (xi - x[0]) / span).collect();
    let v: Vec<f64> = y.iter().map(|yi| yi / y_scale).collect();
    let h: Vec<f64> = u.windows(2).map(|w| w[1] - w[0]).collect();
    let penalty = lambda / (span * span * span);

    // Column c (interior knot c = 1..n-2) of Q holds 1/h[c-1], -(1/h[c-1] + 1/h[c]), 1/h[c]
    // on rows c-1, c, c+1.
    let q_lo = |c: usize| 1.0 / h[c - 1];
    let q_mid = |c: usize| -(1.0 / h[c - 1] + 1.0 / h[c]);
    let q_hi = |c: usize| 1.0 / h[c];

    let m = n - 2;
    let mut system = SymmetricBandMatrix::zeros(m, 2);
    let mut rhs = vec![0.0; m];
    for c in 1..=m {
        let row = c - 1;
        let (a, b, d) = (q_lo(c), q_mid(c), q_hi(c));
        system.add(
            row,
            row,
            (h[c - 1] + h[c]) / 3.0 + penalty * (a * a + b * b + d * d),
        );
        if c < m {
            let coupling = b * q_lo(c + 1) + d * q_mid(c + 1);
            system.add(row, row + 1, h[c] / 6.0 + penalty * coupling);
        }
        if c + 1 < m {
            system.add(row, row + 2, penalty * d * q_lo(c + 2));
        }
        rhs[row] = a * v[c - 1] + b * v[c] + d * v[c + 1];
    }
    let interior = system.solve(&rhs)?;

    let mut gamma = vec![0.0; n];
    gamma[1..n - 1].copy_from_slice(&interior);

    let values: Vec<f64> = if penalty == 0.0 {
        y.to_vec()
    } else {
        (0..n)
            .map(|r| {
                let mut q_gamma = 0.0;
                if r >= 1 && r + 1 < n {
                    q_gamma += q_mid(r) * gamma[r];
                }
                if r + 2 < n {
                    q_gamma += q_lo(r + 1) * gamma[r + 1];
                }
                if r >= 2 {
                    q_gamma += q_hi(r - 1) * gamma[r - 1];
                }
                (v[r] - penalty * q_gamma) * y_scale
            })
            .collect()
    };
    let curvature_scale = y_scale / (span * span);
    let second_derivatives: Vec<f64> = gamma.iter().map(|g| g * curvature_scale).collect();

    if values
        .iter()
        .chain(&second_derivatives)
        .any(|v| !v.is_finite())
    {
        return Err(Error::NonFinite("smoothing spline fit"));
    }
    Ok(SplineModel {
        knots: x.to_vec(),
        values,
        second_derivatives,
        lambda,
    })
}
