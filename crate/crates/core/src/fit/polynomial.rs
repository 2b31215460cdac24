use crate::error::{Error, Result};
use crate::fit::{DataSet, Model};

/// Least-squares polynomial `f(x) = y_scale * sum_p c_p u^p` with the
/// conditioned coordinate `u = (x - x_center) / x_half_span`.
///
/// Raw seconds-versus-hertz data spans ~14 orders of magnitude, so the fit is
/// solved on `u in [-1, 1]` with `y` normalized by its largest magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialModel {
    coefficients: Vec<f64>,
    x_center: f64,
    x_half_span: f64,
    y_scale: f64,
    domain: (f64, f64),
}

impl PolynomialModel {
    /// Builds a model from raw coefficients `a_0 .. a_m` in `x`.
    pub fn from_coefficients(coefficients: Vec<f64>, domain: (f64, f64)) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidParameter(
                "a polynomial needs at least one coefficient".into(),
            ));
        }
        if !(domain.0 <= domain.1) || !domain.0.is_finite() || !domain.1.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "invalid domain [{}, {}]",
                domain.0, domain.1
            )));
        }
        Ok(PolynomialModel {
            coefficients,
            x_center: 0.0,
            x_half_span: 1.0,
            y_scale: 1.0,
            domain,
        })
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Coefficients in the conditioned coordinate `u`, before `y_scale`.
    pub fn conditioned_coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Maps `x` into the conditioned coordinate.
    pub fn condition(&self, x: f64) -> f64 {
        (x - self.x_center) / self.x_half_span
    }

    pub fn y_scale(&self) -> f64 {
        self.y_scale
    }

    /// Coefficients `a_0 .. a_m` of the same polynomial expanded in raw `x`.
    ///
    /// Only for inspection: at high degree on microsecond spans these values
    /// are badly scaled, and evaluation always goes through the conditioned form.
    pub fn raw_coefficients(&self) -> Vec<f64> {
        let m = self.degree();
        let inv = 1.0 / self.x_half_span;
        let shift = -self.x_center * inv;
        // u = inv * x + shift; accumulate sum_p c_p u^p by Horner on polynomials in x
        let mut acc = vec![0.0; m + 1];
        for &c in self.coefficients.iter().rev() {
            let mut next = vec![0.0; m + 1];
            for (p, &a) in acc.iter().enumerate() {
                next[p] += a * shift;
                if p < m {
                    next[p + 1] += a * inv;
                }
            }
            next[0] += c;
            acc = next;
        }
        acc.iter().map(|a| a * self.y_scale).collect()
    }
}

impl Model for PolynomialModel {
    fn domain(&self) -> (f64, f64) {
        self.domain
    }

    fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain;
        if !(x >= lo && x <= hi) {
            return Err(Error::OutOfDomain { x, lo, hi });
        }
        let u = self.condition(x);
        let v = self
            .coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * u + c);
        Ok(v * self.y_scale)
    }
}

/// Least-squares polynomial of the given degree.
///
/// The Vandermonde matrix in the conditioned coordinate is reduced by
/// Householder reflections and the triangular system solved by back
/// substitution.
pub fn fit_polynomial(data: &DataSet, degree: usize) -> Result<PolynomialModel> {
    let n = data.len();
    if degree >= n {
        return Err(Error::Underdetermined { degree, points: n });
    }
    let x = data.x();
    let lo = x[0];
    let hi = x[n - 1];
    let x_center = 0.5 * (lo + hi);
    let x_half_span = 0.5 * (hi - lo);
    let y_max = data.y().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let y_scale = if y_max > 0.0 { y_max } else { 1.0 };

    let cols = degree + 1;
    // column-major Vandermonde
    let mut a: Vec<Vec<f64>> = (0..cols).map(|_| Vec::with_capacity(n)).collect();
    for &xi in x {
        let u = (xi - x_center) / x_half_span;
        let mut p = 1.0;
        for col in a.iter_mut() {
            col.push(p);
            p *= u;
        }
    }
    let mut b: Vec<f64> = data.y().iter().map(|v| v / y_scale).collect();

    householder_least_squares(&mut a, &mut b).map(|coefficients| PolynomialModel {
        coefficients,
        x_center,
        x_half_span,
        y_scale,
        domain: (lo, hi),
    })
}

/// Solves `min ||A c - b||` for a full-column-rank `A` given as columns.
/// `a` and `b` are overwritten.
fn householder_least_squares(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<Vec<f64>> {
    let cols = a.len();
    let rows = b.len();
    let mut diag = vec![0.0; cols];
    for k in 0..cols {
        let norm = a[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidInput(
                "Vandermonde matrix is rank deficient".into(),
            ));
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        // v = a_k[k..] - alpha e_1, stored in place
        a[k][k] -= alpha;
        let vnorm2: f64 = a[k][k..].iter().map(|v| v * v).sum();
        diag[k] = alpha;
        if vnorm2 == 0.0 {
            continue;
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let v = &head[k][k..];
        for col in tail.iter_mut() {
            let dot: f64 = v.iter().zip(&col[k..]).map(|(p, q)| p * q).sum();
            let s = 2.0 * dot / vnorm2;
            for (c, vi) in col[k..].iter_mut().zip(v) {
                *c -= s * vi;
            }
        }
        let dot: f64 = v.iter().zip(&b[k..rows]).map(|(p, q)| p * q).sum();
        let s = 2.0 * dot / vnorm2;
        for (c, vi) in b[k..].iter_mut().zip(v) {
            *c -= s * vi;
        }
    }
    let scale = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let mut coeffs = vec![0.0; cols];
    for k in (0..cols).rev() {
        if diag[k].abs() <= scale * 1e-14 {
            return Err(Error::InvalidInput(
                "Vandermonde matrix is rank deficient".into(),
            ));
        }
        let mut v = b[k];
        for j in k + 1..cols {
            v -= a[j][k] * coeffs[j];
        }
        coeffs[k] = v / diag[k];
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("polynomial fit"));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::sse;

    #[test]
    fn recovers_a_line() {
        let data = DataSet::from_pairs((0..5).map(|i| {
            let x = i as f64;
            (x, 2.0 * x + 1.0)
        }))
        .unwrap();
        let model = fit_polynomial(&data, 1).unwrap();
        let raw = model.raw_coefficients();
        assert!((raw[0] - 1.0).abs() < 1e-9);
        assert!((raw[1] - 2.0).abs() < 1e-9);
        assert!(sse(&model, &data).unwrap() < 1e-18);
    }

    #[test]
    fn degree_zero_is_the_mean() {
        let ys = [3.0, -1.0, 4.0, 1.5, -9.0, 2.6];
        let data =
            DataSet::from_pairs(ys.iter().enumerate().map(|(i, &y)| (i as f64 * 0.1, y))).unwrap();
        let model = fit_polynomial(&data, 0).unwrap();
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        assert!((model.eval(0.25).unwrap() - mean).abs() < 1e-13);
    }

    #[test]
    fn underdetermined_degree_rejected() {
        let data = DataSet::from_pairs([(0.0, 1.0), (1.0, 2.0), (2.0, 0.0)]).unwrap();
        assert_eq!(
            fit_polynomial(&data, 3),
            Err(Error::Underdetermined {
                degree: 3,
                points: 3
            })
        );
        assert!(fit_polynomial(&data, 2).is_ok());
    }

    #[test]
    fn raw_coefficients_evaluate() {
        let model = PolynomialModel::from_coefficients(vec![1.0, 2.0], (0.0, 10.0)).unwrap();
        assert_eq!(model.eval(3.0).unwrap(), 7.0);
        assert!(matches!(model.eval(11.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn raw_expansion_matches_conditioned_eval() {
        let data = DataSet::from_pairs(
            (0..12).map(|i| (1.0 + 0.3 * i as f64, (i as f64 * 0.7).cos() * 5.0)),
        )
        .unwrap();
        let model = fit_polynomial(&data, 4).unwrap();
        let raw = model.raw_coefficients();
        for &x in data.x() {
            let direct = raw.iter().rev().fold(0.0, |acc, c| acc * x + c);
            assert!((direct - model.eval(x).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_zero_sse() {
        let data = DataSet::from_pairs([(0.0, 3.0), (1.0, -3.0)]).unwrap();
        let zero = PolynomialModel::from_coefficients(vec![0.0], (0.0, 1.0)).unwrap();
        assert_eq!(sse(&zero, &data).unwrap(), 18.0);
    }
}
