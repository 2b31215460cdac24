//! Inverse fitting of the sampled group delay.
//!
//! Two model families are provided: least-squares polynomials solved by
//! Householder QR in a conditioned coordinate, and natural cubic smoothing
//! splines minimizing `lambda * int f''^2 dx + sum (f(x_i) - y_i)^2`.

mod banded;
mod dataset;
mod polynomial;
mod spline;

pub use banded::SymmetricBandMatrix;
pub use dataset::DataSet;
pub use polynomial::{fit_polynomial, PolynomialModel};
pub use spline::{fit_smoothing_spline, SplineModel};

use crate::error::Result;

/// An evaluable `y = f(x)` model on a closed domain.
pub trait Model {
    /// Closed domain `[lo, hi]` on which the model may be evaluated.
    fn domain(&self) -> (f64, f64);

    fn eval(&self, x: f64) -> Result<f64>;

    fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        x >= lo && x <= hi
    }
}

/// Either fitted model family.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Polynomial(PolynomialModel),
    Spline(SplineModel),
}

impl Model for FittedModel {
    fn domain(&self) -> (f64, f64) {
        match self {
            FittedModel::Polynomial(p) => p.domain(),
            FittedModel::Spline(s) => s.domain(),
        }
    }

    fn eval(&self, x: f64) -> Result<f64> {
        match self {
            FittedModel::Polynomial(p) => p.eval(x),
            FittedModel::Spline(s) => s.eval(x),
        }
    }
}

impl From<PolynomialModel> for FittedModel {
    fn from(p: PolynomialModel) -> Self {
        FittedModel::Polynomial(p)
    }
}

impl From<SplineModel> for FittedModel {
    fn from(s: SplineModel) -> Self {
        FittedModel::Spline(s)
    }
}

/// Sum of squared residuals `sum (y_i - f(x_i))^2`.
pub fn sse<M: Model + ?Sized>(model: &M, data: &DataSet) -> Result<f64> {
    data.iter().try_fold(0.0, |acc, (x, y)| {
        let r = y - model.eval(x)?;
        Ok(acc + r * r)
    })
}
