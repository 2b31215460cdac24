//! Gauss error function.
//!
//! Power series around the origin for `|x| <= 3`, Lentz-evaluated continued
//! fraction for `erfc` beyond that. Absolute error stays below `1e-10` on
//! `[-6, 6]` (in practice a few ulps of 1). The odd symmetry is exact: the
//! magnitude is computed from `|x|` and the sign reattached.

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;
const SERIES_LIMIT: f64 = 3.0;
const SATURATION: f64 = 6.5;

/// The Gauss error function `erf(x) = 2/sqrt(pi) * int_0^x exp(-t^2) dt`.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let magnitude = if ax <= SERIES_LIMIT {
        erf_series(ax)
    } else if ax < SATURATION {
        1.0 - erfc_continued_fraction(ax)
    } else {
        1.0
    };
    magnitude.copysign(x)
}

/// `erf(x) = 2/sqrt(pi) * sum_n (-1)^n x^(2n+1) / (n! (2n+1))`.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    // term_n = (-1)^n x^(2n+1) / n!
    let mut term = x;
    let mut sum = x;
    let mut n = 0u32;
    loop {
        n += 1;
        term *= -x2 / f64::from(n);
        let contribution = term / f64::from(2 * n + 1);
        sum += contribution;
        if contribution.abs() <= f64::EPSILON * 1e-3 * sum.abs() || n > 200 {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// Complementary error function for `x > 0` via
/// `erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    // Modified Lentz on b0 + a1/(b1 + a2/(b2 + ...)) with b_j = x, a_j = j/2.
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for j in 1..500 {
        let a = f64::from(j) * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (std::f64::consts::PI.sqrt() * f)
}
