//! Spectral windows used as the target power spectral density, their
//! closed-form group-delay functions and the sampled inversion dataset.
//!
//! The group delay `T_g(f)` is the running integral of the window across the
//! band, normalized so that `T_g(-B/2) = -T/2` and `T_g(B/2) = T/2`. Its
//! inverse is the instantaneous-frequency law of the pulse.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::erf::erf;
use crate::error::{Error, Result};

/// Default Gaussian taper constant: `16 ln(100)`, which puts the band edges
/// at `w(±B/2) = 0.01` (-40 dB).
pub const DEFAULT_GAUSSIAN_K: f64 = 73.682_722_975_809_47;
pub const DEFAULT_TAYLOR_NBAR: usize = 5;
pub const DEFAULT_TAYLOR_ETA_DB: f64 = 40.0;
/// Default number of group-delay samples handed to the inverse fit.
pub const DEFAULT_N_POINTS: usize = 1001;

const POSITIVITY_SCAN_POINTS: usize = 10_000;

/// Window family and its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WindowFamily {
    Gaussian { k: f64 },
    Taylor { nbar: usize, eta_db: f64 },
}

impl WindowFamily {
    pub fn name(&self) -> &'static str {
        match self {
            WindowFamily::Gaussian { .. } => "gaussian",
            WindowFamily::Taylor { .. } => "taylor",
        }
    }
}

impl std::fmt::Display for WindowFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WindowFamily::Gaussian { k } => write!(f, "gaussian(k={k})"),
            WindowFamily::Taylor { nbar, eta_db } => {
                write!(f, "taylor(nbar={nbar}, eta={eta_db} dB)")
            }
        }
    }
}

/// Taylor weighting coefficients `F_1 .. F_{nbar-1}` for the cosine series
/// `w(f) = 1 + sum_m F_m cos(2 pi m f / B)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorCoefficients(Vec<f64>);

impl TaylorCoefficients {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Taylor coefficients for `nbar` near-equal sidelobes at `-eta_db` dB.
///
/// With `A = acosh(10^(eta/20)) / pi` and `sigma^2 = nbar^2 / (A^2 + (nbar - 1/2)^2)`,
///
/// ```text
/// F_m = (-1)^(m+1) prod_{n=1}^{nbar-1} [1 - m^2 / (sigma^2 (A^2 + (n - 1/2)^2))]
///       / prod_{n=1, n != m}^{nbar-1} [1 - m^2 / n^2]
/// ```
///
/// The coefficients already carry the factor of two of the symmetric cosine
/// expansion, so they plug directly into `1 + sum F_m cos(...)`.
pub fn taylor_coefficients(nbar: usize, eta_db: f64) -> Result<TaylorCoefficients> {
    if nbar < 1 {
        return Err(Error::InvalidParameter(format!(
            "nbar must be >= 1, got {nbar}"
        )));
    }
    if !(eta_db > 0.0 && eta_db.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "eta must be a positive finite dB value, got {eta_db}"
        )));
    }
    let r = 10f64.powf(eta_db / 20.0);
    let a = r.acosh() / PI;
    let a2 = a * a;
    let nb = nbar as f64;
    let sigma2 = nb * nb / (a2 + (nb - 0.5).powi(2));

    let coeffs = (1..nbar)
        .map(|m| {
            let mf = m as f64;
            let m2 = mf * mf;
            let numerator: f64 = (1..nbar)
                .map(|n| 1.0 - m2 / (sigma2 * (a2 + (n as f64 - 0.5).powi(2))))
                .product();
            let denominator: f64 = (1..nbar)
                .filter(|&n| n != m)
                .map(|n| 1.0 - m2 / (n as f64).powi(2))
                .product();
            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
            sign * numerator / denominator
        })
        .collect::<Vec<_>>();

    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NonFinite("taylor coefficients"));
    }
    Ok(TaylorCoefficients(coeffs))
}

/// Design intent for the pulse power spectral density: window family,
/// bandwidth `B` (Hz) and pulse length `T` (s).
///
/// Construction validates every parameter. Taylor specs are also rejected
/// when the resulting window is not strictly positive across the band,
/// because the group delay would then fail to be monotone.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSpec {
    family: WindowFamily,
    bandwidth: f64,
    pulse_length: f64,
    kernel: Kernel,
}

#[derive(Debug, Clone, PartialEq)]
enum Kernel {
    Gaussian {
        k: f64,
        /// `sqrt(k) / (2B)`
        rate: f64,
        /// `T / (2 erf(sqrt(k)/4))`
        scale: f64,
    },
    Taylor(TaylorCoefficients),
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

impl WindowSpec {
    pub fn new(family: WindowFamily, bandwidth: f64, pulse_length: f64) -> Result<Self> {
        check_positive("bandwidth", bandwidth)?;
        check_positive("pulse length", pulse_length)?;
        let kernel = match family {
            WindowFamily::Gaussian { k } => {
                check_positive("gaussian k", k)?;
                let root_k = k.sqrt();
                Kernel::Gaussian {
                    k,
                    rate: root_k / (2.0 * bandwidth),
                    scale: pulse_length / (2.0 * erf(root_k / 4.0)),
                }
            }
            WindowFamily::Taylor { nbar, eta_db } => {
                Kernel::Taylor(taylor_coefficients(nbar, eta_db)?)
            }
        };
        let spec = WindowSpec {
            family,
            bandwidth,
            pulse_length,
            kernel,
        };
        if let Kernel::Taylor(_) = spec.kernel {
            let min = spec.min_weight(POSITIVITY_SCAN_POINTS);
            if !(min > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{family} is not strictly positive on the band (min weight {min:e})"
                )));
            }
        }
        Ok(spec)
    }

    pub fn gaussian(k: f64, bandwidth: f64, pulse_length: f64) -> Result<Self> {
        Self::new(WindowFamily::Gaussian { k }, bandwidth, pulse_length)
    }

    pub fn taylor(nbar: usize, eta_db: f64, bandwidth: f64, pulse_length: f64) -> Result<Self> {
        Self::new(
            WindowFamily::Taylor { nbar, eta_db },
            bandwidth,
            pulse_length,
        )
    }

    pub fn family(&self) -> WindowFamily {
        self.family
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn pulse_length(&self) -> f64 {
        self.pulse_length
    }

    /// Taylor coefficients, or `None` for a Gaussian window.
    pub fn taylor_coefficients(&self) -> Option<&TaylorCoefficients> {
        match &self.kernel {
            Kernel::Taylor(c) => Some(c),
            Kernel::Gaussian { .. } => None,
        }
    }

    fn check_band(&self, f: f64) -> Result<()> {
        let half = 0.5 * self.bandwidth;
        if f.is_nan() || f.abs() > half {
            Err(Error::OutOfBand {
                freq: f,
                half_band: half,
            })
        } else {
            Ok(())
        }
    }

    /// Window weight `w(f)` for `-B/2 <= f <= B/2`.
    pub fn weight(&self, f: f64) -> Result<f64> {
        self.check_band(f)?;
        Ok(self.weight_unchecked(f))
    }

    fn weight_unchecked(&self, f: f64) -> f64 {
        let b = self.bandwidth;
        match &self.kernel {
            Kernel::Gaussian { k, .. } => {
                let u = f / (2.0 * b);
                (-k * u * u).exp()
            }
            Kernel::Taylor(coeffs) => {
                let theta = 2.0 * PI * f / b;
                1.0 + coeffs
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, fm)| fm * ((i + 1) as f64 * theta).cos())
                    .sum::<f64>()
            }
        }
    }

    fn min_weight(&self, points: usize) -> f64 {
        let half = 0.5 * self.bandwidth;
        (0..points)
            .map(|j| -half + self.bandwidth * j as f64 / (points - 1) as f64)
            .map(|f| self.weight_unchecked(f))
            .fold(f64::INFINITY, f64::min)
    }

    /// Group delay `T_g(f)` in seconds for `-B/2 <= f <= B/2`.
    ///
    /// Gaussian: `T / (2 erf(sqrt(k)/4)) * erf(f sqrt(k) / (2B))`.
    /// Taylor: `T (f/B + 1/(2 pi) sum_m F_m/m sin(2 pi m f / B))`.
    pub fn group_delay(&self, f: f64) -> Result<f64> {
        self.check_band(f)?;
        Ok(self.group_delay_unchecked(f))
    }

    fn group_delay_unchecked(&self, f: f64) -> f64 {
        let (b, t) = (self.bandwidth, self.pulse_length);
        match &self.kernel {
            Kernel::Gaussian { rate, scale, .. } => scale * erf(f * rate),
            Kernel::Taylor(coeffs) => {
                let theta = 2.0 * PI * f / b;
                let series: f64 = coeffs
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, fm)| {
                        let m = (i + 1) as f64;
                        fm / m * (m * theta).sin()
                    })
                    .sum();
                t * (f / b + series / (2.0 * PI))
            }
        }
    }

    /// Samples the group delay on a uniform inclusive frequency grid and
    /// returns `(T_g(f_j), f_j)` pairs, the dataset whose inverse is fitted.
    pub fn sample_group_delay(&self, n_points: usize) -> Result<GroupDelaySamples> {
        if n_points < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 group-delay samples, got {n_points}"
            )));
        }
        let half_b = 0.5 * self.bandwidth;
        let half_t = 0.5 * self.pulse_length;
        let last = n_points - 1;
        let mut times = Vec::with_capacity(n_points);
        let mut freqs = Vec::with_capacity(n_points);
        for j in 0..n_points {
            let (t, f) = if j == 0 {
                (-half_t, -half_b)
            } else if j == last {
                (half_t, half_b)
            } else if 2 * j == last {
                (0.0, 0.0)
            } else {
                // symmetric construction keeps the grid exactly odd
                let f = if 2 * j < last {
                    -half_b + self.bandwidth * j as f64 / last as f64
                } else {
                    half_b - self.bandwidth * (last - j) as f64 / last as f64
                };
                (self.group_delay_unchecked(f), f)
            };
            times.push(t);
            freqs.push(f);
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput(
                "group delay is not strictly increasing on the sampling grid".into(),
            ));
        }
        Ok(GroupDelaySamples { times, freqs })
    }
}

/// Ordered `(t_i, f_i)` samples of the group delay, `t` strictly increasing,
/// endpoints exactly `(±T/2, ±B/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupDelaySamples {
    times: Vec<f64>,
    freqs: Vec<f64>,
}

impl GroupDelaySamples {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (f64, f64)> + ExactSizeIterator + '_ {
        self.times.iter().copied().zip(self.freqs.iter().copied())
    }
}
