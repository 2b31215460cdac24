//! Constant-envelope pulse synthesis from a fitted instantaneous-frequency
//! law, plus the closed-form LFM reference.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_polynomial, fit_smoothing_spline, DataSet, FittedModel, Model};
use crate::window::WindowSpec;

/// Default polynomial degree for the inverse fit.
pub const DEFAULT_POLYNOMIAL_DEGREE: usize = 9;

const MONOTONE_SCAN_POINTS: usize = 10_000;
const OVERSHOOT_FRACTION: f64 = 0.01;

/// How the inverse group delay is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum FitMethod {
    Polynomial { degree: usize },
    SmoothingSpline { lambda: f64 },
}

impl std::fmt::Display for FitMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitMethod::Polynomial { degree } => write!(f, "polynomial(degree={degree})"),
            FitMethod::SmoothingSpline { lambda } => {
                write!(f, "smoothing_spline(lambda={lambda:e})")
            }
        }
    }
}

/// Fitted instantaneous frequency `f(t)` on `[-T/2, T/2]` with its design
/// label and monotonicity diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyModel {
    fit: FittedModel,
    spec: WindowSpec,
    method: FitMethod,
    monotone: bool,
    diagnostics: Vec<String>,
}

impl FrequencyModel {
    /// Wraps an already fitted model. The model domain must cover `[-T/2, T/2]`.
    pub fn new(fit: FittedModel, spec: WindowSpec, method: FitMethod) -> Result<Self> {
        let half_t = 0.5 * spec.pulse_length();
        let (lo, hi) = fit.domain();
        if lo > -half_t || hi < half_t {
            return Err(Error::InvalidInput(format!(
                "fitted domain [{lo:e}, {hi:e}] does not cover the pulse [-{half_t:e}, {half_t:e}]"
            )));
        }
        let mut diagnostics = Vec::new();

        let last = (MONOTONE_SCAN_POINTS - 1) as f64;
        let mut previous = f64::NEG_INFINITY;
        let mut monotone = true;
        for j in 0..MONOTONE_SCAN_POINTS {
            let t = (-half_t + spec.pulse_length() * j as f64 / last).clamp(-half_t, half_t);
            let f = fit.eval(t)?;
            if !f.is_finite() {
                return Err(Error::NonFinite("frequency model"));
            }
            if monotone && f <= previous {
                monotone = false;
                diagnostics.push(format!(
                    "frequency law is not strictly increasing near t = {t:e} s"
                ));
            }
            previous = f;
        }

        let limit = spec.bandwidth() * (0.5 + OVERSHOOT_FRACTION);
        for t in [-half_t, half_t] {
            let f = fit.eval(t)?;
            if f.abs() > limit {
                diagnostics.push(format!(
                    "fit overshoots the band at t = {t:e} s: f = {f:e} Hz exceeds {limit:e} Hz"
                ));
            }
        }

        Ok(FrequencyModel {
            fit,
            spec,
            method,
            monotone,
            diagnostics,
        })
    }

    pub fn fit(&self) -> &FittedModel {
        &self.fit
    }

    pub fn spec(&self) -> &WindowSpec {
        &self.spec
    }

    pub fn method(&self) -> FitMethod {
        self.method
    }

    /// Whether `f(t)` is strictly increasing on a dense grid over the pulse.
    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }

    /// Design label, e.g. `gaussian(k=73.68) / smoothing_spline(lambda=1e-21)`.
    pub fn label(&self) -> String {
        format!("{} / {}", self.spec.family(), self.method)
    }
}

impl Model for FrequencyModel {
    fn domain(&self) -> (f64, f64) {
        self.fit.domain()
    }

    fn eval(&self, t: f64) -> Result<f64> {
        self.fit.eval(t)
    }
}

/// Samples the group delay of `spec`, fits its inverse `t -> f` with `method`
/// and wraps the result with diagnostics. A non-monotone fit is returned with
/// [`FrequencyModel::is_monotone`] false rather than rejected.
pub fn design_frequency_function(
    spec: &WindowSpec,
    method: FitMethod,
    n_points: usize,
) -> Result<FrequencyModel> {
    let samples = spec.sample_group_delay(n_points)?;
    let data = DataSet::try_from(&samples)?;
    let fit: FittedModel = match method {
        FitMethod::Polynomial { degree } => fit_polynomial(&data, degree)?.into(),
        FitMethod::SmoothingSpline { lambda } => fit_smoothing_spline(&data, lambda)?.into(),
    };
    FrequencyModel::new(fit, spec.clone(), method)
}

/// Number of samples in a pulse of length `pulse_length` at `fs`.
pub fn sample_count(pulse_length: f64, fs: f64) -> usize {
    (pulse_length * fs).round() as usize
}

/// Midpoint time grid `t_i = -T/2 + (i + 1/2)/fs`, `i = 0 .. round(T fs) - 1`.
pub fn time_grid(pulse_length: f64, fs: f64) -> Vec<f64> {
    let half = 0.5 * pulse_length;
    (0..sample_count(pulse_length, fs))
        .map(|i| (-half + (i as f64 + 0.5) / fs).min(half))
        .collect()
}

fn check_rate(pulse_length: f64, fs: f64) -> Result<()> {
    if !(fs > 0.0 && fs.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sample rate must be positive and finite, got {fs}"
        )));
    }
    if sample_count(pulse_length, fs) == 0 {
        return Err(Error::InvalidParameter(format!(
            "pulse of {pulse_length:e} s holds no samples at {fs:e} Hz"
        )));
    }
    Ok(())
}

/// Phase `phi(t_i) = 2 pi * cumulative trapezoid of f` over the midpoint
/// grid of a pulse of length `pulse_length`, with `phi(t_0) = 0`.
pub fn phase_samples<M: Model + ?Sized>(freq: &M, pulse_length: f64, fs: f64) -> Result<Vec<f64>> {
    check_rate(pulse_length, fs)?;
    let grid = time_grid(pulse_length, fs);
    let step = PI / fs;
    let mut phases = Vec::with_capacity(grid.len());
    let mut phase = 0.0;
    let mut previous: Option<f64> = None;
    for t in grid {
        let f = freq.eval(t)?;
        if let Some(p) = previous {
            phase += step * (p + f);
        }
        phases.push(phase);
        previous = Some(f);
    }
    if !phase.is_finite() {
        return Err(Error::NonFinite("phase integration"));
    }
    Ok(phases)
}

/// Phase samples of the designed frequency law at sample rate `fs`.
pub fn integrate_phase(model: &FrequencyModel, fs: f64) -> Result<Vec<f64>> {
    phase_samples(model, model.spec().pulse_length(), fs)
}

/// `exp(j phase)` with `|z| == 1.0` exactly under `Complex64::norm`.
///
/// `sin_cos` alone misses unit magnitude by an ulp for roughly one angle in
/// seventy; the components are nudged by at most two ulps until it holds.
pub fn unit_phasor(phase: f64) -> Complex64 {
    let (s, c) = phase.sin_cos();
    let z = Complex64::new(c, s);
    if z.norm() == 1.0 {
        return z;
    }
    let nudges = |v: f64| {
        [
            v,
            v.next_up(),
            v.next_down(),
            v.next_up().next_up(),
            v.next_down().next_down(),
        ]
    };
    for re in nudges(c) {
        for im in nudges(s) {
            let candidate = Complex64::new(re, im);
            if candidate.norm() == 1.0 {
                return candidate;
            }
        }
    }
    z
}

/// Complex baseband pulse with its design label.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<Complex64>,
    sample_rate: f64,
    pulse_length: f64,
    label: String,
}

impl Waveform {
    pub fn new(
        samples: Vec<Complex64>,
        sample_rate: f64,
        pulse_length: f64,
        label: impl Into<String>,
    ) -> Self {
        Waveform {
            samples,
            sample_rate,
            pulse_length,
            label: label.into(),
        }
    }

    pub fn from_phases(
        phases: &[f64],
        sample_rate: f64,
        pulse_length: f64,
        label: impl Into<String>,
    ) -> Self {
        let samples = phases.iter().map(|&p| unit_phasor(p)).collect();
        Self::new(samples, sample_rate, pulse_length, label)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn pulse_length(&self) -> f64 {
        self.pulse_length
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample instants on the midpoint grid.
    pub fn times(&self) -> Vec<f64> {
        let half = 0.5 * self.pulse_length;
        (0..self.samples.len())
            .map(|i| -half + (i as f64 + 0.5) / self.sample_rate)
            .collect()
    }
}

fn check_nyquist(fs: f64, bandwidth: f64) -> Result<()> {
    if fs > bandwidth {
        Ok(())
    } else {
        Err(Error::Aliasing { fs, bandwidth })
    }
}

/// Unit-envelope NLFM pulse `exp(j phi(t_i))` for the designed frequency law.
pub fn synthesize_nlfm(model: &FrequencyModel, fs: f64) -> Result<Waveform> {
    check_nyquist(fs, model.spec().bandwidth())?;
    let phases = integrate_phase(model, fs)?;
    Ok(Waveform::from_phases(
        &phases,
        fs,
        model.spec().pulse_length(),
        model.label(),
    ))
}

/// LFM reference with `f(t) = (B/T) t` and closed-form phase
/// `phi(t_i) = pi (B/T) (t_i^2 - t_0^2)`.
pub fn synthesize_lfm(pulse_length: f64, bandwidth: f64, fs: f64) -> Result<Waveform> {
    for (name, v) in [("pulse length", pulse_length), ("bandwidth", bandwidth)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    check_rate(pulse_length, fs)?;
    check_nyquist(fs, bandwidth)?;
    let grid = time_grid(pulse_length, fs);
    let rate = bandwidth / pulse_length;
    let t0 = grid[0];
    let phases: Vec<f64> = grid
        .iter()
        .map(|&t| PI * rate * (t - t0) * (t + t0))
        .collect();
    Ok(Waveform::from_phases(
        &phases,
        fs,
        pulse_length,
        format!("lfm(B={bandwidth:e} Hz)"),
    ))
}
