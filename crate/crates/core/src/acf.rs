//! Autocorrelation, power spectral density and the sidelobe metrics
//! (peak sidelobe level, mainlobe width at a dB level, normalized width).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft::{dft, fft_radix2, Direction};
use crate::synth::Waveform;

/// Magnitudes below this are floored at [`DB_FLOOR`] in the dB curve.
pub const MAGNITUDE_FLOOR: f64 = 1e-10;
pub const DB_FLOOR: f64 = -200.0;
/// Reference level for mainlobe width.
pub const MLW_LEVEL_DB: f64 = -4.0;
pub const DEFAULT_OVERSAMPLE: usize = 4;

/// Normalized autocorrelation magnitude over symmetric lags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcfCurve {
    lags: Vec<f64>,
    magnitude: Vec<f64>,
    db: Vec<f64>,
}

fn to_db(m: f64) -> f64 {
    if m < MAGNITUDE_FLOOR {
        DB_FLOOR
    } else {
        20.0 * m.log10()
    }
}

impl AcfCurve {
    /// Builds a curve from magnitudes at lags `(i - center) * spacing`;
    /// `values.len()` must be odd with the zero lag in the middle.
    pub fn from_values(values: &[f64], lag_spacing: f64) -> Result<Self> {
        if values.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(
                "an ACF curve needs an odd number of lags".into(),
            ));
        }
        let center = values.len() / 2;
        let peak = values[center];
        if !(peak > 0.0) {
            return Err(Error::InvalidInput("ACF has no energy at zero lag".into()));
        }
        let magnitude: Vec<f64> = values.iter().map(|v| v / peak).collect();
        if magnitude.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFinite("autocorrelation"));
        }
        let lags = (0..values.len())
            .map(|i| (i as f64 - center as f64) * lag_spacing)
            .collect();
        let db = magnitude.iter().map(|&m| to_db(m)).collect();
        Ok(AcfCurve {
            lags,
            magnitude,
            db,
        })
    }

    pub fn lags(&self) -> &[f64] {
        &self.lags
    }

    pub fn magnitude(&self) -> &[f64] {
        &self.magnitude
    }

    pub fn db(&self) -> &[f64] {
        &self.db
    }

    pub fn len(&self) -> usize {
        self.lags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags.is_empty()
    }

    /// Index of lag zero.
    pub fn center(&self) -> usize {
        self.lags.len() / 2
    }

    pub fn lag_spacing(&self) -> f64 {
        if self.lags.len() > 1 {
            self.lags[1] - self.lags[0]
        } else {
            0.0
        }
    }
}

/// Full linear autocorrelation `R(k) = sum_n x[n] x*[n - k]` at all `2N - 1`
/// lags, computed with a zero-padded FFT and normalized to `|R(0)|`.
pub fn autocorrelation(w: &Waveform) -> Result<AcfCurve> {
    autocorrelation_oversampled(w, 1)
}

/// Autocorrelation band-limited-interpolated by `factor` (lag spacing
/// `1 / (factor * fs)`). The power spectrum is zero-stuffed in the middle
/// before the inverse transform; `factor = 1` is the plain sampled ACF.
pub fn autocorrelation_oversampled(w: &Waveform, factor: usize) -> Result<AcfCurve> {
    let n = w.len();
    if n == 0 {
        return Err(Error::InvalidInput(
            "cannot correlate an empty waveform".into(),
        ));
    }
    if factor == 0 {
        return Err(Error::InvalidParameter(
            "oversample factor must be >= 1".into(),
        ));
    }
    let size = (2 * n - 1).next_power_of_two();
    let mut spectrum = vec![Complex64::new(0.0, 0.0); size];
    spectrum[..n].copy_from_slice(w.samples());
    fft_radix2(&mut spectrum, Direction::Forward);

    let fine = size * factor;
    let mut power = vec![Complex64::new(0.0, 0.0); fine];
    if factor == 1 {
        for (p, x) in power.iter_mut().zip(&spectrum) {
            *p = Complex64::new(x.norm_sqr(), 0.0);
        }
    } else if size == 1 {
        power[0] = Complex64::new(spectrum[0].norm_sqr(), 0.0);
    } else {
        let half = size / 2;
        for k in 0..half {
            power[k] = Complex64::new(spectrum[k].norm_sqr(), 0.0);
        }
        for k in half + 1..size {
            power[fine - size + k] = Complex64::new(spectrum[k].norm_sqr(), 0.0);
        }
        // split the Nyquist bin between the two images
        let nyquist = 0.5 * spectrum[half].norm_sqr();
        power[half] = Complex64::new(nyquist, 0.0);
        power[fine - half] = Complex64::new(nyquist, 0.0);
    }
    fft_radix2(&mut power, Direction::Inverse);

    let max_lag = factor * (n - 1);
    let values: Vec<f64> = (0..=2 * max_lag)
        .map(|i| {
            let lag = i as isize - max_lag as isize;
            power[lag.rem_euclid(fine as isize) as usize].norm()
        })
        .collect();
    AcfCurve::from_values(&values, 1.0 / (w.sample_rate() * factor as f64))
}

/// Zero-frequency-centred power spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub power: Vec<f64>,
}

/// `|DFT(x zero-padded to nfft)|^2` on `[-fs/2, fs/2)`.
pub fn psd(w: &Waveform, nfft: usize) -> Result<Spectrum> {
    let n = w.len();
    if n == 0 || nfft < n {
        return Err(Error::InvalidParameter(format!(
            "nfft = {nfft} must be at least the waveform length {n} (and non-zero)"
        )));
    }
    let mut padded = vec![Complex64::new(0.0, 0.0); nfft];
    padded[..n].copy_from_slice(w.samples());
    let spectrum = dft(&padded, Direction::Forward);
    let shift = nfft / 2;
    let fs = w.sample_rate();
    let freqs = (0..nfft)
        .map(|j| (j as f64 - shift as f64) * fs / nfft as f64)
        .collect();
    let power = (0..nfft)
        .map(|j| spectrum[(j + nfft - shift) % nfft].norm_sqr())
        .collect();
    Ok(Spectrum { freqs, power })
}

/// Peak sidelobe level, or the absence of any sidelobe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakSidelobe {
    Level { db: f64 },
    NoSidelobes,
}

impl PeakSidelobe {
    pub fn db(&self) -> Option<f64> {
        match self {
            PeakSidelobe::Level { db } => Some(*db),
            PeakSidelobe::NoSidelobes => None,
        }
    }
}

/// Index of the first strict local minimum walking away from `center` in
/// direction `step` (`+1` or `-1`).
fn first_null(mag: &[f64], center: usize, step: isize) -> Option<usize> {
    let len = mag.len() as isize;
    let mut i = center as isize + step;
    while i + step >= 0 && i + step < len {
        let prev = mag[(i - step) as usize];
        let here = mag[i as usize];
        let next = mag[(i + step) as usize];
        if here < prev && here < next {
            return Some(i as usize);
        }
        i += step;
    }
    None
}

/// Peak sidelobe level: the largest magnitude outside the null-to-null
/// mainlobe, in dB. The mainlobe ends at the first strict local minimum on
/// each side of lag zero.
pub fn psl(curve: &AcfCurve) -> PeakSidelobe {
    let mag = curve.magnitude();
    let center = curve.center();
    let right = first_null(mag, center, 1).map(|i| mag[i..].iter().copied().fold(0.0, f64::max));
    let left = first_null(mag, center, -1).map(|i| mag[..=i].iter().copied().fold(0.0, f64::max));
    match (left, right) {
        (None, None) => PeakSidelobe::NoSidelobes,
        (l, r) => {
            let peak = l.unwrap_or(0.0).max(r.unwrap_or(0.0));
            PeakSidelobe::Level { db: to_db(peak) }
        }
    }
}

fn crossing(curve: &AcfCurve, level_db: f64, step: isize) -> Option<f64> {
    let db = curve.db();
    let lags = curve.lags();
    let mut i = curve.center() as isize;
    loop {
        let j = i + step;
        if j < 0 || j >= db.len() as isize {
            return None;
        }
        let (a, b) = (i as usize, j as usize);
        if db[b] < level_db {
            let frac = (level_db - db[a]) / (db[b] - db[a]);
            return Some(lags[a] + frac * (lags[b] - lags[a]));
        }
        i = j;
    }
}

/// Mainlobe width at `level_db` (negative): distance between the first
/// crossings on either side of lag zero, linearly interpolated in dB.
pub fn mlw(curve: &AcfCurve, level_db: f64) -> Result<f64> {
    if !(level_db < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "mainlobe level must be negative dB, got {level_db}"
        )));
    }
    let right = crossing(curve, level_db, 1);
    let left = crossing(curve, level_db, -1);
    match (left, right) {
        (Some(l), Some(r)) => Ok(r - l),
        _ => Err(Error::DegenerateMainlobe { level_db }),
    }
}

/// Mainlobe width of `nlfm` relative to `lfm`, both at -4 dB.
pub fn nmlw(nlfm: &AcfCurve, lfm: &AcfCurve) -> Result<f64> {
    Ok(mlw(nlfm, MLW_LEVEL_DB)? / mlw(lfm, MLW_LEVEL_DB)?)
}

/// Scalar metrics of one pulse against its LFM reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcfReport {
    /// Peak sidelobe level on the oversampled curve, `None` without sidelobes.
    pub psl_db: Option<f64>,
    /// -4 dB mainlobe width on the oversampled curve.
    pub mlw_seconds: f64,
    pub nmlw: f64,
    pub psl_db_raw: Option<f64>,
    pub mlw_seconds_raw: f64,
    pub nmlw_raw: f64,
    pub oversample: usize,
    pub label: String,
    #[serde(skip)]
    pub curve: AcfCurve,
    #[serde(skip)]
    pub refined_curve: AcfCurve,
}

/// -4 dB mainlobe widths of the LFM reference at the raw and oversampled
/// lag spacings, the denominators of NMLW.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceWidths {
    pub mlw_seconds: f64,
    pub mlw_seconds_raw: f64,
    pub oversample: usize,
}

impl ReferenceWidths {
    pub fn measure(reference: &Waveform, oversample: usize) -> Result<Self> {
        Ok(ReferenceWidths {
            mlw_seconds: mlw(
                &autocorrelation_oversampled(reference, oversample)?,
                MLW_LEVEL_DB,
            )?,
            mlw_seconds_raw: mlw(&autocorrelation(reference)?, MLW_LEVEL_DB)?,
            oversample,
        })
    }
}

impl AcfReport {
    /// Measures `pulse` against `reference` (normally the same-`T`, same-`B` LFM).
    pub fn measure(pulse: &Waveform, reference: &Waveform, oversample: usize) -> Result<Self> {
        Self::measure_with(pulse, &ReferenceWidths::measure(reference, oversample)?)
    }

    /// Measures `pulse` against precomputed reference widths.
    pub fn measure_with(pulse: &Waveform, reference: &ReferenceWidths) -> Result<Self> {
        let oversample = reference.oversample;
        let curve = autocorrelation(pulse)?;
        let refined_curve = autocorrelation_oversampled(pulse, oversample)?;
        let mlw_raw = mlw(&curve, MLW_LEVEL_DB)?;
        let mlw_fine = mlw(&refined_curve, MLW_LEVEL_DB)?;
        Ok(AcfReport {
            psl_db: psl(&refined_curve).db(),
            mlw_seconds: mlw_fine,
            nmlw: mlw_fine / reference.mlw_seconds,
            psl_db_raw: psl(&curve).db(),
            mlw_seconds_raw: mlw_raw,
            nmlw_raw: mlw_raw / reference.mlw_seconds_raw,
            oversample,
            label: pulse.label().to_string(),
            curve,
            refined_curve,
        })
    }
}
