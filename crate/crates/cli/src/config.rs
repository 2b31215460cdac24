use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nlfm_core::acf::DEFAULT_OVERSAMPLE;
use nlfm_core::synth::{FitMethod, DEFAULT_POLYNOMIAL_DEGREE};
use nlfm_core::window::{
    WindowFamily, DEFAULT_GAUSSIAN_K, DEFAULT_N_POINTS, DEFAULT_TAYLOR_ETA_DB, DEFAULT_TAYLOR_NBAR,
};
use serde::Serialize;

use crate::error::{CliError, Result};

pub const DEFAULT_PULSE_LENGTH: f64 = 2.5e-6;
pub const DEFAULT_BANDWIDTH: f64 = 100e6;
pub const DEFAULT_SAMPLE_RATE: f64 = 500e6;
pub const DEFAULT_LAMBDA: f64 = 1e-22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowKind {
    Gaussian,
    Taylor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Polynomial,
    Spline,
    Lfm,
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MethodKind::Polynomial => "polynomial",
            MethodKind::Spline => "spline",
            MethodKind::Lfm => "lfm",
        })
    }
}

impl FromStr for WindowKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(WindowKind::Gaussian),
            "taylor" => Ok(WindowKind::Taylor),
            _ => Err(CliError::Config(format!(
                "unknown window '{s}' (gaussian | taylor)"
            ))),
        }
    }
}

impl FromStr for MethodKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "polynomial" | "poly" => Ok(MethodKind::Polynomial),
            "spline" | "smoothing_spline" => Ok(MethodKind::Spline),
            "lfm" => Ok(MethodKind::Lfm),
            _ => Err(CliError::Config(format!(
                "unknown method '{s}' (polynomial | spline | lfm)"
            ))),
        }
    }
}

/// One design: window, pulse, fit and measurement parameters in SI units.
///
/// Every family and method parameter is kept so that a sweep can vary any of
/// them; `window` and `method` select which ones are used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignConfig {
    pub window: WindowKind,
    pub k: f64,
    pub nbar: usize,
    pub eta_db: f64,
    #[serde(rename = "pulse_length_s")]
    pub pulse_length: f64,
    #[serde(rename = "bandwidth_hz")]
    pub bandwidth: f64,
    #[serde(rename = "sample_rate_hz")]
    pub sample_rate: f64,
    pub method: MethodKind,
    pub degree: usize,
    pub lambda: f64,
    pub n_points: usize,
    pub oversample: usize,
    pub out: PathBuf,
}

impl Default for DesignConfig {
    fn default() -> Self {
        DesignConfig {
            window: WindowKind::Gaussian,
            k: DEFAULT_GAUSSIAN_K,
            nbar: DEFAULT_TAYLOR_NBAR,
            eta_db: DEFAULT_TAYLOR_ETA_DB,
            pulse_length: DEFAULT_PULSE_LENGTH,
            bandwidth: DEFAULT_BANDWIDTH,
            sample_rate: DEFAULT_SAMPLE_RATE,
            method: MethodKind::Spline,
            degree: DEFAULT_POLYNOMIAL_DEGREE,
            lambda: DEFAULT_LAMBDA,
            n_points: DEFAULT_N_POINTS,
            oversample: DEFAULT_OVERSAMPLE,
            out: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Unit {
    Seconds,
    Hertz,
    None,
}

/// Parses a number with an optional unit suffix (`2.5us`, `100 MHz`).
/// Plain numbers are taken as seconds or hertz.
fn parse_quantity(text: &str, unit: Unit) -> Result<f64> {
    let text = text.trim();
    let bytes = text.as_bytes();
    let split = text
        .char_indices()
        .find(|&(i, c)| {
            let exponent = matches!(c, 'e' | 'E')
                && i > 0
                && bytes[i - 1].is_ascii_digit()
                && matches!(bytes.get(i + 1), Some(b'0'..=b'9' | b'-' | b'+'));
            (c.is_alphabetic() || c == 'µ' || c == 'μ') && !exponent
        })
        .map_or(text.len(), |(i, _)| i);
    let (num, suffix) = text.split_at(split);
    let num = num.trim();
    let suffix = suffix.trim();
    let exponent = match (unit, suffix.to_ascii_lowercase().as_str()) {
        (_, "") => 0,
        (Unit::Seconds, "s") => 0,
        (Unit::Seconds, "ms") => -3,
        (Unit::Seconds, "us") => -6,
        (Unit::Seconds, "ns") => -9,
        (Unit::Seconds, s) if s == "µs" || s == "μs" => -6,
        (Unit::Hertz, "hz") => 0,
        (Unit::Hertz, "khz") => 3,
        (Unit::Hertz, "mhz") => 6,
        (Unit::Hertz, "ghz") => 9,
        _ => return Err(CliError::Config(format!("unexpected unit in '{text}'"))),
    };
    // rescale by editing the decimal exponent so "2.5us" is exactly 2.5e-6
    let (mantissa, own_exp) = match num.find(['e', 'E']) {
        Some(i) => (&num[..i], num[i + 1..].parse::<i32>().ok()),
        None => (num, Some(0)),
    };
    let value = own_exp
        .and_then(|e| format!("{mantissa}e{}", e + exponent).parse::<f64>().ok())
        .filter(|_| !mantissa.is_empty())
        .ok_or_else(|| CliError::Config(format!("cannot parse number '{text}'")))?;
    if !value.is_finite() {
        return Err(CliError::Config(format!("'{text}' is not finite")));
    }
    Ok(value)
}

fn parse_count(text: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Config(format!("'{text}' is not a non-negative integer")))
}

/// Canonical key for a config key or flag name.
pub fn canonical_key(key: &str) -> Option<&'static str> {
    Some(match key.trim().replace('-', "_").as_str() {
        "window" => "window",
        "k" => "k",
        "nbar" => "nbar",
        "eta" | "eta_db" => "eta_db",
        "T" | "t" | "pulse_length" => "pulse_length",
        "B" | "b" | "bandwidth" => "bandwidth",
        "fs" | "sample_rate" => "sample_rate",
        "method" => "method",
        "degree" => "degree",
        "lambda" => "lambda",
        "n_points" => "n_points",
        "oversample" => "oversample",
        "out" => "out",
        _ => return None,
    })
}

impl DesignConfig {
    /// Sets one parameter from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let canonical =
            canonical_key(key).ok_or_else(|| CliError::Config(format!("unknown key '{key}'")))?;
        match canonical {
            "window" => self.window = value.trim().parse()?,
            "k" => self.k = parse_quantity(value, Unit::None)?,
            "nbar" => self.nbar = parse_count(value)?,
            "eta_db" => {
                self.eta_db = parse_quantity(value.trim().trim_end_matches("dB"), Unit::None)?
            }
            "pulse_length" => self.pulse_length = parse_quantity(value, Unit::Seconds)?,
            "bandwidth" => self.bandwidth = parse_quantity(value, Unit::Hertz)?,
            "sample_rate" => self.sample_rate = parse_quantity(value, Unit::Hertz)?,
            "method" => self.method = value.trim().parse()?,
            "degree" => self.degree = parse_count(value)?,
            "lambda" => self.lambda = parse_quantity(value, Unit::None)?,
            "n_points" => self.n_points = parse_count(value)?,
            "oversample" => self.oversample = parse_count(value)?,
            "out" => self.out = PathBuf::from(value.trim()),
            _ => unreachable!(),
        }
        Ok(())
    }

    /// Parses a flat `key = value` file on top of the defaults. `#` starts a
    /// comment; a key may appear only once.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut config = DesignConfig::default();
        for (key, value) in parse_pairs(text)? {
            config.set(&key, &value)?;
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_text(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Flat-file form in SI units; `from_text(to_text())` reproduces the config.
    pub fn to_text(&self) -> String {
        let window = match self.window {
            WindowKind::Gaussian => "gaussian",
            WindowKind::Taylor => "taylor",
        };
        format!(
            "window = {window}\nk = {}\nnbar = {}\neta_db = {}\nT = {:e}\nB = {:e}\nfs = {:e}\n\
             method = {}\ndegree = {}\nlambda = {:e}\nn_points = {}\noversample = {}\nout = {}\n",
            self.k,
            self.nbar,
            self.eta_db,
            self.pulse_length,
            self.bandwidth,
            self.sample_rate,
            self.method,
            self.degree,
            self.lambda,
            self.n_points,
            self.oversample,
            self.out.display()
        )
    }

    pub fn window_family(&self) -> WindowFamily {
        match self.window {
            WindowKind::Gaussian => WindowFamily::Gaussian { k: self.k },
            WindowKind::Taylor => WindowFamily::Taylor {
                nbar: self.nbar,
                eta_db: self.eta_db,
            },
        }
    }

    /// Fit method, `None` for the LFM reference.
    pub fn fit_method(&self) -> Option<FitMethod> {
        match self.method {
            MethodKind::Polynomial => Some(FitMethod::Polynomial {
                degree: self.degree,
            }),
            MethodKind::Spline => Some(FitMethod::SmoothingSpline {
                lambda: self.lambda,
            }),
            MethodKind::Lfm => None,
        }
    }

    /// Checks the physical parameters. Window and fit parameters are checked
    /// by the design routines themselves.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("T", self.pulse_length),
            ("B", self.bandwidth),
            ("fs", self.sample_rate),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Config(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.sample_rate <= self.bandwidth {
            return Err(nlfm_core::Error::Aliasing {
                fs: self.sample_rate,
                bandwidth: self.bandwidth,
            }
            .into());
        }
        if self.oversample == 0 {
            return Err(CliError::Config("oversample must be >= 1".into()));
        }
        if self.method != MethodKind::Lfm && self.n_points < 2 {
            return Err(CliError::Config("n_points must be >= 2".into()));
        }
        Ok(())
    }

    /// Short human label, e.g. `gaussian(k=73.68) / spline(lambda=1e-22)`.
    pub fn label(&self) -> String {
        match self.fit_method() {
            None => "lfm".to_string(),
            Some(m) => format!("{} / {m}", self.window_family()),
        }
    }
}

/// Splits a flat config text into `(key, value)` pairs, rejecting repeats.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("line {}: expected 'key = value'", lineno + 1))
        })?;
        let key = key.trim().to_string();
        if pairs
            .iter()
            .any(|(k, _)| canonical_key(k) == canonical_key(&key))
        {
            return Err(CliError::Config(format!(
                "line {}: duplicate key '{key}'",
                lineno + 1
            )));
        }
        pairs.push((key, value.trim().to_string()));
    }
    Ok(pairs)
}
