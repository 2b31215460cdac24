use thiserror::Error;

/// Errors raised by the design, fitting, synthesis and measurement routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("frequency {freq} Hz lies outside the band [-{half_band}, {half_band}] Hz")]
    OutOfBand { freq: f64, half_band: f64 },

    #[error("polynomial of degree {degree} is underdetermined by {points} points")]
    Underdetermined { degree: usize, points: usize },

    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("x = {x} lies outside the model domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("sample rate {fs} Hz does not exceed the bandwidth {bandwidth} Hz")]
    Aliasing { fs: f64, bandwidth: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("ACF never falls below {level_db} dB; mainlobe is degenerate")]
    DegenerateMainlobe { level_db: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
