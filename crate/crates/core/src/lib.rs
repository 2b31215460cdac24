//! Stationary-phase design of nonlinear-FM radar pulses.
//!
//! A Gaussian or Taylor window is taken as the target power spectral density.
//! Its normalized running integral is the group delay `T_g(f)`; the inverse of
//! the group delay is the instantaneous-frequency law `f(t)`, which has no
//! closed form and is fitted from samples either by a least-squares
//! polynomial or by a natural cubic smoothing spline. The law is integrated
//! into a unit-envelope complex pulse whose autocorrelation sidelobes are then
//! measured against an LFM reference.
//!
//! ```
//! use nlfm_core::{acf, synth, window};
//!
//! let spec = window::WindowSpec::gaussian(window::DEFAULT_GAUSSIAN_K, 100e6, 2.5e-6).unwrap();
//! let method = synth::FitMethod::SmoothingSpline { lambda: 1e-22 };
//! let model = synth::design_frequency_function(&spec, method, 1001).unwrap();
//! let pulse = synth::synthesize_nlfm(&model, 500e6).unwrap();
//! let lfm = synth::synthesize_lfm(2.5e-6, 100e6, 500e6).unwrap();
//! let report = acf::AcfReport::measure(&pulse, &lfm, 4).unwrap();
//! assert!(report.psl_db.unwrap() < -40.0);
//! assert!(report.nmlw > 1.0);
//! ```

// NaN must fail every range check, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acf;
pub mod erf;
pub mod error;
pub mod fft;
pub mod fit;
pub mod synth;
pub mod window;

pub use error::{Error, Result};
