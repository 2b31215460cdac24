use std::time::Instant;

use nlfm_core::acf::{AcfReport, ReferenceWidths};
use nlfm_core::synth::{design_frequency_function, synthesize_lfm, synthesize_nlfm, Waveform};
use nlfm_core::window::WindowSpec;
use serde::Serialize;

use crate::artifacts;
use crate::config::DesignConfig;
use crate::error::{CliError, Result};

/// Everything computed for one design.
#[derive(Debug, Clone)]
pub struct DesignOutcome {
    pub config: DesignConfig,
    pub waveform: Waveform,
    pub report: AcfReport,
    pub reference: ReferenceWidths,
    pub monotone: bool,
    pub diagnostics: Vec<String>,
}

/// Scalar results of a design, as recorded by sweeps and comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub psl_db: Option<f64>,
    pub mlw_seconds: f64,
    pub nmlw: f64,
    pub monotone: bool,
}

impl DesignOutcome {
    pub fn metrics(&self) -> Metrics {
        Metrics {
            psl_db: self.report.psl_db,
            mlw_seconds: self.report.mlw_seconds,
            nmlw: self.report.nmlw,
            monotone: self.monotone,
        }
    }
}

/// LFM mainlobe widths for the pulse length, bandwidth and sample rate of `config`.
pub fn reference_widths(config: &DesignConfig) -> Result<ReferenceWidths> {
    config.validate()?;
    let lfm = synthesize_lfm(config.pulse_length, config.bandwidth, config.sample_rate)?;
    Ok(ReferenceWidths::measure(&lfm, config.oversample)?)
}

/// Designs, synthesizes and measures one pulse without touching the filesystem.
pub fn design(config: &DesignConfig) -> Result<DesignOutcome> {
    let reference = reference_widths(config)?;
    design_with_reference(config, &reference)
}

/// As [`design`], against precomputed LFM widths (which must match the
/// config's `T`, `B`, `fs` and oversampling).
pub fn design_with_reference(
    config: &DesignConfig,
    reference: &ReferenceWidths,
) -> Result<DesignOutcome> {
    config.validate()?;
    if reference.oversample != config.oversample {
        return Err(CliError::Config(format!(
            "reference oversample {} differs from config oversample {}",
            reference.oversample, config.oversample
        )));
    }
    let (waveform, monotone, diagnostics) = match config.fit_method() {
        None => (
            synthesize_lfm(config.pulse_length, config.bandwidth, config.sample_rate)?,
            true,
            Vec::new(),
        ),
        Some(method) => {
            let spec = WindowSpec::new(
                config.window_family(),
                config.bandwidth,
                config.pulse_length,
            )?;
            let model = design_frequency_function(&spec, method, config.n_points)?;
            let waveform = synthesize_nlfm(&model, config.sample_rate)?;
            (waveform, model.is_monotone(), model.diagnostics().to_vec())
        }
    };
    if waveform
        .samples()
        .iter()
        .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(nlfm_core::Error::NonFinite("waveform samples").into());
    }
    let report = AcfReport::measure_with(&waveform, reference)?;
    if report.psl_db.is_some_and(|v| !v.is_finite()) || !report.nmlw.is_finite() {
        return Err(nlfm_core::Error::NonFinite("ACF metrics").into());
    }
    Ok(DesignOutcome {
        config: config.clone(),
        waveform,
        report,
        reference: *reference,
        monotone,
        diagnostics,
    })
}

/// Runs a design and writes its artifact bundle into `config.out`.
pub fn run_design(config: &DesignConfig) -> Result<DesignOutcome> {
    let start = Instant::now();
    let outcome = design(config)?;
    artifacts::write_design(&config.out, &outcome)?;
    artifacts::write_manifest(
        &config.out,
        "design",
        serde_json::json!({ "config": config }),
        start.elapsed(),
    )?;
    Ok(outcome)
}
