use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Duration;

use nlfm_core::acf::{AcfCurve, AcfReport, ReferenceWidths};
use nlfm_core::window::WindowFamily;
use num_complex::Complex64;
use serde::Serialize;

use crate::config::DesignConfig;
use crate::design::DesignOutcome;
use crate::error::{CliError, Result};

pub const WAVEFORM_CSV: &str = "waveform.csv";
pub const WAVEFORM_IQ: &str = "waveform.iq";
pub const WAVEFORM_META: &str = "waveform.meta.json";
pub const ACF_CSV: &str = "acf.csv";
pub const REPORT_JSON: &str = "report.json";
pub const ACF_SVG: &str = "acf.svg";
pub const MANIFEST_JSON: &str = "manifest.json";

/// Half-width of the plotted lag window.
pub const PLOT_HALF_SPAN: f64 = 1e-6;

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub(crate) fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("artifact serializes");
    text.push('\n');
    write_bytes(path, text.as_bytes())
}

#[derive(Serialize)]
struct WaveformMeta<'a> {
    label: &'a str,
    sample_rate_hz: f64,
    pulse_length_s: f64,
    samples: usize,
    iq_format: &'static str,
}

/// `report.json`: metrics plus the parameters that produced them.
#[derive(Serialize)]
struct Report<'a> {
    label: String,
    window: Option<WindowFamily>,
    method: serde_json::Value,
    pulse_length_s: f64,
    bandwidth_hz: f64,
    sample_rate_hz: f64,
    n_points: Option<usize>,
    oversample: usize,
    samples: usize,
    monotone: bool,
    diagnostics: &'a [String],
    metrics: &'a AcfReport,
    reference: &'a ReferenceWidths,
}

fn report<'a>(o: &'a DesignOutcome) -> Report<'a> {
    let c = &o.config;
    let fit = c.fit_method();
    Report {
        label: c.label(),
        window: fit.map(|_| c.window_family()),
        method: match fit {
            Some(m) => serde_json::to_value(m).expect("method serializes"),
            None => serde_json::json!({ "method": "lfm" }),
        },
        pulse_length_s: c.pulse_length,
        bandwidth_hz: c.bandwidth,
        sample_rate_hz: c.sample_rate,
        n_points: fit.map(|_| c.n_points),
        oversample: c.oversample,
        samples: o.waveform.len(),
        monotone: o.monotone,
        diagnostics: &o.diagnostics,
        metrics: &o.report,
        reference: &o.reference,
    }
}

/// Writes the data files of one design. None of them carries run metadata,
/// so identical configs give identical bytes.
pub fn write_design(dir: &Path, o: &DesignOutcome) -> Result<()> {
    create_dir(dir)?;
    let w = &o.waveform;

    let mut csv = String::with_capacity(w.len() * 64);
    csv.push_str("index,t_seconds,re,im\n");
    for (i, (t, z)) in w.times().iter().zip(w.samples()).enumerate() {
        writeln!(csv, "{i},{t:e},{:e},{:e}", z.re, z.im).unwrap();
    }
    write_bytes(&dir.join(WAVEFORM_CSV), csv.as_bytes())?;

    let mut iq = Vec::with_capacity(w.len() * 16);
    for z in w.samples() {
        iq.extend_from_slice(&z.re.to_le_bytes());
        iq.extend_from_slice(&z.im.to_le_bytes());
    }
    write_bytes(&dir.join(WAVEFORM_IQ), &iq)?;

    write_json(
        &dir.join(WAVEFORM_META),
        &WaveformMeta {
            label: w.label(),
            sample_rate_hz: w.sample_rate(),
            pulse_length_s: w.pulse_length(),
            samples: w.len(),
            iq_format: "interleaved little-endian f64 I/Q pairs",
        },
    )?;

    write_bytes(
        &dir.join(ACF_CSV),
        acf_csv(&o.report.refined_curve).as_bytes(),
    )?;
    write_json(&dir.join(REPORT_JSON), &report(o))?;
    write_bytes(
        &dir.join(ACF_SVG),
        acf_svg(&o.report.refined_curve, o.report.psl_db, &o.config.label()).as_bytes(),
    )?;
    Ok(())
}

pub fn acf_csv(curve: &AcfCurve) -> String {
    let mut csv = String::with_capacity(curve.len() * 64);
    csv.push_str("lag_seconds,magnitude,db\n");
    for ((lag, m), db) in curve.lags().iter().zip(curve.magnitude()).zip(curve.db()) {
        writeln!(csv, "{lag:e},{m:e},{db:e}").unwrap();
    }
    csv
}

/// Run metadata kept apart from the data files.
pub fn write_manifest(
    dir: &Path,
    command: &str,
    echo: serde_json::Value,
    wall_time: Duration,
) -> Result<()> {
    create_dir(dir)?;
    write_json(
        &dir.join(MANIFEST_JSON),
        &serde_json::json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "input": echo,
            "wall_time_seconds": wall_time.as_secs_f64(),
        }),
    )
}

/// Reads the complex samples back from a `waveform.csv`.
pub fn read_waveform_csv(path: &Path) -> Result<Vec<Complex64>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut samples = Vec::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        if lineno == 0 {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|_| {
                CliError::Config(format!(
                    "{}:{}: bad number '{s}'",
                    path.display(),
                    lineno + 1
                ))
            })
        };
        if fields.len() != 4 {
            return Err(CliError::Config(format!(
                "{}:{}: expected 4 columns",
                path.display(),
                lineno + 1
            )));
        }
        samples.push(Complex64::new(parse(fields[2])?, parse(fields[3])?));
    }
    Ok(samples)
}

/// Line plot of the ACF in dB over `±PLOT_HALF_SPAN` with the PSL marked.
pub fn acf_svg(curve: &AcfCurve, psl_db: Option<f64>, title: &str) -> String {
    const W: f64 = 800.0;
    const H: f64 = 480.0;
    const LEFT: f64 = 70.0;
    const RIGHT: f64 = 20.0;
    const TOP: f64 = 40.0;
    const BOTTOM: f64 = 50.0;

    let floor = psl_db
        .map_or(-60.0, |p| ((p - 20.0) / 10.0).floor() * 10.0)
        .clamp(-120.0, -40.0);
    let px = |lag: f64| LEFT + (lag + PLOT_HALF_SPAN) / (2.0 * PLOT_HALF_SPAN) * (W - LEFT - RIGHT);
    let py = |db: f64| TOP + (-db.max(floor)) / (-floor) * (H - TOP - BOTTOM);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2.0,
        escape(title)
    )
    .unwrap();

    for i in 0..=8 {
        let lag = -PLOT_HALF_SPAN + i as f64 * PLOT_HALF_SPAN / 4.0;
        let x = px(lag);
        writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{:.2}</text>"##,
            H - BOTTOM,
            H - BOTTOM + 18.0,
            lag * 1e6
        )
        .unwrap();
    }
    let mut db = 0.0;
    while db >= floor {
        let y = py(db);
        writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{db}</text>"##,
            W - RIGHT,
            LEFT - 6.0,
            y + 4.0
        )
        .unwrap();
        db -= 10.0;
    }
    writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">lag (us)</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 10.0
    )
    .unwrap();
    writeln!(
        svg,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">|ACF| (dB)</text>"#,
        (TOP + H - BOTTOM) / 2.0,
        (TOP + H - BOTTOM) / 2.0
    )
    .unwrap();

    svg.push_str(r##"<polyline fill="none" stroke="#1f4e9c" stroke-width="1" points=""##);
    for (lag, db) in curve.lags().iter().zip(curve.db()) {
        if lag.abs() <= PLOT_HALF_SPAN {
            write!(svg, "{:.2},{:.2} ", px(*lag), py(*db)).unwrap();
        }
    }
    svg.push_str("\"/>\n");

    if let Some(p) = psl_db {
        let y = py(p);
        writeln!(
            svg,
            r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#c0392b" stroke-dasharray="6 4"/><text x="{:.2}" y="{:.2}" text-anchor="end" fill="#c0392b">PSL {p:.2} dB</text>"##,
            W - RIGHT,
            W - RIGHT - 4.0,
            y - 5.0
        )
        .unwrap();
    }
    writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    )
    .unwrap();
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Writes rows as CSV through a buffered file.
pub(crate) fn write_lines<I: IntoIterator<Item = String>>(path: &Path, lines: I) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    for line in lines {
        writeln!(out, "{line}").map_err(|e| CliError::io(path, e))?;
    }
    out.flush().map_err(|e| CliError::io(path, e))
}

/// Config echo used in manifests.
pub(crate) fn echo_configs(configs: &[DesignConfig]) -> serde_json::Value {
    serde_json::json!({ "configs": configs })
}
