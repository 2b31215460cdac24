use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::artifacts::{create_dir, echo_configs, write_json, write_lines, write_manifest};
use crate::config::{DesignConfig, MethodKind};
use crate::design::{design_with_reference, reference_widths, DesignOutcome};
use crate::error::{CliError, Result};

pub const COMPARE_CSV: &str = "compare.csv";
pub const COMPARE_JSON: &str = "compare.json";

/// One row of the long-format comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub group: usize,
    /// `gaussian`, `taylor` or `lfm`.
    pub window: String,
    /// Window with its parameters, e.g. `gaussian(k=40)`.
    pub window_params: String,
    pub method: MethodKind,
    pub method_params: String,
    pub pulse_length_s: f64,
    pub bandwidth_hz: f64,
    pub sample_rate_hz: f64,
    pub psl_db: Option<f64>,
    pub mlw_seconds: f64,
    pub nmlw: f64,
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub rows: Vec<CompareRow>,
}

impl CompareRow {
    fn from_outcome(group: usize, o: &DesignOutcome) -> Self {
        let c = &o.config;
        let (window, window_params, method_params) = match c.fit_method() {
            None => ("lfm".to_string(), "lfm".to_string(), "lfm".to_string()),
            Some(m) => (
                c.window_family().name().to_string(),
                c.window_family().to_string(),
                m.to_string(),
            ),
        };
        CompareRow {
            group,
            window,
            window_params,
            method: c.method,
            method_params,
            pulse_length_s: c.pulse_length,
            bandwidth_hz: c.bandwidth,
            sample_rate_hz: c.sample_rate,
            psl_db: o.report.psl_db,
            mlw_seconds: o.report.mlw_seconds,
            nmlw: o.report.nmlw,
            monotone: o.monotone,
        }
    }
}

/// Groups configs by `(T, B)` in order of first appearance and checks that
/// each group shares its sample rate and oversampling.
fn group_configs(configs: &[DesignConfig]) -> Result<Vec<Vec<&DesignConfig>>> {
    let mut groups: Vec<Vec<&DesignConfig>> = Vec::new();
    for c in configs {
        match groups
            .iter_mut()
            .find(|g| g[0].pulse_length == c.pulse_length && g[0].bandwidth == c.bandwidth)
        {
            Some(g) => {
                let first = g[0];
                if first.sample_rate != c.sample_rate || first.oversample != c.oversample {
                    return Err(CliError::InvalidComparison(format!(
                        "configs with T = {:e} s, B = {:e} Hz mix fs/oversample \
                         ({:e} Hz x{} vs {:e} Hz x{})",
                        c.pulse_length,
                        c.bandwidth,
                        first.sample_rate,
                        first.oversample,
                        c.sample_rate,
                        c.oversample
                    )));
                }
                g.push(c);
            }
            None => groups.push(vec![c]),
        }
    }
    Ok(groups)
}

/// Evaluates every config plus one LFM row per `(T, B)` group (unless the
/// group already holds an LFM config). Rows follow input order within a group.
pub fn compare(configs: &[DesignConfig]) -> Result<Comparison> {
    if configs.is_empty() {
        return Err(CliError::Usage("compare needs at least one config".into()));
    }
    let groups = group_configs(configs)?;
    let mut jobs: Vec<(usize, DesignConfig)> = Vec::new();
    for (gi, g) in groups.iter().enumerate() {
        jobs.extend(g.iter().map(|c| (gi, (*c).clone())));
        if g.iter().all(|c| c.method != MethodKind::Lfm) {
            jobs.push((
                gi,
                DesignConfig {
                    method: MethodKind::Lfm,
                    ..g[0].clone()
                },
            ));
        }
    }
    let references = groups
        .iter()
        .map(|g| reference_widths(g[0]))
        .collect::<Result<Vec<_>>>()?;
    let rows = jobs
        .par_iter()
        .map(|(gi, c)| {
            design_with_reference(c, &references[*gi]).map(|o| CompareRow::from_outcome(*gi, &o))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Comparison { rows })
}

/// Runs [`compare`] and writes `compare.csv`, `compare.json` and a manifest into `out`.
pub fn run_compare(configs: &[DesignConfig], out: &Path) -> Result<Comparison> {
    let start = Instant::now();
    let table = compare(configs)?;
    create_dir(out)?;
    write_lines(&out.join(COMPARE_CSV), table.csv_lines())?;
    write_json(&out.join(COMPARE_JSON), &table)?;
    write_manifest(out, "compare", echo_configs(configs), start.elapsed())?;
    Ok(table)
}

fn micros(t: f64) -> String {
    let s = format!("{:.3}", t * 1e6);
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

impl Comparison {
    pub fn csv_lines(&self) -> Vec<String> {
        let mut lines = vec![
            "group,window,window_params,method,method_params,pulse_length_s,bandwidth_hz,\
             sample_rate_hz,psl_db,mlw_seconds,nmlw,monotone"
                .to_string(),
        ];
        for r in &self.rows {
            lines.push(format!(
                "{},{},\"{}\",{},\"{}\",{},{},{},{},{},{},{}",
                r.group,
                r.window,
                r.window_params,
                r.method,
                r.method_params,
                r.pulse_length_s,
                r.bandwidth_hz,
                r.sample_rate_hz,
                fmt_opt(r.psl_db),
                r.mlw_seconds,
                r.nmlw,
                r.monotone
            ));
        }
        lines
    }

    /// PSL and NMLW tables with one row per (window, T) and one column per
    /// method; the group's LFM value fills the `LFM` column.
    pub fn pivot(&self) -> String {
        struct Line {
            key: (String, usize),
            title: String,
            cells: [Option<(Option<f64>, f64)>; 2],
        }
        let mut lines: Vec<Line> = Vec::new();
        for r in self.rows.iter().filter(|r| r.method != MethodKind::Lfm) {
            let col = usize::from(r.method == MethodKind::Spline);
            let key = (r.window_params.clone(), r.group);
            let slot = lines
                .iter_mut()
                .find(|l| l.key == key && l.cells[col].is_none());
            let cell = Some((r.psl_db, r.nmlw));
            match slot {
                Some(l) => l.cells[col] = cell,
                None => {
                    let mut cells = [None, None];
                    cells[col] = cell;
                    lines.push(Line {
                        key,
                        title: format!("{} T = {} us", r.window_params, micros(r.pulse_length_s)),
                        cells,
                    });
                }
            }
        }
        let lfm = |group: usize| {
            self.rows
                .iter()
                .find(|r| r.group == group && r.method == MethodKind::Lfm)
                .map(|r| (r.psl_db, r.nmlw))
        };
        let lfm_only: Vec<&CompareRow> = self
            .rows
            .iter()
            .filter(|r| r.method == MethodKind::Lfm && !lines.iter().any(|l| l.key.1 == r.group))
            .collect();

        let mut s = String::new();
        for (heading, psl) in [("PSL (dB)", true), ("NMLW", false)] {
            let value = |c: Option<(Option<f64>, f64)>| match c {
                None => "-".to_string(),
                Some((p, n)) => {
                    if psl {
                        p.map_or("none".to_string(), |p| format!("{p:.2}"))
                    } else {
                        format!("{n:.2}")
                    }
                }
            };
            writeln!(s, "{heading}").unwrap();
            writeln!(
                s,
                "{:<40}{:>12}{:>18}{:>10}",
                "window", "polynomial", "smoothing spline", "LFM"
            )
            .unwrap();
            for l in &lines {
                writeln!(
                    s,
                    "{:<40}{:>12}{:>18}{:>10}",
                    l.title,
                    value(l.cells[0]),
                    value(l.cells[1]),
                    value(lfm(l.key.1))
                )
                .unwrap();
            }
            for r in &lfm_only {
                writeln!(
                    s,
                    "{:<40}{:>12}{:>18}{:>10}",
                    format!("LFM T = {} us", micros(r.pulse_length_s)),
                    "-",
                    "-",
                    value(Some((r.psl_db, r.nmlw)))
                )
                .unwrap();
            }
            writeln!(s).unwrap();
        }
        s
    }
}
