use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::artifacts::{create_dir, write_json, write_lines, write_manifest};
use crate::config::{parse_pairs, DesignConfig};
use crate::design::{design_with_reference, reference_widths, Metrics};
use crate::error::{CliError, Result};

pub const SWEEP_CSV: &str = "sweep.csv";
pub const BEST_JSON: &str = "best.json";

/// Default weight of NMLW in the weighted objective, in dB per unit NMLW.
pub const DEFAULT_ALPHA: f64 = 10.0;

/// Ranking used to pick the best grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Lowest PSL.
    Psl,
    /// Lowest `psl_db + alpha * nmlw`.
    Weighted,
}

impl Objective {
    pub fn score(&self, m: &Metrics, alpha: f64) -> Option<f64> {
        let psl = m.psl_db?;
        Some(match self {
            Objective::Psl => psl,
            Objective::Weighted => psl + alpha * m.nmlw,
        })
    }
}

/// Value lists for the swept parameters. An empty list keeps the base
/// config's value, so the grid always has at least one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub k: Vec<f64>,
    pub nbar: Vec<usize>,
    pub eta_db: Vec<f64>,
    pub lambda: Vec<f64>,
    pub degree: Vec<usize>,
    pub n_points: Vec<usize>,
    pub objective: Objective,
    pub alpha: f64,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            k: Vec::new(),
            nbar: Vec::new(),
            eta_db: Vec::new(),
            lambda: Vec::new(),
            degree: Vec::new(),
            n_points: Vec::new(),
            objective: Objective::Psl,
            alpha: DEFAULT_ALPHA,
        }
    }
}

/// Parameters of one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub k: f64,
    pub nbar: usize,
    pub eta_db: f64,
    pub lambda: f64,
    pub degree: usize,
    pub n_points: usize,
}

impl GridPoint {
    pub fn apply(&self, base: &DesignConfig) -> DesignConfig {
        DesignConfig {
            k: self.k,
            nbar: self.nbar,
            eta_db: self.eta_db,
            lambda: self.lambda,
            degree: self.degree,
            n_points: self.n_points,
            ..base.clone()
        }
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Config(format!("{key}: cannot parse '{}'", s.trim())))
        })
        .collect()
}

/// `a,b,c` or `logspace(lo, hi, n)` (base-10 exponents, `n` points inclusive).
fn parse_real_list(key: &str, text: &str) -> Result<Vec<f64>> {
    let t = text.trim();
    if let Some(inner) = t
        .strip_prefix("logspace(")
        .and_then(|s| s.strip_suffix(')'))
    {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let bad = || CliError::Config(format!("{key}: expected logspace(lo, hi, n), got '{t}'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let n: usize = parts[2].parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        return Ok(logspace(lo, hi, n));
    }
    parse_list(key, t)
}

/// `n` values `10^e` with exponents evenly spaced from `lo` to `hi`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![10f64.powf(lo)];
    }
    (0..n)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (n - 1) as f64))
        .collect()
}

impl SweepGrid {
    /// Sets one list from text. Keys: `k`, `nbar`, `eta_db` (or `eta`),
    /// `lambda`, `degree`, `n_points`, plus `objective` (`psl` | `weighted`)
    /// and `alpha`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim().replace('-', "_").as_str() {
            "k" => self.k = parse_real_list(key, value)?,
            "nbar" => self.nbar = parse_list(key, value)?,
            "eta" | "eta_db" => self.eta_db = parse_real_list(key, value)?,
            "lambda" => self.lambda = parse_real_list(key, value)?,
            "degree" => self.degree = parse_list(key, value)?,
            "n_points" => self.n_points = parse_list(key, value)?,
            "objective" => {
                self.objective = match value.trim() {
                    "psl" => Objective::Psl,
                    "weighted" => Objective::Weighted,
                    other => {
                        return Err(CliError::Config(format!(
                            "unknown objective '{other}' (psl | weighted)"
                        )))
                    }
                }
            }
            "alpha" => {
                self.alpha = value
                    .trim()
                    .parse()
                    .ok()
                    .filter(|a: &f64| a.is_finite())
                    .ok_or_else(|| CliError::Config(format!("alpha: cannot parse '{value}'")))?;
            }
            _ => return Err(CliError::Config(format!("unknown sweep key '{key}'"))),
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut grid = SweepGrid::default();
        for (k, v) in parse_pairs(text)? {
            grid.set(&k, &v)?;
        }
        Ok(grid)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_text(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Cartesian product in grid order: `k` varies slowest, `n_points` fastest.
    pub fn points(&self, base: &DesignConfig) -> Vec<GridPoint> {
        fn or<T: Copy>(v: &[T], d: T) -> Vec<T> {
            if v.is_empty() {
                vec![d]
            } else {
                v.to_vec()
            }
        }
        let mut pts = Vec::new();
        for &k in &or(&self.k, base.k) {
            for &nbar in &or(&self.nbar, base.nbar) {
                for &eta_db in &or(&self.eta_db, base.eta_db) {
                    for &lambda in &or(&self.lambda, base.lambda) {
                        for &degree in &or(&self.degree, base.degree) {
                            for &n_points in &or(&self.n_points, base.n_points) {
                                pts.push(GridPoint {
                                    k,
                                    nbar,
                                    eta_db,
                                    lambda,
                                    degree,
                                    n_points,
                                });
                            }
                        }
                    }
                }
            }
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub point: GridPoint,
    /// Metrics, or the reason this point failed.
    pub result: std::result::Result<Metrics, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestPoint {
    pub index: usize,
    pub point: GridPoint,
    pub metrics: Metrics,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub objective: Objective,
    pub alpha: f64,
}

impl SweepOutcome {
    /// Best successful, monotone row under `objective`; ties go to the
    /// earlier grid index. Rows without sidelobes are not ranked.
    pub fn best(&self, objective: Objective) -> Option<BestPoint> {
        let mut best: Option<BestPoint> = None;
        for row in &self.rows {
            let Ok(m) = &row.result else { continue };
            if !m.monotone {
                continue;
            }
            let Some(score) = objective.score(m, self.alpha) else {
                continue;
            };
            if best.as_ref().is_none_or(|b| score < b.score) {
                best = Some(BestPoint {
                    index: row.index,
                    point: row.point,
                    metrics: *m,
                    score,
                });
            }
        }
        best
    }

    pub fn csv_lines(&self) -> Vec<String> {
        let mut lines = vec![
            "index,k,nbar,eta_db,lambda,degree,n_points,status,psl_db,mlw_seconds,nmlw,monotone,error"
                .to_string(),
        ];
        for r in &self.rows {
            let p = &r.point;
            let params = format!(
                "{},{},{},{},{:e},{},{}",
                r.index, p.k, p.nbar, p.eta_db, p.lambda, p.degree, p.n_points
            );
            lines.push(match &r.result {
                Ok(m) => format!(
                    "{params},ok,{},{},{},{},",
                    m.psl_db.map_or_else(String::new, |v| v.to_string()),
                    m.mlw_seconds,
                    m.nmlw,
                    m.monotone
                ),
                Err(e) => format!("{params},failed,,,,,\"{}\"", e.replace('"', "'")),
            });
        }
        lines
    }

    fn best_json(&self) -> serde_json::Value {
        serde_json::json!({
            "objective": self.objective,
            "alpha": self.alpha,
            "selected": self.best(self.objective),
            "psl": self.best(Objective::Psl),
            "weighted": self.best(Objective::Weighted),
            "points": self.rows.len(),
            "failed": self.rows.iter().filter(|r| r.result.is_err()).count(),
        })
    }
}

/// Evaluates every grid point on `jobs` threads (0 = all cores). The LFM
/// reference is computed once; rows come back in grid order, and a point
/// that fails is recorded rather than aborting the sweep.
pub fn sweep(base: &DesignConfig, grid: &SweepGrid, jobs: usize) -> Result<SweepOutcome> {
    let reference = reference_widths(base)?;
    let points = grid.points(base);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::ThreadPool(e.to_string()))?;
    let rows = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(index, point)| SweepRow {
                index,
                point: *point,
                result: design_with_reference(&point.apply(base), &reference)
                    .map(|o| o.metrics())
                    .map_err(|e| e.to_string()),
            })
            .collect()
    });
    Ok(SweepOutcome {
        rows,
        objective: grid.objective,
        alpha: grid.alpha,
    })
}

/// Runs [`sweep`] and writes `sweep.csv`, `best.json` and a manifest into `base.out`.
pub fn run_sweep(base: &DesignConfig, grid: &SweepGrid, jobs: usize) -> Result<SweepOutcome> {
    let start = Instant::now();
    let outcome = sweep(base, grid, jobs)?;
    create_dir(&base.out)?;
    write_lines(&base.out.join(SWEEP_CSV), outcome.csv_lines())?;
    write_json(&base.out.join(BEST_JSON), &outcome.best_json())?;
    write_manifest(
        &base.out,
        "sweep",
        serde_json::json!({ "config": base, "grid": grid, "jobs": jobs }),
        start.elapsed(),
    )?;
    Ok(outcome)
}
