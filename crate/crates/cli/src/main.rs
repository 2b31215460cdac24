use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nlfm_cli::config::DesignConfig;
use nlfm_cli::error::{CliError, Result};
use nlfm_cli::sweep::SweepGrid;
use nlfm_cli::{run_compare, run_design, run_sweep};

#[derive(Parser)]
#[command(name = "nlfm", version, about = "Stationary-phase NLFM pulse design")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Design one pulse and write its waveform, ACF, report and plot.
    Design {
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Tabulate PSL and NMLW for several configs against their LFM references.
    Compare {
        /// Config file; repeat for each design.
        #[arg(long = "config", required = true)]
        configs: Vec<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Evaluate a parameter grid around a base config.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Grid file of `key = v1, v2, ...` or `key = logspace(lo, hi, n)` lines.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// Grid entry `key=list`; overrides the grid file.
        #[arg(long = "vary", value_name = "KEY=LIST")]
        vary: Vec<String>,
        /// psl | weighted
        #[arg(long)]
        objective: Option<String>,
        /// NMLW weight of the weighted objective (dB per unit NMLW).
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// Worker threads, 0 for all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        overrides: Overrides,
    },
}

/// Flags that override config-file values. Times accept s/ms/us/ns and
/// frequencies Hz/kHz/MHz/GHz suffixes.
#[derive(Args, Default)]
struct Overrides {
    /// gaussian | taylor
    #[arg(long)]
    window: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long)]
    nbar: Option<String>,
    /// Taylor sidelobe level in dB.
    #[arg(long, allow_hyphen_values = true)]
    eta: Option<String>,
    /// Pulse length.
    #[arg(long = "T", value_name = "TIME")]
    pulse_length: Option<String>,
    /// Bandwidth.
    #[arg(long = "B", value_name = "FREQ")]
    bandwidth: Option<String>,
    /// Sample rate.
    #[arg(long = "fs", value_name = "FREQ")]
    sample_rate: Option<String>,
    /// polynomial | spline | lfm
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    degree: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    #[arg(long = "n-points")]
    n_points: Option<String>,
    #[arg(long)]
    oversample: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
}

impl Overrides {
    fn apply(&self, config: &mut DesignConfig) -> Result<()> {
        let pairs = [
            ("window", &self.window),
            ("k", &self.k),
            ("nbar", &self.nbar),
            ("eta_db", &self.eta),
            ("pulse_length", &self.pulse_length),
            ("bandwidth", &self.bandwidth),
            ("sample_rate", &self.sample_rate),
            ("method", &self.method),
            ("degree", &self.degree),
            ("lambda", &self.lambda),
            ("n_points", &self.n_points),
            ("oversample", &self.oversample),
            ("out", &self.out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        Ok(())
    }
}

fn load(path: Option<&PathBuf>, overrides: &Overrides) -> Result<DesignConfig> {
    let mut config = match path {
        Some(p) => DesignConfig::load(p)?,
        None => DesignConfig::default(),
    };
    overrides.apply(&mut config)?;
    config.validate()?;
    Ok(config)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Design { config, overrides } => {
            let config = load(config.as_ref(), &overrides)?;
            let o = run_design(&config)?;
            let psl = o
                .report
                .psl_db
                .map_or("none".to_string(), |p| format!("{p:.2} dB"));
            println!(
                "{}: PSL {psl}, MLW {:.4e} s, NMLW {:.3}{}",
                config.label(),
                o.report.mlw_seconds,
                o.report.nmlw,
                if o.monotone {
                    ""
                } else {
                    " (non-monotone design)"
                }
            );
            for d in &o.diagnostics {
                eprintln!("warning: {d}");
            }
        }
        Command::Compare { configs, overrides } => {
            let configs = configs
                .iter()
                .map(|p| load(Some(p), &overrides))
                .collect::<Result<Vec<_>>>()?;
            let out = overrides
                .out
                .as_ref()
                .map_or_else(|| PathBuf::from("out"), PathBuf::from);
            let table = run_compare(&configs, &out)?;
            print!("{}", table.pivot());
        }
        Command::Sweep {
            config,
            grid,
            vary,
            objective,
            alpha,
            jobs,
            overrides,
        } => {
            let base = load(config.as_ref(), &overrides)?;
            let mut sweep_grid = match &grid {
                Some(p) => SweepGrid::load(p)?,
                None => SweepGrid::default(),
            };
            for entry in &vary {
                let (key, list) = entry.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!("--vary expects KEY=LIST, got '{entry}'"))
                })?;
                sweep_grid.set(key, list)?;
            }
            if let Some(o) = &objective {
                sweep_grid.set("objective", o)?;
            }
            if let Some(a) = &alpha {
                sweep_grid.set("alpha", a)?;
            }
            let outcome = run_sweep(&base, &sweep_grid, jobs)?;
            let failed = outcome.rows.iter().filter(|r| r.result.is_err()).count();
            println!("{} points, {failed} failed", outcome.rows.len());
            match outcome.best(sweep_grid.objective) {
                Some(b) => println!(
                    "best #{}: k={} nbar={} eta={} lambda={:e} degree={} n_points={} -> PSL {:.2} dB, NMLW {:.3}",
                    b.index,
                    b.point.k,
                    b.point.nbar,
                    b.point.eta_db,
                    b.point.lambda,
                    b.point.degree,
                    b.point.n_points,
                    b.metrics.psl_db.unwrap_or(f64::NAN),
                    b.metrics.nmlw
                ),
                None => println!("no point qualified"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help / --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
