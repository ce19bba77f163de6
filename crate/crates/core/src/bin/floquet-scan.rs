//! Command-line driver for configuration-file scans.
//!
//! Exit codes: 0 success, 1 configuration error, 2 every point failed,
//! 3 some points failed.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use floquet_tunneling::config::{self, ConvergeAxis, OutputFormat, RunConfig};
use floquet_tunneling::model::Waveform;
use floquet_tunneling::scan::{self, ScanTable};
use floquet_tunneling::{units, Error};

#[derive(Parser)]
#[command(name = "floquet-scan", version, about = "Floquet scattering-matrix scans of driven heterostructures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Flux-deficit tolerance; overrides the configuration.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Reserved; the solver is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    Staircase,
    NMax,
    TimeSamples,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the first point of the scan (or `--energy`).
    Solve {
        #[command(flatten)]
        common: Common,
        /// Kinetic energy in meV.
        #[arg(long)]
        energy: Option<f64>,
    },
    /// Run the full scan.
    Scan {
        #[command(flatten)]
        common: Common,
    },
    /// Refine one numerical parameter at the first scan point.
    Converge {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        axis: Option<Axis>,
    },
    /// Compare FFT and Bessel-series Floquet coefficients.
    DiagnoseBessel {
        #[command(flatten)]
        common: Common,
        /// Kinetic energy in meV of the probe momentum.
        #[arg(long, default_value_t = 100.0)]
        energy: f64,
        #[arg(long, default_value_t = 40)]
        k_max: usize,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config { .. } | Error::Json(_) | Error::Io(_) => 1,
                _ => 2,
            })
        }
    }
}

fn load(common: &Common) -> Result<RunConfig, Error> {
    let mut cfg = config::load(&common.config)?;
    if let Some(t) = common.tolerance {
        cfg.tolerance = t;
        cfg.validate()?;
    }
    if common.seed.is_some() {
        log::info!("--seed is accepted for compatibility and has no effect");
    }
    Ok(cfg)
}

fn sink(common: &Common) -> Result<Box<dyn Write>, Error> {
    Ok(match &common.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn format(common: &Common, cfg: &RunConfig) -> OutputFormat {
    match common.format {
        Some(Format::Csv) => OutputFormat::Csv,
        Some(Format::Jsonl) => OutputFormat::Jsonl,
        None => cfg.output_format(),
    }
}

fn exit_code(table: &ScanTable) -> u8 {
    match (table.ok_count(), table.failed_count()) {
        (_, 0) => 0,
        (0, _) => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Solve { common, energy } => {
            let mut cfg = load(&common)?;
            let e = energy.unwrap_or_else(|| cfg.energies_mev()[0]);
            cfg.scan.energy_mev = None;
            cfg.scan.energies_mev = Some(vec![e]);
            cfg.scan.fields_au = Some(vec![cfg.fields()[0]]);
            cfg.scan.etas = None;
            cfg.scan.phases = Some(vec![cfg.phases()[0]]);
            cfg.scan.xis = cfg.xis()[0].map(|x| vec![x]);
            let table = scan::run_scan(&cfg, common.workers)?;
            table.write(sink(&common)?, format(&common, &cfg), true)?;
            Ok(exit_code(&table))
        }
        Command::Scan { common } => {
            let cfg = load(&common)?;
            let table = scan::run_scan(&cfg, common.workers)?;
            let mut out = sink(&common)?;
            table.write(&mut out, format(&common, &cfg), true)?;
            out.flush()?;
            eprintln!("{} points, {} ok", table.rows.len(), table.ok_count());
            Ok(exit_code(&table))
        }
        Command::Converge { common, axis } => {
            let cfg = load(&common)?;
            let from_cfg = cfg.converge.as_ref();
            let axis = match axis {
                Some(Axis::Staircase) => ConvergeAxis::Staircase,
                Some(Axis::NMax) => ConvergeAxis::NMax,
                Some(Axis::TimeSamples) => ConvergeAxis::TimeSamples,
                None => from_cfg
                    .map(|c| c.axis)
                    .ok_or_else(|| Error::Config { pointer: "/converge/axis".into(), message: "no axis given".into() })?,
            };
            let levels = from_cfg.and_then(|c| c.levels.clone());
            let tol = from_cfg.map_or(1e-6, |c| c.tolerance);
            let report = scan::converge(&cfg, axis, levels.as_deref(), tol)?;
            let mut out = sink(&common)?;
            match format(&common, &cfg) {
                OutputFormat::Csv => report.write_csv(&mut out)?,
                OutputFormat::Jsonl => {
                    serde_json::to_writer(&mut out, &report)?;
                    out.write_all(b"\n")?;
                }
            }
            out.flush()?;
            match report.converged_at {
                Some(level) => eprintln!("converged at level {level}"),
                None => eprintln!("not converged to {tol:e}"),
            }
            let solved = report.rows.iter().filter(|r| r.total_transmission.is_some()).count();
            Ok(match (solved, report.flagged) {
                (0, _) => 2,
                (_, true) => 3,
                _ if solved < report.rows.len() => 3,
                _ => 0,
            })
        }
        Command::DiagnoseBessel { common, energy, k_max } => {
            let cfg = load(&common)?;
            let waveform: Waveform = cfg.waveform(cfg.phases()[0], cfg.xis()[0])?;
            let lead = *cfg.base_device()?.incident_lead();
            let scale = lead.field_scale;
            let waveform = waveform.with_amplitude(waveform.amplitude() * scale);
            let q = (2.0 * lead.mass * units::mev_to_hartree(energy)).sqrt();
            let report = scan::diagnose_bessel(&waveform, q, lead.mass, k_max)?;
            let mut out = sink(&common)?;
            serde_json::to_writer_pretty(&mut out, &report)?;
            out.write_all(b"\n")?;
            out.flush()?;
            eprintln!("max |quadrature - series| = {:e}", report.max_difference);
            Ok(0)
        }
    }
}
