//! Parameter scans, convergence studies and the Bessel diagnostic.

use std::io::Write;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bessel;
use crate::config::{ConvergeAxis, OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::floquet::{fourier_b, phase_integral, ChannelGrid, TimeSampling};
use crate::model::{vector_potential_samples, Device, Waveform, WaveformKind};
use crate::solver::{self, SolverOptions, Truncation};
use crate::units;

/// Version of the row layout written by [`ScanTable`].
pub const SCHEMA_VERSION: u32 = 1;

/// One point of the scan grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub xi: Option<f64>,
    pub phase: f64,
    pub field_au: f64,
    pub energy_mev: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// Solved, but the flux deficit exceeds the tolerance.
    Deficit,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Deficit => "deficit",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub schema_version: u32,
    pub index: usize,
    pub energy_mev: f64,
    pub field_au: f64,
    pub phase: f64,
    pub xi: Option<f64>,
    pub status: Status,
    pub message: String,
    pub n_max: Option<usize>,
    pub total_transmission: Option<f64>,
    pub total_reflection: Option<f64>,
    pub unitarity_deficit: Option<f64>,
    /// `P_T(N)` for `N = -report_width ..= report_width`.
    pub channel_transmission: Vec<Option<f64>>,
    pub wall_time_ms: f64,
}

#[derive(Clone, Debug)]
pub struct ScanTable {
    pub report_width: usize,
    pub rows: Vec<ScanRow>,
}

impl ScanTable {
    pub fn ok_count(&self) -> usize {
        self.rows.iter().filter(|r| r.status == Status::Ok).count()
    }

    pub fn failed_count(&self) -> usize {
        self.rows.len() - self.ok_count()
    }

    fn header(&self, timing: bool) -> Vec<String> {
        let mut h: Vec<String> = [
            "schema_version",
            "index",
            "energy_mev",
            "field_au",
            "phase",
            "xi",
            "status",
            "n_max",
            "total_transmission",
            "total_reflection",
            "unitarity_deficit",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let w = self.report_width as i64;
        h.extend((-w..=w).map(|n| format!("t_{n}")));
        h.push("message".into());
        if timing {
            h.push("wall_time_ms".into());
        }
        h
    }

    /// CSV with one header line. `timing = false` drops the wall-time column,
    /// leaving a payload that is identical across runs.
    pub fn write_csv<W: Write>(&self, out: W, timing: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header(timing))?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            let mut rec = vec![
                r.schema_version.to_string(),
                r.index.to_string(),
                r.energy_mev.to_string(),
                r.field_au.to_string(),
                r.phase.to_string(),
                opt(r.xi),
                r.status.as_str().to_string(),
                r.n_max.map(|n| n.to_string()).unwrap_or_default(),
                opt(r.total_transmission),
                opt(r.total_reflection),
                opt(r.unitarity_deficit),
            ];
            rec.extend(r.channel_transmission.iter().map(|&v| opt(v)));
            rec.push(r.message.clone());
            if timing {
                rec.push(r.wall_time_ms.to_string());
            }
            w.write_record(rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// One JSON object per row.
    pub fn write_jsonl<W: Write>(&self, mut out: W, timing: bool) -> Result<()> {
        for r in &self.rows {
            let mut v = serde_json::to_value(r)?;
            if !timing {
                v.as_object_mut().expect("row is an object").remove("wall_time_ms");
            }
            serde_json::to_writer(&mut out, &v)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, out: W, format: OutputFormat, timing: bool) -> Result<()> {
        match format {
            OutputFormat::Csv => self.write_csv(out, timing),
            OutputFormat::Jsonl => self.write_jsonl(out, timing),
        }
    }

    pub fn to_string(&self, format: OutputFormat, timing: bool) -> Result<String> {
        let mut buf = Vec::new();
        self.write(&mut buf, format, timing)?;
        Ok(String::from_utf8(buf).expect("writers emit UTF-8"))
    }
}

/// Scan grid in output order: `xi`, then phase, then field, then energy.
pub fn scan_points(cfg: &RunConfig) -> Vec<ScanPoint> {
    let energies = cfg.energies_mev();
    let mut points = Vec::new();
    for xi in cfg.xis() {
        for phase in cfg.phases() {
            for field_au in cfg.fields() {
                for &energy_mev in &energies {
                    points.push(ScanPoint { xi, phase, field_au, energy_mev });
                }
            }
        }
    }
    points
}

/// Run every scan point on a pool of `workers` threads (default: all cores).
///
/// Row order follows [`scan_points`] regardless of scheduling, and each point
/// is a pure function of the configuration, so the payload does not depend
/// on the worker count.
pub fn run_scan(cfg: &RunConfig, workers: Option<usize>) -> Result<ScanTable> {
    let points = scan_points(cfg);
    // one device per (xi, phase, field) combination
    let mut devices: Vec<((Option<f64>, f64, f64), std::result::Result<Device, String>)> = Vec::new();
    for p in &points {
        let key = (p.xi, p.phase, p.field_au);
        if !devices.iter().any(|(k, _)| *k == key) {
            let d = cfg.device(p.field_au, p.phase, p.xi).map_err(|e| e.to_string());
            devices.push((key, d));
        }
    }
    let opts = cfg.solver_options();
    let pool = pool(workers)?;
    let rows = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(index, p)| {
                let device = &devices.iter().find(|(k, _)| *k == (p.xi, p.phase, p.field_au)).expect("built above").1;
                solve_point(cfg, &opts, index, p, device)
            })
            .collect::<Vec<_>>()
    });
    Ok(ScanTable { report_width: cfg.report_width, rows })
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        b = b.num_threads(n.max(1));
    }
    b.build().map_err(|e| Error::config("/workers", e.to_string()))
}

fn solve_point(
    cfg: &RunConfig,
    opts: &SolverOptions,
    index: usize,
    p: &ScanPoint,
    device: &std::result::Result<Device, String>,
) -> ScanRow {
    let start = Instant::now();
    let w = cfg.report_width as i64;
    let mut row = ScanRow {
        schema_version: SCHEMA_VERSION,
        index,
        energy_mev: p.energy_mev,
        field_au: p.field_au,
        phase: p.phase,
        xi: p.xi,
        status: Status::Error,
        message: String::new(),
        n_max: None,
        total_transmission: None,
        total_reflection: None,
        unitarity_deficit: None,
        channel_transmission: vec![None; (2 * w + 1) as usize],
        wall_time_ms: 0.0,
    };
    let outcome = device
        .as_ref()
        .map_err(|e| e.clone())
        .and_then(|d| solver::solve_kinetic(d, units::mev_to_hartree(p.energy_mev), opts).map_err(|e| e.to_string()));
    match outcome {
        Ok(r) => {
            row.status = if r.unitarity_deficit <= cfg.tolerance { Status::Ok } else { Status::Deficit };
            row.n_max = Some(r.n_max);
            row.total_transmission = Some(r.total_transmission);
            row.total_reflection = Some(r.total_reflection);
            row.unitarity_deficit = Some(r.unitarity_deficit);
            row.channel_transmission = (-w..=w).map(|n| r.transmission_into(n)).collect();
            if r.energy_shift != 0.0 {
                row.message = format!("energy shifted by {:e} meV off a channel threshold", units::hartree_to_mev(r.energy_shift));
            }
        }
        Err(message) => row.message = message,
    }
    row.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    row
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergeRow {
    pub level: usize,
    pub total_transmission: Option<f64>,
    pub total_reflection: Option<f64>,
    pub unitarity_deficit: Option<f64>,
    /// `|T(level) - T(previous level)|`.
    pub change: Option<f64>,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergeReport {
    pub axis: ConvergeAxis,
    pub energy_mev: f64,
    pub tolerance: f64,
    pub rows: Vec<ConvergeRow>,
    /// First level whose total transmission differs from the previous level's
    /// by less than `tolerance`.
    pub converged_at: Option<usize>,
    /// Set when no pair of successive levels agreed.
    pub flagged: bool,
}

impl ConvergeReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["level", "total_transmission", "total_reflection", "unitarity_deficit", "change", "message"])?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.level.to_string(),
                opt(r.total_transmission),
                opt(r.total_reflection),
                opt(r.unitarity_deficit),
                opt(r.change),
                r.message.clone(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn default_levels(axis: ConvergeAxis) -> Vec<usize> {
    match axis {
        ConvergeAxis::Staircase => vec![15, 29, 43, 57, 71, 85, 99, 113, 127, 141, 169, 197, 225, 281],
        ConvergeAxis::NMax => vec![0, 1, 2, 4, 6, 8, 12, 16, 24, 32, 40],
        ConvergeAxis::TimeSamples => vec![256, 512, 1024, 2048, 4096, 8192],
    }
}

/// Refine one numerical parameter at the first scan point and tabulate the
/// total transmission against it.
pub fn converge(cfg: &RunConfig, axis: ConvergeAxis, levels: Option<&[usize]>, tolerance: f64) -> Result<ConvergeReport> {
    let p = *scan_points(cfg).first().expect("validated config has points");
    let levels = levels.map(<[usize]>::to_vec).unwrap_or_else(|| default_levels(axis));
    if axis == ConvergeAxis::Staircase && p.field_au == 0.0 {
        return Err(Error::config("/static_field", "staircase convergence needs a static field"));
    }
    let kinetic = units::mev_to_hartree(p.energy_mev);
    let base = cfg.device(0.0, p.phase, p.xi)?;
    let opts = cfg.solver_options();
    let mut rows: Vec<ConvergeRow> = Vec::with_capacity(levels.len());
    for &level in &levels {
        let outcome = match axis {
            ConvergeAxis::Staircase => {
                base.discretize_stark(p.field_au, level).and_then(|d| solver::solve_kinetic(&d, kinetic, &opts))
            }
            ConvergeAxis::NMax => cfg.device(p.field_au, p.phase, p.xi).and_then(|d| {
                let o = SolverOptions { truncation: Truncation::Fixed(level), ..opts };
                solver::solve_kinetic(&d, kinetic, &o)
            }),
            ConvergeAxis::TimeSamples => cfg.device(p.field_au, p.phase, p.xi).and_then(|d| {
                let o = SolverOptions { time_samples: TimeSampling::Fixed(level), ..opts };
                solver::solve_kinetic(&d, kinetic, &o)
            }),
        };
        let mut row = ConvergeRow {
            level,
            total_transmission: None,
            total_reflection: None,
            unitarity_deficit: None,
            change: None,
            message: String::new(),
        };
        match outcome {
            Ok(r) => {
                row.total_transmission = Some(r.total_transmission);
                row.total_reflection = Some(r.total_reflection);
                row.unitarity_deficit = Some(r.unitarity_deficit);
                if let Some(prev) = rows.last().and_then(|r| r.total_transmission) {
                    row.change = Some((r.total_transmission - prev).abs());
                }
            }
            Err(e) => row.message = e.to_string(),
        }
        rows.push(row);
    }
    let converged_at = rows.iter().find(|r| r.change.is_some_and(|c| c < tolerance)).map(|r| r.level);
    if converged_at.is_none() {
        log::warn!("{axis:?} refinement did not reach {tolerance:e}");
    }
    Ok(ConvergeReport {
        axis,
        energy_mev: p.energy_mev,
        tolerance,
        rows,
        flagged: converged_at.is_none(),
        converged_at,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BesselRow {
    pub k: i64,
    pub quadrature: [f64; 2],
    pub series: [f64; 2],
    pub difference: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BesselReport {
    pub time_samples: usize,
    pub rows: Vec<BesselRow>,
    pub max_difference: f64,
    /// `sum_K |B_K|^2` of the quadrature coefficients.
    pub parseval: f64,
}

/// Compare the FFT coefficients of `exp(i Phi_q)` with the generalized-Bessel
/// series for a monochromatic drive, for `|K| <= k_max`.
pub fn diagnose_bessel(waveform: &Waveform, q: f64, mass: f64, k_max: usize) -> Result<BesselReport> {
    if waveform.kind() != WaveformKind::Monochromatic && !waveform.is_off() {
        return Err(Error::InvalidWaveform("the Bessel series needs a monochromatic waveform".into()));
    }
    let omega = waveform.carrier_frequency();
    let amplitude = waveform.amplitude() / omega.max(f64::MIN_POSITIVE);
    let alpha = amplitude * q / (mass * omega.max(f64::MIN_POSITIVE));
    let beta = amplitude * amplitude / (8.0 * mass * omega.max(f64::MIN_POSITIVE));
    let reach = (alpha.abs() + 2.0 * beta + k_max as f64 + 64.0) as usize;
    let samples = (4 * reach).max(1024).next_power_of_two();
    let quad: Vec<Complex64> = if waveform.is_off() {
        (-(k_max as i64)..=k_max as i64).map(|k| if k == 0 { 1.0.into() } else { 0.0.into() }).collect()
    } else {
        let a = vector_potential_samples(waveform, 1.0, samples)?;
        let phi = phase_integral(&a, mass, Complex64::new(q, 0.0))?;
        let grid = ChannelGrid::new(0.0, omega, (k_max + 1) / 2);
        let b = fourier_b(&phi, &grid);
        let span = 2 * grid.n_max as i64;
        (-(k_max as i64)..=k_max as i64).map(|k| b[(k + span) as usize]).collect()
    };
    let mut rows = Vec::with_capacity(quad.len());
    let mut max_difference = 0.0f64;
    for (i, &bq) in quad.iter().enumerate() {
        let k = i as i64 - k_max as i64;
        let bs = if waveform.is_off() {
            if k == 0 { 1.0.into() } else { 0.0.into() }
        } else {
            bessel::monochromatic_coefficient(k, q, amplitude, omega, waveform.phase(), mass)
        };
        let difference = (bq - bs).norm();
        max_difference = max_difference.max(difference);
        rows.push(BesselRow { k, quadrature: [bq.re, bq.im], series: [bs.re, bs.im], difference });
    }
    Ok(BesselReport {
        time_samples: samples,
        parseval: quad.iter().map(|c| c.norm_sqr()).sum(),
        rows,
        max_difference,
    })
}
