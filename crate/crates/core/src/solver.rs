//! One-shot solves and the adaptive truncation policy.

use crate::cascade::{cascade_device, Cascade};
use crate::error::{Error, Result};
use crate::floquet::{ponderomotive_energy, ChannelGrid, TimeSampling};
use crate::model::{vector_potential_samples, Device, Incidence};
use crate::observables::{extract_amplitudes, probabilities, ScatterResult};

/// Sideband truncation policy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    Fixed(usize),
    /// Double `n_max` from `start` (capped at `cap`) until the flux deficit is
    /// below `tolerance` and total transmission moved by less than `1e-8`.
    Adaptive { start: usize, cap: usize, tolerance: f64 },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Adaptive { start: 4, cap: 40, tolerance: 1e-12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub truncation: Truncation,
    pub time_samples: TimeSampling,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { truncation: Truncation::default(), time_samples: TimeSampling::Auto }
    }
}

impl SolverOptions {
    pub fn fixed(n_max: usize) -> Self {
        Self { truncation: Truncation::Fixed(n_max), ..Self::default() }
    }
}

const TRANSMISSION_STEP_TOLERANCE: f64 = 1e-8;

/// Dressed band edge `V + U` of the incident lead.
pub fn incident_band_edge(device: &Device) -> Result<f64> {
    let lead = device.incident_lead();
    if device.waveform().is_off() {
        return Ok(lead.potential);
    }
    let a = vector_potential_samples(device.waveform(), lead.field_scale, 1024)?;
    Ok(lead.potential + ponderomotive_energy(&a, lead.mass))
}

/// Solve at kinetic energy `kinetic` above the incident lead's dressed edge.
pub fn solve_kinetic(device: &Device, kinetic: f64, opts: &SolverOptions) -> Result<ScatterResult> {
    solve(device, kinetic + incident_band_edge(device)?, opts)
}

/// Energy step (1e-4 meV) used to move off a channel threshold, where the two
/// plane-wave directions of a region coincide and matching is singular.
pub const THRESHOLD_NUDGE: f64 = 1e-4 / crate::units::HARTREE_MEV;

/// Solve at quasienergy `energy` (atomic units) with the given options.
///
/// If matching is singular because `energy` sits exactly on a channel
/// threshold of some region, the solve is repeated once at
/// `energy + THRESHOLD_NUDGE`; [`ScatterResult::energy_shift`] records this.
pub fn solve(device: &Device, energy: f64, opts: &SolverOptions) -> Result<ScatterResult> {
    match solve_unshifted(device, energy, opts) {
        Err(err @ (Error::SingularMatching { .. } | Error::SingularTransfer { .. })) => {
            if !on_threshold(device, energy, opts)? {
                return Err(err);
            }
            let mut r = solve_unshifted(device, energy + THRESHOLD_NUDGE, opts)?;
            r.energy_shift = THRESHOLD_NUDGE;
            Ok(r)
        }
        other => other,
    }
}

fn on_threshold(device: &Device, energy: f64, opts: &SolverOptions) -> Result<bool> {
    let n_max = match opts.truncation {
        _ if device.waveform().is_off() => 0,
        Truncation::Fixed(n) => n,
        Truncation::Adaptive { cap, .. } => cap,
    } as i64;
    let omega = device.waveform().base_frequency();
    for r in device.regions() {
        let u = if device.waveform().is_off() {
            0.0
        } else {
            let a = vector_potential_samples(device.waveform(), r.field_scale, 1024)?;
            ponderomotive_energy(&a, r.mass)
        };
        let near = (-n_max..=n_max).any(|n| (energy - r.potential - u + n as f64 * omega).abs() < THRESHOLD_NUDGE);
        if near {
            return Ok(true);
        }
    }
    Ok(false)
}

fn solve_unshifted(device: &Device, energy: f64, opts: &SolverOptions) -> Result<ScatterResult> {
    if device.waveform().is_off() {
        // sidebands decouple without a drive
        return solve_fixed(device, energy, 0, opts.time_samples);
    }
    match opts.truncation {
        Truncation::Fixed(n) => solve_fixed(device, energy, n, opts.time_samples),
        Truncation::Adaptive { start, cap, tolerance } => {
            let mut n = start.min(cap);
            let mut previous = solve_fixed(device, energy, n, opts.time_samples)?;
            loop {
                if n >= cap {
                    return Err(Error::Truncation { n_max: n, deficit: previous.unitarity_deficit });
                }
                n = (2 * n).max(1).min(cap);
                let next = solve_fixed(device, energy, n, opts.time_samples)?;
                let step = (next.total_transmission - previous.total_transmission).abs();
                if next.unitarity_deficit < tolerance && step < TRANSMISSION_STEP_TOLERANCE {
                    return Ok(next);
                }
                previous = next;
            }
        }
    }
}

/// Solve on a fixed truncation `n_max`.
pub fn solve_fixed(device: &Device, energy: f64, n_max: usize, sampling: TimeSampling) -> Result<ScatterResult> {
    let cascade = cascade(device, energy, n_max, sampling)?;
    result_from_cascade(device, &cascade)
}

/// The full scattering cascade at a fixed truncation.
pub fn cascade(device: &Device, energy: f64, n_max: usize, sampling: TimeSampling) -> Result<Cascade> {
    let grid = ChannelGrid::new(energy, device.waveform().base_frequency(), n_max);
    cascade_device(device, &grid, sampling)
}

pub fn result_from_cascade(device: &Device, cascade: &Cascade) -> Result<ScatterResult> {
    let (incident, exit) = match device.incidence() {
        Incidence::Left => (&cascade.first_lead, &cascade.last_lead),
        Incidence::Right => (&cascade.last_lead, &cascade.first_lead),
    };
    let amps = extract_amplitudes(&cascade.scatter, device.incidence(), incident)?;
    Ok(probabilities(&amps, incident, exit))
}
