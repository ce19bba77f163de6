//! Channel amplitudes, probabilities and flux bookkeeping.

use num_complex::Complex64;
use serde::Serialize;

use crate::cascade::ScatterMatrix;
use crate::error::{Error, Result};
use crate::floquet::LayerBasis;
use crate::model::Incidence;

/// Outgoing amplitudes for unit incidence in the central channel `N = 0`.
#[derive(Clone, Debug)]
pub struct Amplitudes {
    pub reflected: Vec<Complex64>,
    pub transmitted: Vec<Complex64>,
}

/// Column `N = 0` of the reflection and transmission blocks for the given side.
///
/// Fails with [`Error::IncidentClosed`] if the incident channel carries no
/// current in the incident lead.
pub fn extract_amplitudes(s: &ScatterMatrix, incidence: Incidence, incident_lead: &LayerBasis) -> Result<Amplitudes> {
    let centre = incident_lead.n_max();
    let ch = incident_lead.channels()[centre];
    if !ch.is_open() {
        return Err(Error::IncidentClosed { momentum: format!("{}", ch.momentum) });
    }
    let b = s.blocks();
    let (r, t) = match incidence {
        Incidence::Left => (&b.pp, &b.mp),
        Incidence::Right => (&b.mm, &b.pm),
    };
    let d = s.dim();
    Ok(Amplitudes {
        reflected: (0..d).map(|i| r[(i, centre)]).collect(),
        transmitted: (0..d).map(|i| t[(i, centre)]).collect(),
    })
}

/// Per-channel result of one scattering solve.
#[derive(Clone, Debug, Serialize)]
pub struct ScatterResult {
    /// Sideband indices `N`, aligned with every per-channel vector below.
    pub channels: Vec<i64>,
    #[serde(skip)]
    pub reflection_amplitudes: Vec<Complex64>,
    #[serde(skip)]
    pub transmission_amplitudes: Vec<Complex64>,
    /// Current-normalized probabilities; zero for closed channels.
    pub reflection: Vec<f64>,
    pub transmission: Vec<f64>,
    pub total_reflection: f64,
    pub total_transmission: f64,
    pub incident_current: f64,
    pub reflected_current: f64,
    pub transmitted_current: f64,
    /// `|sum R + sum T - 1|`.
    pub unitarity_deficit: f64,
    pub n_max: usize,
    /// Quasienergy offset applied to step off a channel threshold; normally 0.
    pub energy_shift: f64,
}

impl ScatterResult {
    /// Transmission probability into sideband `n`, if inside the truncation.
    pub fn transmission_into(&self, n: i64) -> Option<f64> {
        self.position(n).map(|i| self.transmission[i])
    }

    pub fn reflection_into(&self, n: i64) -> Option<f64> {
        self.position(n).map(|i| self.reflection[i])
    }

    fn position(&self, n: i64) -> Option<usize> {
        self.channels.iter().position(|&c| c == n)
    }
}

/// Turn amplitudes into probabilities with the current weights
/// `P_R = (k_N / k_0) |R_N|^2` and `P_T = (m_in k'_N / (m_out k_0)) |T_N|^2`.
pub fn probabilities(amps: &Amplitudes, incident: &LayerBasis, exit: &LayerBasis) -> ScatterResult {
    let n_max = incident.n_max();
    let k0 = incident.momentum(n_max).re;
    let (m_in, m_out) = (incident.mass(), exit.mass());
    let mut reflection = Vec::with_capacity(amps.reflected.len());
    let mut transmission = Vec::with_capacity(amps.transmitted.len());
    for (i, (r, t)) in amps.reflected.iter().zip(&amps.transmitted).enumerate() {
        let ci = incident.channels()[i];
        let ce = exit.channels()[i];
        reflection.push(if ci.is_open() { ci.momentum.re / k0 * r.norm_sqr() } else { 0.0 });
        transmission.push(if ce.is_open() { m_in * ce.momentum.re / (m_out * k0) * t.norm_sqr() } else { 0.0 });
    }
    let total_reflection: f64 = reflection.iter().sum();
    let total_transmission: f64 = transmission.iter().sum();
    let incident_current = k0 / m_in;
    ScatterResult {
        channels: (-(n_max as i64)..=n_max as i64).collect(),
        reflection_amplitudes: amps.reflected.clone(),
        transmission_amplitudes: amps.transmitted.clone(),
        reflected_current: total_reflection * incident_current,
        transmitted_current: total_transmission * incident_current,
        incident_current,
        unitarity_deficit: (total_reflection + total_transmission - 1.0).abs(),
        total_reflection,
        total_transmission,
        reflection,
        transmission,
        n_max,
        energy_shift: 0.0,
    }
}

pub fn total_transmission(result: &ScatterResult) -> f64 {
    result.total_transmission
}

/// Indices of strict interior local maxima of `values` at least `min_height` high.
pub fn local_maxima(values: &[f64], min_height: f64) -> Vec<usize> {
    (1..values.len().saturating_sub(1))
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] >= min_height)
        .collect()
}

/// Golden-section search for a maximum of a unimodal `f` on `[lo, hi]`,
/// stopping once the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_maximum<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 > f2 { (x1, f1) } else { (x2, f2) })
}
