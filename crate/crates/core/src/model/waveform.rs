use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral;

/// Number of trapezoid nodes used to pin the pulse-train DC offset.
const PULSE_QUADRATURE_NODES: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveformKind {
    Off,
    /// `E_0 sin(w t + phi)`
    Monochromatic,
    /// `E_0 [sin(w t) - sin(2 w t + phi)]`
    Bichromatic,
    /// Train of pulses `E_0 f(t) sin(w t + phi) - dc` repeating every `duration`, with
    /// envelope `f(t) = exp(-((t - T/2)/width)^2) sin^2(pi t / T)`.
    PulseTrain { duration: f64, width: f64 },
}

/// Time dependence of the laser electric field for unit spatial amplitude.
///
/// The Floquet frequency is the carrier `omega` except for pulse trains, whose
/// period is the pulse duration.
#[derive(Clone, Debug, PartialEq)]
pub struct Waveform {
    kind: WaveformKind,
    amplitude: f64,
    omega: f64,
    phase: f64,
    dc_offset: f64,
}

impl Waveform {
    pub fn off() -> Self {
        Self {
            kind: WaveformKind::Off,
            amplitude: 0.0,
            omega: 0.0,
            phase: 0.0,
            dc_offset: 0.0,
        }
    }

    pub fn monochromatic(amplitude: f64, omega: f64, phase: f64) -> Result<Self> {
        check_carrier(amplitude, omega, phase)?;
        Ok(Self {
            kind: WaveformKind::Monochromatic,
            amplitude,
            omega,
            phase,
            dc_offset: 0.0,
        })
    }

    pub fn bichromatic(amplitude: f64, omega: f64, phase: f64) -> Result<Self> {
        check_carrier(amplitude, omega, phase)?;
        Ok(Self {
            kind: WaveformKind::Bichromatic,
            amplitude,
            omega,
            phase,
            dc_offset: 0.0,
        })
    }

    /// Pulse train with the DC offset chosen so the field integrates to zero
    /// over one pulse.
    pub fn pulse_train(
        amplitude: f64,
        omega: f64,
        phase: f64,
        duration: f64,
        width: f64,
    ) -> Result<Self> {
        check_carrier(amplitude, omega, phase)?;
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::InvalidWaveform(format!("pulse duration {duration} must be positive")));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidWaveform(format!("pulse width {width} must be positive")));
        }
        let mut w = Self {
            kind: WaveformKind::PulseTrain { duration, width },
            amplitude,
            omega,
            phase,
            dc_offset: 0.0,
        };
        let h = duration / PULSE_QUADRATURE_NODES as f64;
        // periodic trapezoid; the envelope vanishes at both ends
        let sum: f64 = (0..PULSE_QUADRATURE_NODES).map(|j| w.field(j as f64 * h)).sum();
        w.dc_offset = sum * h / duration;
        Ok(w)
    }

    pub fn kind(&self) -> WaveformKind {
        self.kind
    }

    pub fn is_off(&self) -> bool {
        self.kind == WaveformKind::Off || self.amplitude == 0.0
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn carrier_frequency(&self) -> f64 {
        self.omega
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn dc_offset(&self) -> f64 {
        self.dc_offset
    }

    /// Same waveform with a different amplitude (DC offset rescaled).
    pub fn with_amplitude(&self, amplitude: f64) -> Self {
        let ratio = if self.amplitude == 0.0 { 0.0 } else { amplitude / self.amplitude };
        Self {
            amplitude,
            dc_offset: self.dc_offset * ratio,
            ..self.clone()
        }
    }

    /// Angular frequency of the Floquet period. Zero for `Off`.
    pub fn base_frequency(&self) -> f64 {
        match self.kind {
            WaveformKind::Off => self.omega,
            WaveformKind::Monochromatic | WaveformKind::Bichromatic => self.omega,
            WaveformKind::PulseTrain { duration, .. } => 2.0 * PI / duration,
        }
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.base_frequency()
    }

    /// Electric field `E(t)` for unit spatial amplitude.
    pub fn field(&self, t: f64) -> f64 {
        let (e0, w, phi) = (self.amplitude, self.omega, self.phase);
        match self.kind {
            WaveformKind::Off => 0.0,
            WaveformKind::Monochromatic => e0 * (w * t + phi).sin(),
            WaveformKind::Bichromatic => e0 * ((w * t).sin() - (2.0 * w * t + phi).sin()),
            WaveformKind::PulseTrain { duration, width } => {
                let tau = t.rem_euclid(duration);
                let gauss = (-((tau - 0.5 * duration) / width).powi(2)).exp();
                let envelope = gauss * (PI * tau / duration).sin().powi(2);
                e0 * envelope * (w * tau + phi).sin() - self.dc_offset
            }
        }
    }
}

fn check_carrier(amplitude: f64, omega: f64, phase: f64) -> Result<()> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidWaveform(format!("frequency {omega} must be positive")));
    }
    if !amplitude.is_finite() || !phase.is_finite() {
        return Err(Error::InvalidWaveform("amplitude and phase must be finite".into()));
    }
    Ok(())
}

/// Vector potential `A(t) = -int E dt` of one region over one Floquet period,
/// in the gauge where `A` has zero period average.
#[derive(Clone, Debug)]
pub struct VectorPotential {
    omega: f64,
    samples: Vec<f64>,
    mean_square: f64,
    coefficients: Vec<Complex64>,
}

impl VectorPotential {
    pub(crate) fn zero(omega: f64, n_samples: usize) -> Self {
        Self {
            omega,
            samples: vec![0.0; n_samples],
            mean_square: 0.0,
            coefficients: vec![Complex64::new(0.0, 0.0); n_samples],
        }
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Potential of the field `scale * E(t)`.
    pub fn scaled(&self, scale: f64) -> Self {
        Self {
            omega: self.omega,
            samples: self.samples.iter().map(|a| a * scale).collect(),
            mean_square: self.mean_square * scale * scale,
            coefficients: self.coefficients.iter().map(|b| b * scale).collect(),
        }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Time average `<A^2>`.
    pub fn mean_square(&self) -> f64 {
        self.mean_square
    }

    pub fn is_zero(&self) -> bool {
        self.mean_square == 0.0
    }

    /// Fourier coefficient `b_n` of `A(t) = sum_n b_n exp(-i n w t)`.
    pub fn coefficient(&self, n: i64) -> Complex64 {
        spectral::slot(n, self.coefficients.len())
            .map(|k| self.coefficients[k])
            .unwrap_or_default()
    }

    /// Rebuild `A(t)` at arbitrary `t` from the retained harmonics.
    pub fn evaluate(&self, t: f64) -> f64 {
        let len = self.coefficients.len();
        self.coefficients
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let n = spectral::harmonic(k, len) as f64;
                (c * Complex64::new(0.0, -n * self.omega * t).exp()).re
            })
            .sum()
    }
}

/// Samples `A(t)` for a region whose field is `scale * waveform`.
pub fn vector_potential_samples(
    waveform: &Waveform,
    scale: f64,
    n_samples: usize,
) -> Result<VectorPotential> {
    if n_samples < 256 || !n_samples.is_power_of_two() {
        return Err(Error::SampleCount(n_samples));
    }
    let omega = waveform.base_frequency();
    if waveform.is_off() || scale == 0.0 {
        return Ok(VectorPotential::zero(omega, n_samples));
    }
    let dt = waveform.period() / n_samples as f64;
    let field: Vec<f64> = (0..n_samples).map(|j| scale * waveform.field(j as f64 * dt)).collect();
    let peak = field.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut coefficients = spectral::real_coefficients(&field);
    let mean = coefficients[0].re;
    if mean.abs() > 1e-12 * peak.max(f64::MIN_POSITIVE) {
        return Err(Error::Gauge { mean });
    }
    // dA/dt = -E  =>  (-i n w) b_n = -e_n
    coefficients[0] = Complex64::new(0.0, 0.0);
    coefficients[n_samples / 2] = Complex64::new(0.0, 0.0);
    for (k, c) in coefficients.iter_mut().enumerate().skip(1) {
        let n = spectral::harmonic(k, n_samples) as f64;
        *c /= Complex64::new(0.0, n * omega);
    }
    let samples: Vec<f64> = spectral::synthesize(&coefficients).iter().map(|v| v.re).collect();
    let mean_square = samples.iter().map(|a| a * a).sum::<f64>() / n_samples as f64;
    Ok(VectorPotential {
        omega,
        samples,
        mean_square,
        coefficients,
    })
}


#[cfg(test)]
mod gauge_tests {
    use super::*;

    #[test]
    fn dc_field_is_a_gauge_error() {
        let mut w = Waveform::pulse_train(1e-3, 0.0025, 0.0, 3e4, 5e3).unwrap();
        w.dc_offset += 1e-5;
        assert!(matches!(vector_potential_samples(&w, 1.0, 512), Err(Error::Gauge { .. })));
    }
}
