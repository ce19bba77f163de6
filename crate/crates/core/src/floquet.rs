//! Per-region Floquet basis.
//!
//! In a homogeneous region the Volkov-type solutions are
//! `exp(i s p_N x) exp(-i (E + N w) t) exp(i Phi(t))` with `s = +-1`, where the
//! phase integral `Phi` absorbs the vector potential. Its Fourier coefficients
//! `B_K(s p_N)` (coefficient of `exp(-i K w t)` in `exp(i Phi)`) place weight
//! of mode `N` on the harmonic `M = N + K`.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{vector_potential_samples, Region, VectorPotential, Waveform};
use crate::spectral;
use crate::units::ELECTRON_CHARGE;

/// Relative spectral tail above which the time grid is refined. Transform
/// roundoff alone leaves tails of a few `1e-15`.
const SPECTRAL_TAIL_TOLERANCE: f64 = 1e-13;
const MAX_TIME_SAMPLES: usize = 1 << 18;
/// Relative level of `|B_{+-2 n_max}|` that triggers a truncation warning.
const TRUNCATION_WARNING: f64 = 1e-8;
const CACHE_CAPACITY: usize = 16;

/// Truncated set of Floquet sidebands `N = -n_max ..= n_max` at quasienergy `E`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelGrid {
    pub energy: f64,
    pub omega: f64,
    pub n_max: usize,
}

impl ChannelGrid {
    pub fn new(energy: f64, omega: f64, n_max: usize) -> Self {
        Self { energy, omega, n_max }
    }

    pub fn len(&self) -> usize {
        2 * self.n_max + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        -(self.n_max as i64)..=self.n_max as i64
    }

    /// Row/column of sideband `n` in every channel matrix.
    pub fn position(&self, n: i64) -> usize {
        (n + self.n_max as i64) as usize
    }

    pub fn channel_energy(&self, n: i64) -> f64 {
        self.energy + n as f64 * self.omega
    }

    /// Default time grid: `max(512, 16 (2 n_max + 1))` rounded up to a power of two.
    pub fn default_time_samples(&self) -> usize {
        (16 * self.len()).max(512).next_power_of_two()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Open,
    Closed,
    /// Zero momentum; carries no current and is treated as closed.
    Threshold,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Channel {
    pub index: i64,
    pub momentum: Complex64,
    pub kind: ChannelKind,
}

impl Channel {
    pub fn is_open(&self) -> bool {
        self.kind == ChannelKind::Open
    }
}

/// `p_N = sqrt(2 m (E + N w - V - U))`, real positive for open channels and
/// `+i sqrt(|.|)` for closed ones.
pub fn momenta(grid: &ChannelGrid, mass: f64, potential: f64, ponderomotive: f64) -> Vec<Channel> {
    grid.indices()
        .map(|n| {
            let excess = (grid.energy - potential - ponderomotive) + n as f64 * grid.omega;
            let scale = grid.energy.abs() + (n as f64 * grid.omega).abs() + potential.abs() + ponderomotive.abs();
            if excess.abs() <= 8.0 * f64::EPSILON * scale {
                Channel { index: n, momentum: Complex64::new(0.0, 0.0), kind: ChannelKind::Threshold }
            } else if excess > 0.0 {
                Channel { index: n, momentum: Complex64::new((2.0 * mass * excess).sqrt(), 0.0), kind: ChannelKind::Open }
            } else {
                Channel { index: n, momentum: Complex64::new(0.0, (-2.0 * mass * excess).sqrt()), kind: ChannelKind::Closed }
            }
        })
        .collect()
}

/// `U = e^2 <A^2> / 2m`.
pub fn ponderomotive_energy(potential: &VectorPotential, mass: f64) -> f64 {
    ELECTRON_CHARGE * ELECTRON_CHARGE * potential.mean_square() / (2.0 * mass)
}

/// The two `q`-independent pieces of the phase integral,
/// `Phi_q(t) = q * linear(t) + quadratic(t)`, with
/// `linear = int_0^t (e/m) A` and `quadratic = -int_0^t (e^2/2m)(A^2 - <A^2>)`.
#[derive(Clone, Debug)]
pub struct PhaseIntegral {
    linear: Vec<f64>,
    quadratic: Vec<f64>,
}

impl PhaseIntegral {
    pub fn new(potential: &VectorPotential, mass: f64) -> Result<Self> {
        let e = ELECTRON_CHARGE;
        let w = potential.omega();
        let a = potential.samples();
        let ms = potential.mean_square();
        if potential.is_zero() {
            return Ok(Self { linear: vec![0.0; a.len()], quadratic: vec![0.0; a.len()] });
        }
        let g1: Vec<f64> = a.iter().map(|&x| e / mass * x).collect();
        let g2: Vec<f64> = a.iter().map(|&x| -e * e / (2.0 * mass) * (x * x - ms)).collect();
        let (linear, mean1) = spectral::antiderivative(&g1, w);
        let (quadratic, mean2) = spectral::antiderivative(&g2, w);
        let peak1 = g1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let peak2 = g2.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (mean, peak) in [(mean1, peak1), (mean2, peak2)] {
            if mean.abs() > 1e-10 * peak.max(f64::MIN_POSITIVE) {
                return Err(Error::InconsistentIntegrand { mean });
            }
        }
        Ok(Self { linear, quadratic })
    }

    pub fn len(&self) -> usize {
        self.linear.len()
    }

    pub fn is_empty(&self) -> bool {
        self.linear.is_empty()
    }

    pub fn samples(&self, q: Complex64) -> Vec<Complex64> {
        self.linear
            .iter()
            .zip(&self.quadratic)
            .map(|(&l, &s)| q * l + s)
            .collect()
    }

    /// Samples of `exp(i Phi_q(t))`.
    pub fn exp_samples(&self, q: Complex64) -> Vec<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        self.samples(q).into_iter().map(|phi| (i * phi).exp()).collect()
    }
}

/// Sampled `Phi_q(t)` on the time grid of `potential`.
pub fn phase_integral(potential: &VectorPotential, mass: f64, q: Complex64) -> Result<Vec<Complex64>> {
    Ok(PhaseIntegral::new(potential, mass)?.samples(q))
}

/// `B_K(q)` for `K = -2 n_max ..= 2 n_max` from sampled `Phi_q(t)`.
pub fn fourier_b(phase: &[Complex64], grid: &ChannelGrid) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let e: Vec<Complex64> = phase.iter().map(|&phi| (i * phi).exp()).collect();
    let spectrum = spectral::coefficients(&e);
    let span = 2 * grid.n_max as i64;
    let out: Vec<Complex64> = (-span..=span)
        .map(|k| spectral::slot(k, spectrum.len()).map(|s| spectrum[s]).unwrap_or_default())
        .collect();
    let peak = out.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let edge = out[0].norm().max(out[out.len() - 1].norm());
    if span > 0 && edge > TRUNCATION_WARNING * peak {
        log::warn!("|B_(+-{span})| = {edge:e}: n_max or the time grid is too small");
    }
    out
}

/// Which of the two plane-wave directions `exp(+- i p x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Plus => 1.0,
            Direction::Minus => -1.0,
        }
    }
}

/// Basis data for one region on one channel grid.
///
/// Coefficients of closed channels are divided by the RMS of `exp(i Phi)`
/// over the period. That rescales the corresponding unknown amplitudes only
/// and keeps strongly driven evanescent columns near unit size.
#[derive(Debug)]
pub struct LayerBasis {
    region: Region,
    n_max: usize,
    ponderomotive: f64,
    channels: Vec<Channel>,
    time_samples: usize,
    /// `[direction][N][K + 2 n_max]`
    coefficients: [Vec<Vec<Complex64>>; 2],
    /// `sum_n b_n B_{K-n}`, same layout
    drive: [Vec<Vec<Complex64>>; 2],
    /// `b_n` for `n = -2 n_max ..= 2 n_max`
    potential_coefficients: Vec<Complex64>,
}

impl LayerBasis {
    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn mass(&self) -> f64 {
        self.region.mass
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        2 * self.n_max + 1
    }

    pub fn ponderomotive(&self) -> f64 {
        self.ponderomotive
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn momentum(&self, position: usize) -> Complex64 {
        self.channels[position].momentum
    }

    pub fn time_samples(&self) -> usize {
        self.time_samples
    }

    fn slot(d: Direction) -> usize {
        match d {
            Direction::Plus => 0,
            Direction::Minus => 1,
        }
    }

    /// `B_K(s p_N)` for channel at `position`; zero outside `|K| <= 2 n_max`.
    pub fn coefficient(&self, d: Direction, position: usize, k: i64) -> Complex64 {
        let span = 2 * self.n_max as i64;
        if k.abs() > span {
            return Complex64::new(0.0, 0.0);
        }
        self.coefficients[Self::slot(d)][position][(k + span) as usize]
    }

    /// `sum_n b_n B_{K-n}(s p_N)`: the `e A psi` part of the matched derivative.
    pub fn drive(&self, d: Direction, position: usize, k: i64) -> Complex64 {
        let span = 2 * self.n_max as i64;
        if k.abs() > span {
            return Complex64::new(0.0, 0.0);
        }
        self.drive[Self::slot(d)][position][(k + span) as usize]
    }

    /// `b_n` of this region's vector potential, for `|n| <= 2 n_max`.
    pub fn potential_coefficient(&self, n: i64) -> Complex64 {
        let span = 2 * self.n_max as i64;
        if n.abs() > span {
            return Complex64::new(0.0, 0.0);
        }
        self.potential_coefficients[(n + span) as usize]
    }
}

/// How many time samples per period to use for the Fourier coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeSampling {
    /// Start from the grid default and double until the spectra are resolved.
    Auto,
    Fixed(usize),
}

/// Builds and memoizes [`LayerBasis`] values for one channel grid and drive.
///
/// Keys are `(mass, potential, field_scale)` quantized to `1e-14`, so the many
/// identical slabs of a flat staircase are built once. The cache is bounded
/// and safe to share between threads.
pub struct BasisBuilder {
    grid: ChannelGrid,
    waveform: Waveform,
    sampling: TimeSampling,
    unit_potential: VectorPotential,
    cache: Mutex<VecDeque<(BasisKey, Arc<LayerBasis>)>>,
    hits: std::sync::atomic::AtomicUsize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct BasisKey(i64, i64, i64);

impl BasisKey {
    fn new(r: &Region) -> Self {
        let q = |x: f64| (x / 1e-14).round() as i64;
        Self(q(r.mass), q(r.potential), q(r.field_scale))
    }
}

impl BasisBuilder {
    pub fn new(grid: ChannelGrid, waveform: &Waveform, sampling: TimeSampling) -> Result<Self> {
        let samples = match sampling {
            TimeSampling::Auto => grid.default_time_samples(),
            TimeSampling::Fixed(n) => n,
        };
        let unit_potential = vector_potential_samples(waveform, 1.0, samples)?;
        Ok(Self {
            grid,
            waveform: waveform.clone(),
            sampling,
            unit_potential,
            cache: Mutex::new(VecDeque::with_capacity(CACHE_CAPACITY)),
            hits: Default::default(),
        })
    }

    pub fn grid(&self) -> &ChannelGrid {
        &self.grid
    }

    /// Number of cache hits so far.
    pub fn cache_hits(&self) -> usize {
        self.hits.load(std::sync::atomic::Ordering::Relaxed)
    }

    pub fn basis(&self, region: &Region) -> Result<Arc<LayerBasis>> {
        let key = BasisKey::new(region);
        {
            let cache = self.cache.lock().unwrap();
            if let Some((_, b)) = cache.iter().find(|(k, _)| *k == key) {
                self.hits.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                return Ok(Arc::clone(b));
            }
        }
        let built = Arc::new(self.build(region)?);
        let mut cache = self.cache.lock().unwrap();
        // another thread may have inserted the same key meanwhile; keep the first
        if let Some((_, b)) = cache.iter().find(|(k, _)| *k == key) {
            return Ok(Arc::clone(b));
        }
        if cache.len() == CACHE_CAPACITY {
            cache.pop_front();
        }
        cache.push_back((key, Arc::clone(&built)));
        Ok(built)
    }

    fn build(&self, region: &Region) -> Result<LayerBasis> {
        let mut samples = self.unit_potential.len();
        loop {
            let unit = if samples == self.unit_potential.len() {
                self.unit_potential.clone()
            } else {
                vector_potential_samples(&self.waveform, 1.0, samples)?
            };
            let potential = scaled(&unit, region.field_scale);
            match assemble(&self.grid, region, &potential)? {
                Assembled::Done(b) => {
                    log::debug!("basis for V={:e} m={} built with {samples} time samples", region.potential, region.mass);
                    return Ok(b);
                }
                Assembled::Underresolved(tail) => {
                    if self.sampling != TimeSampling::Auto || samples >= MAX_TIME_SAMPLES {
                        log::warn!("Floquet spectrum underresolved with {samples} samples (tail {tail:e})");
                        return assemble_unchecked(&self.grid, region, &potential);
                    }
                    log::trace!("spectral tail {tail:e} at {samples} samples; refining");
                    samples *= 2;
                }
            }
        }
    }
}

/// Build one basis with a private builder.
pub fn build_layer_basis(
    grid: &ChannelGrid,
    region: &Region,
    waveform: &Waveform,
    sampling: TimeSampling,
) -> Result<LayerBasis> {
    let builder = BasisBuilder::new(*grid, waveform, sampling)?;
    builder.build(region)
}

fn scaled(unit: &VectorPotential, scale: f64) -> VectorPotential {
    if scale == 1.0 {
        unit.clone()
    } else {
        unit.scaled(scale)
    }
}

enum Assembled {
    Done(LayerBasis),
    Underresolved(f64),
}

fn assemble(grid: &ChannelGrid, region: &Region, potential: &VectorPotential) -> Result<Assembled> {
    assemble_impl(grid, region, potential, true)
}

fn assemble_unchecked(grid: &ChannelGrid, region: &Region, potential: &VectorPotential) -> Result<LayerBasis> {
    match assemble_impl(grid, region, potential, false)? {
        Assembled::Done(b) => Ok(b),
        Assembled::Underresolved(_) => unreachable!(),
    }
}

fn assemble_impl(
    grid: &ChannelGrid,
    region: &Region,
    potential: &VectorPotential,
    check_tail: bool,
) -> Result<Assembled> {
    let u = ponderomotive_energy(potential, region.mass);
    let channels = momenta(grid, region.mass, region.potential, u);
    let span = 2 * grid.n_max as i64;
    let width = (2 * span + 1) as usize;
    let s = potential.len();
    let potential_coefficients: Vec<Complex64> = (-span..=span).map(|n| potential.coefficient(n)).collect();

    if potential.is_zero() {
        let mut delta = vec![Complex64::new(0.0, 0.0); width];
        delta[span as usize] = Complex64::new(1.0, 0.0);
        let b = vec![delta; channels.len()];
        let z = vec![vec![Complex64::new(0.0, 0.0); width]; channels.len()];
        return Ok(Assembled::Done(LayerBasis {
            region: *region,
            n_max: grid.n_max,
            ponderomotive: u,
            channels,
            time_samples: s,
            coefficients: [b.clone(), b],
            drive: [z.clone(), z],
            potential_coefficients,
        }));
    }

    let phase = PhaseIntegral::new(potential, region.mass)?;
    let a = potential.samples();
    let mut coefficients = [Vec::with_capacity(channels.len()), Vec::with_capacity(channels.len())];
    let mut drive = [Vec::with_capacity(channels.len()), Vec::with_capacity(channels.len())];
    let mut worst_tail = 0.0f64;
    let pick = |spectrum: &[Complex64], norm: f64| -> Vec<Complex64> {
        (-span..=span)
            .map(|k| spectral::slot(k, s).map(|i| spectrum[i] / norm).unwrap_or_default())
            .collect()
    };
    for ch in &channels {
        for (slot, sign) in [(0usize, 1.0), (1usize, -1.0)] {
            let e = phase.exp_samples(ch.momentum * sign);
            let norm = if ch.kind == ChannelKind::Closed {
                (e.iter().map(|v| v.norm_sqr()).sum::<f64>() / s as f64).sqrt()
            } else {
                1.0
            };
            let spectrum = spectral::coefficients(&e);
            let ae: Vec<Complex64> = e.iter().zip(a).map(|(v, &ai)| v * ai).collect();
            let dspectrum = spectral::coefficients(&ae);
            if check_tail {
                worst_tail = worst_tail.max(tail_ratio(&spectrum)).max(tail_ratio(&dspectrum));
            }
            coefficients[slot].push(pick(&spectrum, norm));
            drive[slot].push(pick(&dspectrum, norm));
        }
    }
    if check_tail && worst_tail > SPECTRAL_TAIL_TOLERANCE {
        return Ok(Assembled::Underresolved(worst_tail));
    }
    let mut worst_edge = 0.0f64;
    for row in coefficients.iter().flatten() {
        let peak = row.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        let edge = row[0].norm().max(row[row.len() - 1].norm());
        if peak > 0.0 {
            worst_edge = worst_edge.max(edge / peak);
        }
    }
    if span > 0 && worst_edge > TRUNCATION_WARNING {
        log::debug!(
            "region V={:e}: relative |B_(+-{span})| up to {worst_edge:e}; n_max may be too small",
            region.potential
        );
    }
    Ok(Assembled::Done(LayerBasis {
        region: *region,
        n_max: grid.n_max,
        ponderomotive: u,
        channels,
        time_samples: s,
        coefficients,
        drive,
        potential_coefficients,
    }))
}

/// Largest coefficient in the upper half of the representable band relative
/// to the largest overall.
fn tail_ratio(spectrum: &[Complex64]) -> f64 {
    let s = spectrum.len();
    let mut peak = 0.0f64;
    let mut tail = 0.0f64;
    for (k, c) in spectrum.iter().enumerate() {
        let n = spectral::harmonic(k, s).unsigned_abs() as usize;
        let v = c.norm();
        peak = peak.max(v);
        if n >= s / 4 {
            tail = tail.max(v);
        }
    }
    if peak == 0.0 {
        0.0
    } else {
        tail / peak
    }
}
