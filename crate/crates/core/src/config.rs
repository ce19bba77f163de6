//! JSON run configuration.
//!
//! Energies are in meV, lengths in Å, masses in electron masses and fields in
//! atomic units (or through the dimensionless `xi` / `eta`). Every validation
//! error carries the JSON pointer of the offending value.
//!
//! ```json
//! {
//!   "device": { "builder": "triple_barrier", "well_width": 70, "barrier_width": 20,
//!               "barrier_height": 237, "well_mass": 0.0667, "barrier_mass": 0.0918 },
//!   "waveform": { "kind": "monochromatic", "omega_mev": 70, "up_over_omega": 1e-4 },
//!   "static_field": { "field_au": 0.23e-4 },
//!   "staircase_points": 221,
//!   "scan": { "energy_mev": { "start": 1, "stop": 300, "step": 0.25 } }
//! }
//! ```

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::TimeSampling;
use crate::model::{Device, Incidence, Region, TripleBarrier, Waveform};
use crate::solver::{SolverOptions, Truncation};
use crate::units;

pub const DEFAULT_ENERGY_STEP_MEV: f64 = 0.25;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub device: DeviceConfig,
    #[serde(default)]
    pub field_profile: Option<FieldProfile>,
    #[serde(default)]
    pub waveform: WaveformConfig,
    #[serde(default)]
    pub static_field: Option<StaticFieldConfig>,
    /// Stark staircase resolution; required when a static field is present.
    #[serde(default)]
    pub staircase_points: Option<usize>,
    pub scan: ScanAxes,
    #[serde(default)]
    pub truncation: TruncationConfig,
    #[serde(default)]
    pub time_samples: Option<usize>,
    #[serde(default)]
    pub incidence: Incidence,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Per-channel transmissions reported for `|N| <= report_width`.
    #[serde(default = "default_report_width")]
    pub report_width: usize,
    #[serde(default)]
    pub output: Option<OutputConfig>,
    #[serde(default)]
    pub converge: Option<ConvergeConfig>,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

fn default_report_width() -> usize {
    2
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case")]
pub enum DeviceConfig {
    TripleBarrier(TripleBarrierConfig),
    SingleBarrier(SingleBarrierConfig),
    Uniform(UniformConfig),
    /// Explicit regions, leads first and last (their `width` is ignored).
    Regions(RegionsConfig),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleBarrierConfig {
    pub well_width: f64,
    pub barrier_width: f64,
    pub barrier_height: f64,
    pub well_mass: f64,
    pub barrier_mass: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingleBarrierConfig {
    pub width: f64,
    pub height: f64,
    pub lead_mass: f64,
    pub barrier_mass: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformConfig {
    pub mass: f64,
    #[serde(default)]
    pub potential: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionsConfig {
    pub regions: Vec<RegionConfig>,
    #[serde(default)]
    pub origin: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub mass: f64,
    #[serde(default)]
    pub potential: f64,
    #[serde(default)]
    pub width: Option<f64>,
    #[serde(default = "one")]
    pub field_scale: f64,
}

fn one() -> f64 {
    1.0
}

/// Spatial profile of the laser amplitude.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldProfile {
    /// `"uniform"` (whole space) or `"confined"` (full inside a triple
    /// barrier, half in its edge barriers, zero in the leads).
    Named(String),
    PerRegion(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveformKindConfig {
    #[default]
    Off,
    Monochromatic,
    Bichromatic,
    PulseTrain,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveformConfig {
    #[serde(default)]
    pub kind: WaveformKindConfig,
    #[serde(default)]
    pub omega_mev: Option<f64>,
    #[serde(default)]
    pub phase: f64,
    /// Raw field amplitude; wins over `xi` and `up_over_omega`.
    #[serde(default)]
    pub amplitude_au: Option<f64>,
    #[serde(default)]
    pub xi: Option<f64>,
    /// Ponderomotive energy over photon energy for the incident lead's mass.
    #[serde(default)]
    pub up_over_omega: Option<f64>,
    /// Pulse duration in carrier periods.
    #[serde(default)]
    pub pulse_cycles: Option<f64>,
    /// Pulse duration over Gaussian width.
    #[serde(default)]
    pub width_ratio: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StaticFieldConfig {
    #[serde(default)]
    pub field_au: Option<f64>,
    #[serde(default)]
    pub eta: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanAxes {
    #[serde(default)]
    pub energy_mev: Option<EnergyRange>,
    #[serde(default)]
    pub energies_mev: Option<Vec<f64>>,
    #[serde(default)]
    pub fields_au: Option<Vec<f64>>,
    #[serde(default)]
    pub etas: Option<Vec<f64>>,
    #[serde(default)]
    pub phases: Option<Vec<f64>>,
    #[serde(default)]
    pub xis: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyRange {
    pub start: f64,
    pub stop: f64,
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_step() -> f64 {
    DEFAULT_ENERGY_STEP_MEV
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TruncationConfig {
    Fixed(usize),
    Adaptive {
        #[serde(default = "default_start")]
        start: usize,
        #[serde(default = "default_cap")]
        cap: usize,
    },
}

fn default_start() -> usize {
    4
}

fn default_cap() -> usize {
    40
}

impl Default for TruncationConfig {
    fn default() -> Self {
        TruncationConfig::Adaptive { start: default_start(), cap: default_cap() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergeAxis {
    Staircase,
    NMax,
    TimeSamples,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeConfig {
    pub axis: ConvergeAxis,
    #[serde(default)]
    pub levels: Option<Vec<usize>>,
    #[serde(default = "default_converge_tolerance")]
    pub tolerance: f64,
}

fn default_converge_tolerance() -> f64 {
    1e-6
}

/// Read and validate a configuration file.
pub fn load(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse(&text)
}

/// Parse and validate a configuration document.
pub fn parse(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let pointer = pointer_from_path(&e.path().to_string());
        if pointer == "/device" {
            if let Some(err) = device_error(text) {
                return err;
            }
        }
        Error::config(pointer, e.inner().to_string())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

/// Paths are lost inside the tagged device object; re-read it with the
/// builder's own type to locate the offending field.
fn device_error(text: &str) -> Option<Error> {
    let root: serde_json::Value = serde_json::from_str(text).ok()?;
    let mut device = root.get("device")?.as_object()?.clone();
    let builder = device.remove("builder")?;
    let value = serde_json::Value::Object(device);
    fn probe<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Option<Error> {
        serde_path_to_error::deserialize::<_, T>(value).err().map(|e| {
            let inner = pointer_from_path(&e.path().to_string());
            Error::config(format!("/device{inner}"), e.inner().to_string())
        })
    }
    match builder.as_str()? {
        "triple_barrier" => probe::<TripleBarrierConfig>(value),
        "single_barrier" => probe::<SingleBarrierConfig>(value),
        "uniform" => probe::<UniformConfig>(value),
        "regions" => probe::<RegionsConfig>(value),
        _ => None,
    }
}

/// `a.b[2].c` -> `/a/b/2/c`
fn pointer_from_path(path: &str) -> String {
    if path == "." {
        return String::new();
    }
    let mut out = String::new();
    for part in path.split('.') {
        for piece in part.split('[') {
            let piece = piece.trim_end_matches(']');
            if !piece.is_empty() {
                out.push('/');
                out.push_str(piece);
            }
        }
    }
    out
}

fn positive(pointer: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(pointer, format!("must be positive and finite, got {v}")))
    }
}

fn finite(pointer: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(pointer, format!("must be finite, got {v}")))
    }
}

fn nonempty<T>(pointer: &str, v: &Option<Vec<T>>) -> Result<()> {
    match v {
        Some(list) if list.is_empty() => Err(Error::config(pointer, "axis must not be empty")),
        _ => Ok(()),
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        match &self.device {
            DeviceConfig::TripleBarrier(TripleBarrierConfig { well_width, barrier_width, barrier_height, well_mass, barrier_mass }) => {
                positive("/device/well_width", *well_width)?;
                positive("/device/barrier_width", *barrier_width)?;
                positive("/device/barrier_height", *barrier_height)?;
                positive("/device/well_mass", *well_mass)?;
                positive("/device/barrier_mass", *barrier_mass)?;
            }
            DeviceConfig::SingleBarrier(SingleBarrierConfig { width, height, lead_mass, barrier_mass }) => {
                positive("/device/width", *width)?;
                finite("/device/height", *height)?;
                positive("/device/lead_mass", *lead_mass)?;
                positive("/device/barrier_mass", *barrier_mass)?;
            }
            DeviceConfig::Uniform(UniformConfig { mass, potential }) => {
                positive("/device/mass", *mass)?;
                finite("/device/potential", *potential)?;
            }
            DeviceConfig::Regions(RegionsConfig { regions, origin }) => {
                if regions.len() < 2 {
                    return Err(Error::config("/device/regions", "need at least two leads"));
                }
                finite("/device/origin", *origin)?;
                let last = regions.len() - 1;
                for (i, r) in regions.iter().enumerate() {
                    positive(&format!("/device/regions/{i}/mass"), r.mass)?;
                    finite(&format!("/device/regions/{i}/potential"), r.potential)?;
                    finite(&format!("/device/regions/{i}/field_scale"), r.field_scale)?;
                    if i != 0 && i != last {
                        match r.width {
                            Some(w) if w >= 0.0 && w.is_finite() => {}
                            Some(w) => {
                                return Err(Error::config(
                                    format!("/device/regions/{i}/width"),
                                    format!("must be nonnegative and finite, got {w}"),
                                ))
                            }
                            None => return Err(Error::config(format!("/device/regions/{i}/width"), "interior region needs a width")),
                        }
                    }
                }
            }
        }
        if let Some(FieldProfile::Named(name)) = &self.field_profile {
            match name.as_str() {
                "uniform" => {}
                "confined" if matches!(self.device, DeviceConfig::TripleBarrier(_)) => {}
                "confined" => return Err(Error::config("/field_profile", "\"confined\" needs a triple-barrier device")),
                other => return Err(Error::config("/field_profile", format!("unknown profile {other:?}"))),
            }
        }
        let w = &self.waveform;
        if w.kind != WaveformKindConfig::Off {
            match w.omega_mev {
                Some(o) => positive("/waveform/omega_mev", o)?,
                None => return Err(Error::config("/waveform/omega_mev", "required for a driven waveform")),
            }
            finite("/waveform/phase", w.phase)?;
            let strengths = [w.amplitude_au.is_some(), w.xi.is_some(), w.up_over_omega.is_some()];
            if !strengths.iter().any(|&s| s) && self.scan.xis.is_none() {
                return Err(Error::config("/waveform", "give one of amplitude_au, xi or up_over_omega"));
            }
            if let Some(a) = w.amplitude_au {
                finite("/waveform/amplitude_au", a)?;
            }
            if let Some(x) = w.xi {
                finite("/waveform/xi", x)?;
            }
            if let Some(u) = w.up_over_omega {
                if !(u >= 0.0 && u.is_finite()) {
                    return Err(Error::config("/waveform/up_over_omega", "must be nonnegative"));
                }
            }
            if w.kind == WaveformKindConfig::PulseTrain {
                positive("/waveform/pulse_cycles", w.pulse_cycles.unwrap_or(f64::NAN))?;
                positive("/waveform/width_ratio", w.width_ratio.unwrap_or(f64::NAN))?;
            }
        }
        if let Some(f) = &self.static_field {
            if let Some(v) = f.field_au {
                finite("/static_field/field_au", v)?;
            }
            if let Some(v) = f.eta {
                finite("/static_field/eta", v)?;
                if f.field_au.is_none() && !matches!(self.device, DeviceConfig::TripleBarrier(_)) {
                    return Err(Error::config("/static_field/eta", "eta needs a triple-barrier device"));
                }
            }
        }
        let s = &self.scan;
        match (&s.energy_mev, &s.energies_mev) {
            (Some(_), Some(_)) => return Err(Error::config("/scan", "give either energy_mev or energies_mev")),
            (None, None) => return Err(Error::config("/scan/energy_mev", "an energy axis is required")),
            (Some(r), None) => {
                finite("/scan/energy_mev/start", r.start)?;
                positive("/scan/energy_mev/step", r.step)?;
                if !(r.stop >= r.start && r.stop.is_finite()) {
                    return Err(Error::config("/scan/energy_mev/stop", "must be finite and >= start"));
                }
            }
            (None, Some(list)) => {
                if list.is_empty() {
                    return Err(Error::config("/scan/energies_mev", "axis must not be empty"));
                }
                for (i, e) in list.iter().enumerate() {
                    finite(&format!("/scan/energies_mev/{i}"), *e)?;
                    if i > 0 && *e <= list[i - 1] {
                        return Err(Error::config(format!("/scan/energies_mev/{i}"), "energies must be strictly increasing"));
                    }
                }
            }
        }
        nonempty("/scan/fields_au", &s.fields_au)?;
        nonempty("/scan/etas", &s.etas)?;
        nonempty("/scan/phases", &s.phases)?;
        nonempty("/scan/xis", &s.xis)?;
        if s.fields_au.is_some() && s.etas.is_some() {
            return Err(Error::config("/scan", "give either fields_au or etas"));
        }
        if s.etas.is_some() && !matches!(self.device, DeviceConfig::TripleBarrier(_)) {
            return Err(Error::config("/scan/etas", "eta needs a triple-barrier device"));
        }
        if s.xis.is_some() && self.waveform.kind == WaveformKindConfig::Off {
            return Err(Error::config("/scan/xis", "xi axis needs a driven waveform"));
        }
        let any_field = self.static_field.as_ref().is_some_and(|f| f.field_au.unwrap_or(0.0) != 0.0 || f.eta.unwrap_or(0.0) != 0.0)
            || s.fields_au.as_ref().is_some_and(|l| l.iter().any(|&f| f != 0.0))
            || s.etas.as_ref().is_some_and(|l| l.iter().any(|&f| f != 0.0));
        if any_field && self.staircase_points.is_none() {
            return Err(Error::config("/staircase_points", "required when a static field is applied"));
        }
        if let Some(n) = self.staircase_points {
            if n < 2 {
                return Err(Error::config("/staircase_points", "need at least two points"));
            }
        }
        match self.truncation {
            TruncationConfig::Fixed(_) => {}
            TruncationConfig::Adaptive { start, cap } => {
                if start > cap {
                    return Err(Error::config("/truncation/adaptive/start", "must not exceed cap"));
                }
            }
        }
        if let Some(n) = self.time_samples {
            if n < 256 || !n.is_power_of_two() {
                return Err(Error::config("/time_samples", "must be a power of two >= 256"));
            }
        }
        positive("/tolerance", self.tolerance)?;
        if let Some(c) = &self.converge {
            positive("/converge/tolerance", c.tolerance)?;
            nonempty("/converge/levels", &c.levels)?;
        }
        Ok(())
    }

    /// Energies (meV, kinetic above the incident lead's dressed band edge).
    pub fn energies_mev(&self) -> Vec<f64> {
        if let Some(list) = &self.scan.energies_mev {
            return list.clone();
        }
        let r = self.scan.energy_mev.expect("validated");
        let count = ((r.stop - r.start) / r.step * (1.0 + 1e-12)).floor() as usize + 1;
        (0..count).map(|i| r.start + i as f64 * r.step).collect()
    }

    pub fn omega(&self) -> f64 {
        units::mev_to_hartree(self.waveform.omega_mev.unwrap_or(0.0))
    }

    /// Device geometry without drive or static field, in atomic units.
    pub fn base_device(&self) -> Result<Device> {
        let a = units::angstrom_to_bohr;
        let e = units::mev_to_hartree;
        let mut device = match &self.device {
            DeviceConfig::TripleBarrier(TripleBarrierConfig { well_width, barrier_width, barrier_height, well_mass, barrier_mass }) => {
                Device::triple_barrier(&TripleBarrier {
                    well_width: a(*well_width),
                    barrier_width: a(*barrier_width),
                    barrier_height: e(*barrier_height),
                    well_mass: *well_mass,
                    barrier_mass: *barrier_mass,
                })?
            }
            DeviceConfig::SingleBarrier(SingleBarrierConfig { width, height, lead_mass, barrier_mass }) => {
                Device::single_barrier(a(*width), e(*height), *lead_mass, *barrier_mass)?
            }
            DeviceConfig::Uniform(UniformConfig { mass, potential }) => Device::uniform(*mass, e(*potential))?,
            DeviceConfig::Regions(RegionsConfig { regions, origin }) => {
                let last = regions.len() - 1;
                let list = regions
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        let base = if i == 0 || i == last {
                            Region::lead(r.mass, e(r.potential))
                        } else {
                            Region::slab(r.mass, e(r.potential), a(r.width.unwrap_or(0.0)))
                        };
                        base.with_field_scale(r.field_scale)
                    })
                    .collect();
                Device::new(list, a(*origin))?
            }
        };
        match &self.field_profile {
            None => {}
            Some(FieldProfile::Named(name)) if name == "uniform" => {}
            Some(FieldProfile::Named(_)) => device = device.with_field_profile(&TripleBarrier::confined_field_profile())?,
            Some(FieldProfile::PerRegion(p)) => {
                device = device
                    .with_field_profile(p)
                    .map_err(|err| Error::config("/field_profile", err.to_string()))?
            }
        }
        Ok(device.with_incidence(self.incidence))
    }

    /// Length `3b + 2a` used by `eta`, if the device is a triple barrier.
    fn eta_length(&self) -> Option<(f64, f64)> {
        match &self.device {
            DeviceConfig::TripleBarrier(TripleBarrierConfig { well_width, barrier_width, barrier_height, .. }) => Some((
                units::angstrom_to_bohr(3.0 * barrier_width + 2.0 * well_width),
                units::mev_to_hartree(*barrier_height),
            )),
            _ => None,
        }
    }

    pub fn eta_to_field(&self, eta: f64) -> f64 {
        let (length, v0) = self.eta_length().expect("validated");
        units::eta_to_field(eta, v0, length)
    }

    /// Static-field values to scan, in atomic units.
    pub fn fields(&self) -> Vec<f64> {
        if let Some(list) = &self.scan.fields_au {
            return list.clone();
        }
        if let Some(list) = &self.scan.etas {
            return list.iter().map(|&eta| self.eta_to_field(eta)).collect();
        }
        vec![self.static_field_au()]
    }

    fn static_field_au(&self) -> f64 {
        match &self.static_field {
            None => 0.0,
            Some(StaticFieldConfig { field_au: Some(f), eta }) => {
                if eta.is_some() {
                    log::warn!("both field_au and eta given; using field_au");
                }
                *f
            }
            Some(StaticFieldConfig { field_au: None, eta: Some(eta) }) => self.eta_to_field(*eta),
            Some(_) => 0.0,
        }
    }

    pub fn phases(&self) -> Vec<f64> {
        self.scan.phases.clone().unwrap_or_else(|| vec![self.waveform.phase])
    }

    /// `xi` values to scan; `None` means use the waveform's own strength.
    pub fn xis(&self) -> Vec<Option<f64>> {
        match &self.scan.xis {
            Some(list) => list.iter().map(|&x| Some(x)).collect(),
            None => vec![None],
        }
    }

    /// Laser waveform for a scan point.
    pub fn waveform(&self, phase: f64, xi: Option<f64>) -> Result<Waveform> {
        let w = &self.waveform;
        if w.kind == WaveformKindConfig::Off {
            return Ok(Waveform::off());
        }
        let omega = self.omega();
        let amplitude = match (w.amplitude_au, xi.or(w.xi), w.up_over_omega) {
            (Some(a), other, up) => {
                if other.is_some() || up.is_some() {
                    log::warn!("raw amplitude_au given together with xi/up_over_omega; using amplitude_au");
                }
                a
            }
            (None, Some(x), _) => units::xi_to_amplitude(x, omega),
            (None, None, Some(ratio)) => {
                let mass = self.base_device()?.incident_lead().mass;
                units::ponderomotive_ratio_to_amplitude(ratio, omega, mass)
            }
            (None, None, None) => return Err(Error::config("/waveform", "no field strength given")),
        };
        match w.kind {
            WaveformKindConfig::Off => unreachable!(),
            WaveformKindConfig::Monochromatic => Waveform::monochromatic(amplitude, omega, phase),
            WaveformKindConfig::Bichromatic => Waveform::bichromatic(amplitude, omega, phase),
            WaveformKindConfig::PulseTrain => {
                let duration = w.pulse_cycles.expect("validated") * 2.0 * PI / omega;
                let width = duration / w.width_ratio.expect("validated");
                Waveform::pulse_train(amplitude, omega, phase, duration, width)
            }
        }
    }

    /// Fully built device for one `(field, phase, xi)` combination.
    pub fn device(&self, field: f64, phase: f64, xi: Option<f64>) -> Result<Device> {
        let device = self.base_device()?.with_waveform(self.waveform(phase, xi)?);
        if field == 0.0 {
            return Ok(device);
        }
        let points = self
            .staircase_points
            .ok_or_else(|| Error::config("/staircase_points", "required when a static field is applied"))?;
        device.discretize_stark(field, points)
    }

    pub fn solver_options(&self) -> SolverOptions {
        let truncation = match self.truncation {
            TruncationConfig::Fixed(n) => Truncation::Fixed(n),
            TruncationConfig::Adaptive { start, cap } => Truncation::Adaptive { start, cap, tolerance: self.tolerance },
        };
        SolverOptions {
            truncation,
            time_samples: self.time_samples.map_or(TimeSampling::Auto, TimeSampling::Fixed),
        }
    }

    pub fn output_format(&self) -> OutputFormat {
        self.output.as_ref().map(|o| o.format).unwrap_or_default()
    }
}
