//! Conversions between laboratory units and atomic units.
//!
//! Everything inside the solver is in atomic units: `hbar = m_e = 1`,
//! energies in Hartree, lengths in bohr, fields in Hartree/bohr. The electron
//! charge is taken as `e = -1`; monochromatic probabilities do not depend on
//! this sign.

/// One Hartree in meV.
pub const HARTREE_MEV: f64 = 27_211.386_245_988;

/// One bohr in Angstrom.
pub const BOHR_ANGSTROM: f64 = 0.529_177_210_903;

/// Atomic unit of electric field in V/m.
pub const FIELD_AU_V_PER_M: f64 = 5.142_206_747_63e11;

/// Electron charge in atomic units.
pub const ELECTRON_CHARGE: f64 = -1.0;

/// Electron rest mass in atomic units. Effective masses are given as multiples of it.
pub const ELECTRON_MASS: f64 = 1.0;

#[inline]
pub fn mev_to_hartree(e: f64) -> f64 {
    e / HARTREE_MEV
}

#[inline]
pub fn hartree_to_mev(e: f64) -> f64 {
    e * HARTREE_MEV
}

#[inline]
pub fn angstrom_to_bohr(x: f64) -> f64 {
    x / BOHR_ANGSTROM
}

#[inline]
pub fn bohr_to_angstrom(x: f64) -> f64 {
    x * BOHR_ANGSTROM
}

#[inline]
pub fn v_per_m_to_field(f: f64) -> f64 {
    f / FIELD_AU_V_PER_M
}

#[inline]
pub fn field_to_v_per_m(f: f64) -> f64 {
    f * FIELD_AU_V_PER_M
}

/// Laser amplitude `E_0` for the dimensionless intensity
/// `xi = |e| E_0 / (2 sqrt(hbar m_e omega^3))`.
pub fn xi_to_amplitude(xi: f64, omega: f64) -> f64 {
    2.0 * xi * (ELECTRON_MASS * omega.powi(3)).sqrt() / ELECTRON_CHARGE.abs()
}

pub fn amplitude_to_xi(amplitude: f64, omega: f64) -> f64 {
    ELECTRON_CHARGE.abs() * amplitude / (2.0 * (ELECTRON_MASS * omega.powi(3)).sqrt())
}

/// Static field `F` for the dimensionless tilt `eta = |e| F L / V_0`, with `L` the
/// structure length.
pub fn eta_to_field(eta: f64, barrier_height: f64, length: f64) -> f64 {
    eta * barrier_height / (ELECTRON_CHARGE.abs() * length)
}

/// Amplitude of a monochromatic field whose ponderomotive energy
/// `e^2 E_0^2 / (4 m omega^2)` for a particle of mass `mass` equals
/// `ratio * omega`.
pub fn ponderomotive_ratio_to_amplitude(ratio: f64, omega: f64, mass: f64) -> f64 {
    (4.0 * mass * ratio * omega.powi(3)).sqrt() / ELECTRON_CHARGE.abs()
}
