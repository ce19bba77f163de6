//! Transmission through a triple barrier under an w + 2w field as a function
//! of the relative phase.

use std::f64::consts::PI;

use floquet_tunneling::model::{Device, TripleBarrier, Waveform};
use floquet_tunneling::solver::{incident_band_edge, solve, SolverOptions};
use floquet_tunneling::units::{angstrom_to_bohr, mev_to_hartree, xi_to_amplitude};

fn main() -> floquet_tunneling::Result<()> {
    let omega = mev_to_hartree(70.0);
    let base = Device::triple_barrier(&TripleBarrier {
        well_width: angstrom_to_bohr(70.0),
        barrier_width: angstrom_to_bohr(20.0),
        barrier_height: mev_to_hartree(237.0),
        well_mass: 0.0667,
        barrier_mass: 0.0918,
    })?;
    for k in 0..8 {
        let phase = k as f64 * PI / 4.0;
        let device = base.clone().with_waveform(Waveform::bichromatic(xi_to_amplitude(0.1, omega), omega, phase)?);
        let r = solve(&device, incident_band_edge(&device)? + mev_to_hartree(100.0), &SolverOptions::default())?;
        println!(
            "phi = {phase:5.3}  T = {:.6}  T(+1) = {:.2e}  T(-1) = {:.2e}  n_max = {}  deficit {:.1e}",
            r.total_transmission,
            r.transmission_into(1).unwrap_or(0.0),
            r.transmission_into(-1).unwrap_or(0.0),
            r.n_max,
            r.unitarity_deficit
        );
    }
    Ok(())
}
