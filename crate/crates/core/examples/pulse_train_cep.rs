//! Carrier-envelope phase dependence of transmission for a train of
//! few-cycle pulses. The Floquet frequency is the repetition rate, so many
//! more sidebands are needed than for a monochromatic drive.

use std::f64::consts::PI;

use floquet_tunneling::model::{Device, Waveform};
use floquet_tunneling::solver::{incident_band_edge, solve, SolverOptions, Truncation};
use floquet_tunneling::units::{angstrom_to_bohr, mev_to_hartree, xi_to_amplitude};

fn main() -> floquet_tunneling::Result<()> {
    let omega = mev_to_hartree(70.0);
    let cycles = 3.0;
    let duration = cycles * 2.0 * PI / omega;
    let base = Device::single_barrier(angstrom_to_bohr(20.0), mev_to_hartree(237.0), 0.0667, 0.0918)?;
    let opts = SolverOptions { truncation: Truncation::Adaptive { start: 8, cap: 64, tolerance: 1e-10 }, ..Default::default() };
    for k in 0..4 {
        let cep = k as f64 * PI / 2.0;
        let pulse = Waveform::pulse_train(xi_to_amplitude(0.05, omega), omega, cep, duration, duration / 6.0)?;
        let device = base.clone().with_waveform(pulse);
        let r = solve(&device, incident_band_edge(&device)? + mev_to_hartree(120.0), &opts)?;
        println!("CEP = {cep:5.3}  T = {:.8}  n_max = {}  deficit {:.1e}", r.total_transmission, r.n_max, r.unitarity_deficit);
    }
    Ok(())
}
