//! Uniform space is perfectly transparent, driven or not.

use floquet_tunneling::model::{Device, Waveform};
use floquet_tunneling::solver::{incident_band_edge, solve, SolverOptions};
use floquet_tunneling::units::{mev_to_hartree, xi_to_amplitude};

fn main() -> floquet_tunneling::Result<()> {
    let omega = mev_to_hartree(70.0);
    let cases = [
        ("laser off", Waveform::off()),
        ("xi = 0.1", Waveform::monochromatic(xi_to_amplitude(0.1, omega), omega, 0.0)?),
    ];
    for (label, waveform) in cases {
        let device = Device::uniform(0.0667, 0.0)?.with_waveform(waveform);
        let edge = incident_band_edge(&device)?;
        for e in [5.0, 50.0, 200.0] {
            let r = solve(&device, edge + mev_to_hartree(e), &SolverOptions::default())?;
            println!("{label:>9}  E = {e:>5} meV  T = {:.15}  R = {:.1e}", r.total_transmission, r.total_reflection);
        }
    }
    Ok(())
}
