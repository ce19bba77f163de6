//! Reversing the static field shifts the transmission spectrum by |F| L.

use floquet_tunneling::model::{Device, TripleBarrier, Waveform};
use floquet_tunneling::solver::{incident_band_edge, solve, SolverOptions};
use floquet_tunneling::units::{angstrom_to_bohr, hartree_to_mev, mev_to_hartree, ponderomotive_ratio_to_amplitude};

fn main() -> floquet_tunneling::Result<()> {
    let omega = mev_to_hartree(70.0);
    let laser = Waveform::monochromatic(ponderomotive_ratio_to_amplitude(1e-4, omega, 0.0667), omega, 0.0)?;
    let base = Device::triple_barrier(&TripleBarrier {
        well_width: angstrom_to_bohr(70.0),
        barrier_width: angstrom_to_bohr(20.0),
        barrier_height: mev_to_hartree(237.0),
        well_mass: 0.0667,
        barrier_mass: 0.0918,
    })?
    .with_waveform(laser);
    let field = 0.23e-4;
    let shift = hartree_to_mev(field * angstrom_to_bohr(200.0));
    println!("|F| (3b + 2a) = {shift:.3} meV");
    let minus = base.discretize_stark(-field, 221)?;
    let plus = base.discretize_stark(field, 221)?;
    let opts = SolverOptions::fixed(4);
    for e in [34.0, 100.0, 138.0, 200.0] {
        let t_minus = solve(&minus, incident_band_edge(&minus)? + mev_to_hartree(e), &opts)?.total_transmission;
        let t_plus = solve(&plus, incident_band_edge(&plus)? + mev_to_hartree(e + shift), &opts)?.total_transmission;
        println!("T_-F({e:>5} meV) = {t_minus:.8}   T_+F({:>7.2} meV) = {t_plus:.8}", e + shift);
    }
    Ok(())
}
