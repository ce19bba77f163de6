//! S-matrix cascade against the direct transfer-matrix product on a driven
//! 281-slab Stark staircase, for growing sideband counts.

use floquet_tunneling::cascade::{cascade_device, transfer_product_scatter};
use floquet_tunneling::floquet::{ChannelGrid, TimeSampling};
use floquet_tunneling::model::{Device, TripleBarrier, Waveform};
use floquet_tunneling::solver::{incident_band_edge, result_from_cascade};
use floquet_tunneling::units::{angstrom_to_bohr, mev_to_hartree, xi_to_amplitude};

fn main() -> floquet_tunneling::Result<()> {
    let omega = mev_to_hartree(70.0);
    let device = Device::triple_barrier(&TripleBarrier {
        well_width: angstrom_to_bohr(70.0),
        barrier_width: angstrom_to_bohr(20.0),
        barrier_height: mev_to_hartree(237.0),
        well_mass: 0.0667,
        barrier_mass: 0.0918,
    })?
    .with_waveform(Waveform::monochromatic(xi_to_amplitude(0.1, omega), omega, 0.0)?)
    .discretize_stark(0.23e-4, 281)?;
    let energy = incident_band_edge(&device)? + mev_to_hartree(100.0);
    for n_max in [4, 8, 16, 24] {
        let grid = ChannelGrid::new(energy, omega, n_max);
        let s = cascade_device(&device, &grid, TimeSampling::Auto).and_then(|c| result_from_cascade(&device, &c));
        let t = transfer_product_scatter(&device, &grid, TimeSampling::Auto).and_then(|c| result_from_cascade(&device, &c));
        let show = |r: floquet_tunneling::Result<floquet_tunneling::ScatterResult>| match r {
            Ok(r) => format!("T = {:.10}, deficit {:.1e}", r.total_transmission, r.unitarity_deficit),
            Err(e) => format!("failed: {e}"),
        };
        println!("n_max = {n_max:>2}\n  S cascade:        {}\n  transfer product: {}", show(s), show(t));
    }
    Ok(())
}
