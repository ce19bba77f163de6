//! Resonance doublets of a field-free triple barrier (a = 70 A, b = 20 A).

use floquet_tunneling::model::{Device, TripleBarrier};
use floquet_tunneling::observables::{golden_maximum, local_maxima};
use floquet_tunneling::solver::{solve, SolverOptions};
use floquet_tunneling::units::{angstrom_to_bohr, mev_to_hartree};

fn main() -> floquet_tunneling::Result<()> {
    let device = Device::triple_barrier(&TripleBarrier {
        well_width: angstrom_to_bohr(70.0),
        barrier_width: angstrom_to_bohr(20.0),
        barrier_height: mev_to_hartree(237.0),
        well_mass: 0.0667,
        barrier_mass: 0.0918,
    })?;
    let opts = SolverOptions::default();
    let t = |e: f64| solve(&device, mev_to_hartree(e), &opts).map(|r| r.total_transmission);
    let grid: Vec<f64> = (1..1200).map(|i| 0.25 * i as f64).collect();
    let values = grid.iter().map(|&e| t(e)).collect::<Result<Vec<_>, _>>()?;
    for i in local_maxima(&values, 1e-3) {
        let (e, peak) = golden_maximum(t, grid[i - 1], grid[i + 1], 1e-7)?;
        println!("resonance at {e:9.4} meV, T = {peak:.6}");
    }
    Ok(())
}
