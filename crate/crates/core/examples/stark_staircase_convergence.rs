//! Refining the Stark staircase: a = 40 A, b = 20 A, F = -0.23e-4 a.u.

use floquet_tunneling::model::{Device, TripleBarrier};
use floquet_tunneling::solver::{solve, SolverOptions};
use floquet_tunneling::units::{angstrom_to_bohr, mev_to_hartree};

fn main() -> floquet_tunneling::Result<()> {
    let device = Device::triple_barrier(&TripleBarrier {
        well_width: angstrom_to_bohr(40.0),
        barrier_width: angstrom_to_bohr(20.0),
        barrier_height: mev_to_hartree(237.0),
        well_mass: 0.0667,
        barrier_mass: 0.0918,
    })?;
    let energies: Vec<f64> = (1..=160).map(|i| 2.5 * i as f64).collect();
    let curve = |points: usize| -> floquet_tunneling::Result<Vec<f64>> {
        let stairs = device.discretize_stark(-0.23e-4, points)?;
        energies
            .iter()
            .map(|&e| solve(&stairs, mev_to_hartree(e), &SolverOptions::default()).map(|r| r.total_transmission))
            .collect()
    };
    let reference = curve(281)?;
    for points in [8, 15, 29, 71, 141] {
        let t = curve(points)?;
        let worst = t.iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("{points:>4} points: max |T - T_281| = {worst:.2e}");
    }
    Ok(())
}
