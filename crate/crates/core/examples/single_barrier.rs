//! Static rectangular GaAs/AlGaAs barrier against the textbook formula.

use floquet_tunneling::model::Device;
use floquet_tunneling::solver::{solve, SolverOptions};
use floquet_tunneling::units::{angstrom_to_bohr, mev_to_hartree};

fn closed_form(e: f64, v: f64, w: f64, m1: f64, m2: f64) -> f64 {
    let r = (2.0 * m1 * e).sqrt() / m1;
    if e < v {
        let kappa = (2.0 * m2 * (v - e)).sqrt();
        let s = kappa / m2;
        1.0 / (1.0 + (r * r + s * s).powi(2) / (4.0 * r * r * s * s) * (kappa * w).sinh().powi(2))
    } else {
        let k = (2.0 * m2 * (e - v)).sqrt();
        let s = k / m2;
        1.0 / (1.0 + (r * r - s * s).powi(2) / (4.0 * r * r * s * s) * (k * w).sin().powi(2))
    }
}

fn main() -> floquet_tunneling::Result<()> {
    let (m1, m2) = (0.0667, 0.0918);
    let (v, w) = (mev_to_hartree(237.0), angstrom_to_bohr(30.0));
    let device = Device::single_barrier(w, v, m1, m2)?;
    println!("{:>8} {:>14} {:>14} {:>9}", "E (meV)", "T", "closed form", "|diff|");
    for e_mev in [10.0, 60.0, 120.0, 200.0, 236.0, 238.0, 300.0, 450.0] {
        let e = mev_to_hartree(e_mev);
        let t = solve(&device, e, &SolverOptions::default())?.total_transmission;
        let exact = closed_form(e, v, w, m1, m2);
        println!("{e_mev:>8} {t:>14.10} {exact:>14.10} {:>9.1e}", (t - exact).abs());
    }
    Ok(())
}
