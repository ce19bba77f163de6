//! Floquet coefficients from the FFT against the generalized-Bessel series.

use floquet_tunneling::model::Waveform;
use floquet_tunneling::scan::diagnose_bessel;
use floquet_tunneling::units::{mev_to_hartree, xi_to_amplitude};

fn main() -> floquet_tunneling::Result<()> {
    let (mass, omega) = (0.0667, mev_to_hartree(70.0));
    let q = (2.0 * mass * mev_to_hartree(100.0)).sqrt();
    for xi in [0.1, 0.5, 1.0, 2.0] {
        let w = Waveform::monochromatic(xi_to_amplitude(xi, omega), omega, 0.0)?;
        let report = diagnose_bessel(&w, q, mass, 160)?;
        let significant = report.rows.iter().filter(|r| r.quadrature[0].hypot(r.quadrature[1]) > 1e-6).count();
        println!(
            "xi = {xi:<4} samples {:>5}  |K| with |B_K| > 1e-6: {significant:>3}  max diff {:.1e}  sum |B_K|^2 - 1 = {:.1e}",
            report.time_samples,
            report.max_difference,
            report.parseval - 1.0
        );
    }
    Ok(())
}
