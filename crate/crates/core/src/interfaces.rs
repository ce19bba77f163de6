//! Zero-anchored matching matrices, local interface transfer matrices and
//! slab propagators.
//!
//! Every matrix here is evaluated as if the interface sat at `x = 0`, so no
//! entry depends on absolute coordinates. Slab thicknesses enter only through
//! [`Propagator`].

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::floquet::{Direction, LayerBasis};
use crate::linalg::{BlockMatrix, CMat, Lu};
use crate::units::ELECTRON_CHARGE;

/// Matching matrix `[[B+, B-], [B'+, B'-]]` of one region at `x = 0`.
///
/// Rows are the harmonics `M` of the wavefunction (top) and of the
/// mass-weighted kinetic momentum `(1/m)(-i d/dx - e A) psi` (bottom);
/// columns are the amplitudes `C_N^+` then `C_N^-`:
///
/// `B^s_{MN} = B_{M-N}(s p_N)` and
/// `B'^s_{MN} = (1/m) [s p_N B_{M-N}(s p_N) - e sum_n b_n B_{M-N-n}(s p_N)]`.
pub fn matching_matrix(basis: &LayerBasis) -> CMat {
    let d = basis.dim();
    let m = basis.mass();
    let e = ELECTRON_CHARGE;
    Mat::from_fn(2 * d, 2 * d, |row, col| {
        let (dir, n_pos) = if col < d { (Direction::Plus, col) } else { (Direction::Minus, col - d) };
        let k = (row % d) as i64 - n_pos as i64; // M - N
        let b = basis.coefficient(dir, n_pos, k);
        if row < d {
            b
        } else {
            let p = basis.momentum(n_pos) * dir.sign();
            (p * b - e * basis.drive(dir, n_pos, k)) / m
        }
    })
}

/// Matching matrix of a region together with its LU factorization, so each
/// region is factorized once however many interfaces it touches.
pub struct FactoredMatching {
    pub matrix: CMat,
    lu: Lu,
}

impl FactoredMatching {
    pub fn new(basis: &LayerBasis) -> Self {
        let matrix = matching_matrix(basis);
        let lu = Lu::new(matrix.as_ref());
        Self { matrix, lu }
    }

    pub fn pivot_ratio(&self) -> f64 {
        self.lu.pivot_ratio()
    }
}

/// `T0 = B_right(0)^-1 B_left(0)`, mapping left-region amplitudes to
/// right-region amplitudes across one interface.
pub fn interface_transfer(left: &LayerBasis, right: &LayerBasis) -> Result<BlockMatrix> {
    interface_transfer_factored(&FactoredMatching::new(left), &FactoredMatching::new(right), 0)
}

/// As [`interface_transfer`], with precomputed matching matrices. `region` names
/// the right-hand region in diagnostics.
pub fn interface_transfer_factored(
    left: &FactoredMatching,
    right: &FactoredMatching,
    region: usize,
) -> Result<BlockMatrix> {
    if right.lu.is_singular() {
        return Err(Error::SingularMatching { region, ratio: right.lu.pivot_ratio() });
    }
    let t = right.lu.solve(left.matrix.as_ref());
    let t = BlockMatrix::from_full(t.as_ref());
    if !t.is_finite() {
        return Err(Error::NonFinite("interface transfer matrix"));
    }
    Ok(t)
}

/// Free propagation across a homogeneous slab of width `width`: the
/// amplitudes pick up `exp(+- i p_N width)`.
#[derive(Clone, Debug)]
pub struct Propagator {
    width: f64,
    /// `exp(i p_N width)`, modulus <= 1 by the branch choice `Im p >= 0`.
    factors: Vec<Complex64>,
}

impl Propagator {
    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn factors(&self) -> &[Complex64] {
        &self.factors
    }

    /// `P(a) P(b) = P(a + b)` for the same medium.
    pub fn compose(&self, other: &Propagator) -> Propagator {
        Propagator {
            width: self.width + other.width,
            factors: self.factors.iter().zip(&other.factors).map(|(a, b)| a * b).collect(),
        }
    }

    /// Transfer-matrix form `diag(exp(i p w), exp(-i p w))`. The lower block
    /// grows without bound for closed channels.
    pub fn as_transfer(&self) -> BlockMatrix {
        let d = self.factors.len();
        let mut t = BlockMatrix::zeros(d);
        for (i, f) in self.factors.iter().enumerate() {
            t.pp[(i, i)] = *f;
            t.mm[(i, i)] = f.inv();
        }
        t
    }
}

pub fn propagator(basis: &LayerBasis, width: f64) -> Result<Propagator> {
    if !(width >= 0.0) {
        return Err(Error::NegativeWidth(width));
    }
    let i = Complex64::new(0.0, 1.0);
    let factors = basis
        .channels()
        .iter()
        .map(|c| if width == 0.0 { Complex64::new(1.0, 0.0) } else { (i * c.momentum * width).exp() })
        .collect();
    Ok(Propagator { width, factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::{build_layer_basis, ChannelGrid, TimeSampling};
    use crate::model::{Region, Waveform};
    use crate::units::{mev_to_hartree, xi_to_amplitude};

    fn omega() -> f64 {
        mev_to_hartree(10.0)
    }

    fn basis(region: &Region, waveform: &Waveform, n_max: usize) -> LayerBasis {
        let grid = ChannelGrid::new(mev_to_hartree(120.0), omega(), n_max);
        build_layer_basis(&grid, region, waveform, TimeSampling::Auto).unwrap()
    }

    fn laser() -> Waveform {
        Waveform::monochromatic(xi_to_amplitude(0.1, omega()), omega(), 0.5).unwrap()
    }

    #[test]
    fn identical_regions_transfer_is_identity() {
        let r = Region::slab(0.0918, mev_to_hartree(237.0), 20.0);
        let b = basis(&r, &laser(), 4);
        let t = interface_transfer(&b, &b).unwrap();
        assert!(t.max_diff(&BlockMatrix::identity(b.dim())) < 1e-12);
    }

    #[test]
    fn mass_step_matches_closed_form() {
        // current-conserving step: r = (v1 - v2)/(v1 + v2), t = 2 v1/(v1 + v2), v = p/m
        let (m1, m2, v) = (0.0667, 0.0918, mev_to_hartree(40.0));
        let left = basis(&Region::lead(m1, 0.0), &Waveform::off(), 0);
        let right = basis(&Region::lead(m2, v), &Waveform::off(), 0);
        let v1 = left.momentum(0).re / m1;
        let v2 = right.momentum(0).re / m2;
        let (r, t) = ((v1 - v2) / (v1 + v2), 2.0 * v1 / (v1 + v2));
        let tr = interface_transfer(&left, &right).unwrap();
        let c_plus = tr.pp[(0, 0)] + tr.pm[(0, 0)] * r;
        let c_minus = tr.mp[(0, 0)] + tr.mm[(0, 0)] * r;
        assert!((c_plus - t).norm() < 1e-14, "{c_plus}");
        assert!(c_minus.norm() < 1e-14, "{c_minus}");
    }

    #[test]
    fn transfer_composes_across_three_regions() {
        let w = laser();
        let a = basis(&Region::lead(0.0667, 0.0), &w, 3);
        let b = basis(&Region::slab(0.0918, mev_to_hartree(237.0), 1.0), &w, 3);
        let c = basis(&Region::slab(0.08, mev_to_hartree(60.0), 1.0), &w, 3);
        let direct = interface_transfer(&a, &c).unwrap();
        let via = interface_transfer(&b, &c).unwrap().mul(&interface_transfer(&a, &b).unwrap());
        let scale = direct.max_abs();
        assert!(direct.max_diff(&via) < 1e-11 * scale, "{:e}", direct.max_diff(&via) / scale);
    }

    #[test]
    fn matching_matrix_is_undriven_block_form_without_laser() {
        let r = Region::slab(0.0667, 0.0, 5.0);
        let b = basis(&r, &Waveform::off(), 2);
        let m = matching_matrix(&b);
        let d = b.dim();
        for i in 0..d {
            let p = b.momentum(i);
            assert_eq!(m[(i, i)], Complex64::new(1.0, 0.0));
            assert_eq!(m[(i, i + d)], Complex64::new(1.0, 0.0));
            assert!((m[(i + d, i)] - p / 0.0667).norm() < 1e-15);
            assert!((m[(i + d, i + d)] + p / 0.0667).norm() < 1e-15);
        }
    }

    #[test]
    fn propagators_compose_additively() {
        let b = basis(&Region::slab(0.0918, mev_to_hartree(237.0), 1.0), &laser(), 4);
        let p = propagator(&b, 12.0).unwrap().compose(&propagator(&b, 30.0).unwrap());
        let q = propagator(&b, 42.0).unwrap();
        assert_eq!(p.width(), 42.0);
        for (x, y) in p.factors().iter().zip(q.factors()) {
            assert!((x - y).norm() < 1e-14);
            assert!(x.norm() <= 1.0);
        }
    }

    #[test]
    fn zero_width_propagator_is_trivial_and_negative_is_rejected() {
        let b = basis(&Region::slab(0.0667, 0.0, 0.0), &laser(), 2);
        assert!(propagator(&b, 0.0).unwrap().factors().iter().all(|f| *f == Complex64::new(1.0, 0.0)));
        assert!(matches!(propagator(&b, -1.0), Err(Error::NegativeWidth(_))));
    }

    #[test]
    fn threshold_region_is_flagged_singular() {
        let left = basis(&Region::lead(0.0667, 0.0), &Waveform::off(), 0);
        let right = basis(&Region::lead(0.0667, mev_to_hartree(120.0)), &Waveform::off(), 0);
        assert!(matches!(interface_transfer(&left, &right), Err(Error::SingularMatching { .. })));
    }

    /// Sampled `psi(0, t)` and `(1/m)(-i d/dx - e A) psi` of one region for the
    /// amplitude vector `c`, built from the phase integral directly.
    fn time_domain(basis: &LayerBasis, waveform: &Waveform, c: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        use crate::floquet::PhaseIntegral;
        use crate::model::vector_potential_samples;
        let s = basis.time_samples();
        let a = vector_potential_samples(waveform, basis.region().field_scale, s).unwrap();
        let phase = PhaseIntegral::new(&a, basis.mass()).unwrap();
        let (d, n_max) = (basis.dim(), basis.n_max() as i64);
        let w = waveform.base_frequency();
        let mut psi = vec![Complex64::new(0.0, 0.0); s];
        let mut flux = vec![Complex64::new(0.0, 0.0); s];
        for (pos, ch) in basis.channels().iter().enumerate() {
            for (slot, dir) in [Direction::Plus, Direction::Minus].into_iter().enumerate() {
                let q = ch.momentum * dir.sign();
                let e = phase.exp_samples(q);
                let rms = if ch.is_open() { 1.0 } else { (e.iter().map(|v| v.norm_sqr()).sum::<f64>() / s as f64).sqrt() };
                let amp = c[slot * d + pos] / rms;
                for j in 0..s {
                    let t = j as f64 * 2.0 * std::f64::consts::PI / (w * s as f64);
                    let term = amp * e[j] * Complex64::new(0.0, -((pos as i64 - n_max) as f64) * w * t).exp();
                    psi[j] += term;
                    flux[j] += (q - ELECTRON_CHARGE * a.samples()[j]) / basis.mass() * term;
                }
            }
        }
        (psi, flux)
    }

    /// Coefficient of `exp(-i M w t)` in a sampled periodic function.
    fn harmonic(f: &[Complex64], m: i64, w: f64) -> Complex64 {
        let s = f.len();
        f.iter()
            .enumerate()
            .map(|(j, v)| v * Complex64::new(0.0, m as f64 * w * j as f64 * 2.0 * std::f64::consts::PI / (w * s as f64)).exp())
            .sum::<Complex64>()
            / s as f64
    }

    #[test]
    fn matched_wavefunction_is_continuous_in_time() {
        let w = laser();
        let n_max = 4;
        let left = basis(&Region::lead(0.0667, 0.0), &w, n_max);
        let right = basis(&Region::slab(0.0918, mev_to_hartree(237.0), 1.0).with_field_scale(0.5), &w, n_max);
        let t = interface_transfer(&left, &right).unwrap().to_full();
        let d = left.dim();
        let c_left: Vec<Complex64> = (0..2 * d).map(|k| Complex64::new((1.3 * k as f64).sin(), (0.7 * k as f64 + 0.2).cos())).collect();
        let c_right: Vec<Complex64> = (0..2 * d).map(|r| (0..2 * d).map(|k| t[(r, k)] * c_left[k]).sum()).collect();
        let (psi_l, flux_l) = time_domain(&left, &w, &c_left);
        let (psi_r, flux_r) = time_domain(&right, &w, &c_right);
        // matching holds for the retained harmonics |M| <= n_max
        for m in -(n_max as i64)..=n_max as i64 {
            let om = w.base_frequency();
            let dpsi = (harmonic(&psi_l, m, om) - harmonic(&psi_r, m, om)).norm();
            let dflux = (harmonic(&flux_l, m, om) - harmonic(&flux_r, m, om)).norm() / (left.momentum(n_max).norm() / 0.0667);
            assert!(dpsi < 1e-10 && dflux < 1e-10, "M {m}: {dpsi:e} {dflux:e}");
        }
    }
}
