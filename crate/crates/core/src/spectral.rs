//! Discrete Fourier helpers on one period sampled at `t_j = j T / S`.
//!
//! Convention: a periodic `x(t) = sum_n c_n exp(-i n w t)`, so
//! `c_n = (1/S) sum_j x_j exp(+2 pi i n j / S)`. Coefficient arrays are stored
//! in FFT order (`n = 0, 1, .., S/2 - 1, -S/2, .., -1`).

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Fourier coefficients `c_n` of the samples, FFT ordered.
pub(crate) fn coefficients(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf = samples.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n).process(&mut buf));
    let inv = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= inv);
    buf
}

/// Samples `x_j` reconstructed from FFT-ordered coefficients.
pub(crate) fn synthesize(coefficients: &[Complex64]) -> Vec<Complex64> {
    let n = coefficients.len();
    let mut buf = coefficients.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n).process(&mut buf));
    buf
}

pub(crate) fn real_coefficients(samples: &[f64]) -> Vec<Complex64> {
    let buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    coefficients(&buf)
}

/// Signed harmonic of FFT slot `k`. The Nyquist slot maps to `-S/2`.
#[inline]
pub(crate) fn harmonic(k: usize, len: usize) -> i64 {
    if k < len / 2 {
        k as i64
    } else {
        k as i64 - len as i64
    }
}

/// FFT slot of harmonic `n`, if representable without touching Nyquist.
#[inline]
pub(crate) fn slot(n: i64, len: usize) -> Option<usize> {
    let half = (len / 2) as i64;
    if n.abs() >= half {
        None
    } else if n >= 0 {
        Some(n as usize)
    } else {
        Some((len as i64 + n) as usize)
    }
}

/// Antiderivative `F(t) = int_0^t g` of a zero-mean periodic real function,
/// exact for band-limited `g`. Returns the samples and the removed mean.
pub(crate) fn antiderivative(samples: &[f64], omega: f64) -> (Vec<f64>, f64) {
    let len = samples.len();
    let mut c = real_coefficients(samples);
    let mean = c[0].re;
    c[0] = Complex64::new(0.0, 0.0);
    c[len / 2] = Complex64::new(0.0, 0.0);
    // x_n e^{-i n w t} integrates to x_n (e^{-i n w t} - 1) / (-i n w)
    let mut offset = Complex64::new(0.0, 0.0);
    for (k, ck) in c.iter_mut().enumerate().skip(1) {
        let n = harmonic(k, len) as f64;
        *ck /= Complex64::new(0.0, -n * omega);
        offset += *ck;
    }
    let values = synthesize(&c);
    (values.iter().map(|v| (v - offset).re).collect(), mean)
}
