//! Integer-order Bessel functions and the closed-form Floquet coefficients of
//! a monochromatic drive, used as an independent check on the FFT route.

use num_complex::Complex64;

use crate::units::ELECTRON_CHARGE;

/// `J_0(x) ..= J_{n_max}(x)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 sum_k J_{2k} = 1`.
pub fn bessel_j_all(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let ax = x.abs();
    let top = n_max.max(ax.ceil() as usize);
    let mut start = top + 20 + (40.0 * top as f64).sqrt() as usize;
    start += start % 2;
    let (mut next, mut cur) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    for k in (0..start).rev() {
        // cur holds J_{k+1}, next J_{k+2}
        let prev = 2.0 * (k + 1) as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        if k <= n_max {
            out[k] = cur;
        }
        if k % 2 == 0 {
            norm += if k == 0 { cur } else { 2.0 * cur };
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    for (n, v) in out.iter_mut().enumerate() {
        *v /= norm;
        if x < 0.0 && n % 2 == 1 {
            *v = -*v;
        }
    }
    out
}

/// `J_n(x)` for any integer order.
pub fn bessel_j(n: i64, x: f64) -> f64 {
    let m = n.unsigned_abs() as usize;
    let v = bessel_j_all(m, x)[m];
    if n < 0 && m % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Generalized Bessel function `sum_k J_{K + 2k}(a) J_k(b)`.
pub fn generalized_bessel(k: i64, a: f64, b: f64) -> f64 {
    let reach = (a.abs() + 2.0 * b.abs() + k.unsigned_abs() as f64 + 40.0).ceil() as usize;
    let ja = bessel_j_all(2 * reach + k.unsigned_abs() as usize, a);
    let jb = bessel_j_all(reach, b);
    let signed = |table: &[f64], n: i64| -> f64 {
        let m = n.unsigned_abs() as usize;
        if m >= table.len() {
            return 0.0;
        }
        if n < 0 && m % 2 == 1 {
            -table[m]
        } else {
            table[m]
        }
    };
    let r = reach as i64;
    (-r..=r).map(|j| signed(&ja, k + 2 * j) * signed(&jb, j)).sum()
}

/// Floquet coefficient `B_K(q)` of `exp(i Phi_q)` for `A(t) = A_0 cos(w t + phi)`
/// in a region of mass `m`, in closed form.
///
/// Here `Phi = alpha sin(w t + phi) + beta sin(2 w t + 2 phi) - c` with
/// `alpha = e A_0 q / (m w)`, `beta = -e^2 A_0^2 / (8 m w)` and `c` the value at
/// `t = 0`, so `B_K = exp(-i c) exp(-i K phi) sum_k J_{K+2k}(-alpha) J_k(beta)`.
pub fn monochromatic_coefficient(k: i64, q: f64, amplitude: f64, omega: f64, phase: f64, mass: f64) -> Complex64 {
    let e = ELECTRON_CHARGE;
    let alpha = e * amplitude * q / (mass * omega);
    let beta = -e * e * amplitude * amplitude / (8.0 * mass * omega);
    let c = alpha * phase.sin() + beta * (2.0 * phase).sin();
    let g = generalized_bessel(k, -alpha, beta);
    Complex64::from_polar(g, -c - k as f64 * phase)
}
