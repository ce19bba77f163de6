//! Dense complex linear algebra on top of `faer`: 2x2 block matrices over
//! Floquet channels and a pivot-monitored LU.

use faer::linalg::solvers::{PartialPivLu, Solve};
use faer::{Mat, MatRef};
use num_complex::Complex64;

/// Smallest acceptable ratio of smallest to largest LU pivot modulus.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-13;

pub type CMat = Mat<Complex64>;

/// LU with partial pivoting that remembers how close to singular it was.
pub struct Lu {
    lu: PartialPivLu<Complex64>,
    pivot_ratio: f64,
}

impl Lu {
    pub fn new(a: MatRef<'_, Complex64>) -> Self {
        let lu = PartialPivLu::new(a);
        let u = lu.U();
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..u.nrows() {
            let p = u[(i, i)].norm();
            lo = lo.min(p);
            hi = hi.max(p);
        }
        let pivot_ratio = if hi > 0.0 && hi.is_finite() && lo.is_finite() { lo / hi } else { 0.0 };
        Self { lu, pivot_ratio }
    }

    pub fn pivot_ratio(&self) -> f64 {
        self.pivot_ratio
    }

    pub fn is_singular(&self) -> bool {
        !(self.pivot_ratio >= SINGULAR_PIVOT_RATIO)
    }

    pub fn solve(&self, rhs: MatRef<'_, Complex64>) -> CMat {
        self.lu.solve(rhs)
    }
}

/// Four equally sized square blocks `[[pp, pm], [mp, mm]]`.
#[derive(Clone, Debug)]
pub struct BlockMatrix {
    pub pp: CMat,
    pub pm: CMat,
    pub mp: CMat,
    pub mm: CMat,
}

impl BlockMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            pp: Mat::zeros(dim, dim),
            pm: Mat::zeros(dim, dim),
            mp: Mat::zeros(dim, dim),
            mm: Mat::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            pp: Mat::identity(dim, dim),
            pm: Mat::zeros(dim, dim),
            mp: Mat::zeros(dim, dim),
            mm: Mat::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.pp.nrows()
    }

    pub fn from_full(full: MatRef<'_, Complex64>) -> Self {
        let d = full.nrows() / 2;
        assert!(full.nrows() == 2 * d && full.ncols() == 2 * d, "block matrix must be square with even size");
        Self {
            pp: full.submatrix(0, 0, d, d).to_owned(),
            pm: full.submatrix(0, d, d, d).to_owned(),
            mp: full.submatrix(d, 0, d, d).to_owned(),
            mm: full.submatrix(d, d, d, d).to_owned(),
        }
    }

    pub fn to_full(&self) -> CMat {
        let d = self.dim();
        Mat::from_fn(2 * d, 2 * d, |i, j| {
            let b = match (i < d, j < d) {
                (true, true) => &self.pp,
                (true, false) => &self.pm,
                (false, true) => &self.mp,
                (false, false) => &self.mm,
            };
            b[(i % d, j % d)]
        })
    }

    pub fn mul(&self, rhs: &BlockMatrix) -> BlockMatrix {
        BlockMatrix {
            pp: &self.pp * &rhs.pp + &self.pm * &rhs.mp,
            pm: &self.pp * &rhs.pm + &self.pm * &rhs.mm,
            mp: &self.mp * &rhs.pp + &self.mm * &rhs.mp,
            mm: &self.mp * &rhs.pm + &self.mm * &rhs.mm,
        }
    }

    /// Largest entry modulus over all four blocks.
    pub fn max_abs(&self) -> f64 {
        [&self.pp, &self.pm, &self.mp, &self.mm]
            .into_iter()
            .map(max_abs)
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        [&self.pp, &self.pm, &self.mp, &self.mm].into_iter().all(all_finite)
    }

    /// Largest entrywise difference to `other`.
    pub fn max_diff(&self, other: &BlockMatrix) -> f64 {
        [
            (&self.pp, &other.pp),
            (&self.pm, &other.pm),
            (&self.mp, &other.mp),
            (&self.mm, &other.mm),
        ]
        .into_iter()
        .map(|(a, b)| max_abs(&(a - b)))
        .fold(0.0, f64::max)
    }
}

pub fn max_abs(m: &CMat) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)].norm();
            // NaN wins so that instability is never hidden
            if v.is_nan() {
                return v;
            }
            best = best.max(v);
        }
    }
    best
}

pub fn all_finite(m: &CMat) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].re.is_finite() && m[(i, j)].im.is_finite()))
}

pub fn diagonal(values: &[Complex64]) -> CMat {
    let n = values.len();
    let mut m = Mat::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = v;
    }
    m
}

/// `diag(values) * m`
pub fn scale_rows(values: &[Complex64], m: &CMat) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| values[i] * m[(i, j)])
}

/// `m * diag(values)`
pub fn scale_cols(m: &CMat, values: &[Complex64]) -> CMat {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * values[j])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(d: usize, seed: f64) -> CMat {
        Mat::from_fn(d, d, |i, j| {
            let x = (i * 7 + j * 3) as f64 + seed;
            Complex64::new(x.sin(), (1.3 * x).cos()) + if i == j { Complex64::new(4.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        })
    }

    #[test]
    fn full_round_trip() {
        let full = sample(6, 0.2);
        let b = BlockMatrix::from_full(full.as_ref());
        assert_eq!(b.dim(), 3);
        assert_eq!(max_abs(&(&b.to_full() - &full)), 0.0);
    }

    #[test]
    fn block_product_matches_full_product() {
        let a = BlockMatrix::from_full(sample(8, 0.1).as_ref());
        let b = BlockMatrix::from_full(sample(8, 0.9).as_ref());
        let full = &a.to_full() * &b.to_full();
        assert!(max_abs(&(&a.mul(&b).to_full() - &full)) < 1e-12);
    }

    #[test]
    fn lu_solves_and_flags_singular() {
        let a = sample(5, 0.4);
        let lu = Lu::new(a.as_ref());
        assert!(!lu.is_singular());
        let x = lu.solve(Mat::<Complex64>::identity(5, 5).as_ref());
        assert!(max_abs(&(&(&a * &x) - &Mat::<Complex64>::identity(5, 5))) < 1e-13);

        let mut s = a.clone();
        for j in 0..5 {
            s[(4, j)] = s[(3, j)];
        }
        assert!(Lu::new(s.as_ref()).is_singular());
    }

    #[test]
    fn nan_is_visible_in_max_abs() {
        let mut m = sample(3, 0.0);
        m[(1, 1)] = Complex64::new(f64::NAN, 0.0);
        assert!(max_abs(&m).is_nan());
        assert!(!all_finite(&m));
    }
}
