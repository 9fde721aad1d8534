//! Brute-force validators, independent of the Hermite closed form.
//!
//! * [`dense_expm`] computes `exp(-i M t)` by Taylor scaling-and-squaring on a
//!   dense complex matrix.
//! * [`sturm_count`] / [`bisect_eigenvalues`] enumerate the spectrum of the
//!   tridiagonal coupling matrix from its LDL^T pivots.
//!
//! These are correctness anchors, not fast paths. The spectral solver uses
//! [`sturm_count`] only to isolate each root before polishing it on the
//! Hermite recurrence.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::CouplingMatrix;

/// Largest lattice accepted by [`dense_expm`].
pub const ORACLE_SIZE_CAP: usize = 64;

/// Row-major dense complex square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseComplexMatrix {
    size: usize,
    data: Vec<Complex64>,
}

impl DenseComplexMatrix {
    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            data: vec![Complex64::new(0.0, 0.0); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.data[i * size + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from row-major entries; `data.len()` must be `size * size`.
    pub fn from_row_major(size: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != size * size {
            return Err(Error::LengthMismatch {
                expected: size * size,
                found: data.len(),
            });
        }
        Ok(Self { size, data })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.size + col]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size, "matmul size mismatch");
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> Self {
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        let n = self.size;
        (0..n)
            .map(|j| (0..n).map(|i| self.data[i * n + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.size, other.size, "size mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U^dagger U - I|` entrywise.
    pub fn unitarity_error(&self) -> f64 {
        self.conj_transpose()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.size))
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// `exp(-i M t)` by scaling-and-squaring with a degree-18 Taylor polynomial.
///
/// The exponent is scaled by `2^-s` until its 1-norm is at most 0.5, where
/// the truncation error of the series is below `1e-21`.
pub fn dense_expm(m: &CouplingMatrix, t: f64) -> Result<DenseComplexMatrix> {
    const ORDER: usize = 18;
    let n = m.size();
    if n > ORACLE_SIZE_CAP {
        return Err(Error::OracleSizeCap {
            size: n,
            cap: ORACLE_SIZE_CAP,
        });
    }

    // A = -i M t
    let mut a = DenseComplexMatrix::zeros(n);
    for (j, &c) in m.off_diagonal().iter().enumerate() {
        let z = Complex64::new(0.0, -c * t);
        a.data[j * n + j + 1] = z;
        a.data[(j + 1) * n + j] = z;
    }

    let norm = a.norm_1();
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    for z in a.data.iter_mut() {
        *z *= scale;
    }

    // Horner: I + A(I + A/2(I + A/3(...)))
    let id = DenseComplexMatrix::identity(n);
    let mut acc = id.clone();
    for k in (1..=ORDER).rev() {
        let mut term = a.matmul(&acc);
        let inv = 1.0 / k as f64;
        for z in term.data.iter_mut() {
            *z *= inv;
        }
        for (z, e) in term.data.iter_mut().zip(&id.data) {
            *z += e;
        }
        acc = term;
    }

    for _ in 0..squarings {
        acc = acc.matmul(&acc);
    }
    Ok(acc)
}

/// Gershgorin bound on the spectral radius of the coupling matrix.
pub fn gershgorin_radius(m: &CouplingMatrix) -> f64 {
    let e = m.off_diagonal();
    (0..m.size())
        .map(|i| {
            let left = if i > 0 { e[i - 1] } else { 0.0 };
            let right = e.get(i).copied().unwrap_or(0.0);
            left.abs() + right.abs()
        })
        .fold(0.0, f64::max)
}

/// Number of eigenvalues of `M` strictly below `x`.
///
/// Counts negative pivots of the LDL^T factorization of `M - x I`. A pivot
/// that hits exactly zero is replaced by `+pivmin`, which is the same as
/// evaluating at `x - 0`, so an eigenvalue equal to `x` is not counted.
pub fn sturm_count(m: &CouplingMatrix, x: f64) -> usize {
    let e = m.off_diagonal();
    let max_e2 = e.iter().map(|v| v * v).fold(1.0, f64::max);
    let pivmin = f64::MIN_POSITIVE * max_e2;

    let mut count = 0;
    let mut d = -x;
    for i in 0..m.size() {
        if i > 0 {
            d = -x - e[i - 1] * e[i - 1] / d;
        }
        if d.abs() < pivmin {
            d = if d < 0.0 { -pivmin } else { pivmin };
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Bisection bracket `[lo, hi]` isolating eigenvalue `index` (0-based,
/// ascending) to width at most `width`.
pub(crate) fn bisect_eigenvalue(m: &CouplingMatrix, index: usize, width: f64) -> (f64, f64) {
    let r = gershgorin_radius(m);
    let mut lo = -r - 1.0;
    let mut hi = r + 1.0;
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(m, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// All eigenvalues by Sturm bisection to absolute tolerance `1e-12`,
/// ascending.
pub fn bisect_eigenvalues(m: &CouplingMatrix) -> Vec<f64> {
    bisect_eigenvalues_with_tol(m, 1e-12)
}

pub fn bisect_eigenvalues_with_tol(m: &CouplingMatrix, tol: f64) -> Vec<f64> {
    (0..m.size())
        .map(|j| {
            let (lo, hi) = bisect_eigenvalue(m, j, tol);
            0.5 * (lo + hi)
        })
        .collect()
}
