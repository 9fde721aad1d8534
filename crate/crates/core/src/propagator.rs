//! Time-evolution matrix `U(t)` rebuilt from the spectral decomposition.
//!
//! `U[j][k](t) = sum_l exp(-i lambda_l t) v[l][j] v[l][k]`, so `a_j(t) =
//! sum_k U[j][k] a_k(0)` for the mode operators. `U` is symmetric because `M`
//! is real symmetric.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracle::DenseComplexMatrix;
use crate::spectral::SpectralDecomposition;

#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    time: f64,
    size: usize,
    matrix: Vec<Complex64>,
}

impl Propagator {
    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `U[j][k]`.
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.matrix[j * self.size + k]
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        &self.matrix[j * self.size..(j + 1) * self.size]
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.size {
            return Err(Error::IndexOutOfRange {
                index,
                size: self.size,
            });
        }
        Ok(())
    }

    pub fn to_dense(&self) -> DenseComplexMatrix {
        DenseComplexMatrix::from_row_major(self.size, self.matrix.clone())
            .expect("propagator storage is square")
    }

    pub fn unitarity_error(&self) -> f64 {
        self.to_dense().unitarity_error()
    }

    /// `max |U[j][k] - U[k][j]|`.
    pub fn symmetry_error(&self) -> f64 {
        let n = self.size;
        let mut worst = 0.0f64;
        for j in 0..n {
            for k in j + 1..n {
                worst = worst.max((self.get(j, k) - self.get(k, j)).norm());
            }
        }
        worst
    }

    /// Largest deviation of a column 2-norm from one.
    pub fn column_norm_error(&self) -> f64 {
        let n = self.size;
        (0..n)
            .map(|k| {
                ((0..n)
                    .map(|j| self.get(j, k).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
                    - 1.0)
                    .abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Sample times for batch evaluation.
///
/// Either a uniform grid including both endpoints or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    /// `samples` uniformly spaced points from `t_start` to `t_end` inclusive.
    pub fn uniform(t_start: f64, t_end: f64, samples: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) {
            return Err(Error::InvalidGrid("endpoints must be finite".into()));
        }
        if t_start < 0.0 {
            return Err(Error::InvalidGrid(format!(
                "t_start = {t_start} is negative"
            )));
        }
        if t_end <= t_start {
            return Err(Error::InvalidGrid(format!(
                "t_end = {t_end} must exceed t_start = {t_start}"
            )));
        }
        if samples < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 samples, got {samples}"
            )));
        }
        let dt = (t_end - t_start) / (samples - 1) as f64;
        let mut times: Vec<f64> = (0..samples).map(|i| t_start + i as f64 * dt).collect();
        times[samples - 1] = t_end;
        Ok(Self { times })
    }

    /// Explicit, strictly increasing list of finite times.
    pub fn explicit(times: Vec<f64>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidGrid("no times given".into()));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("times must be finite".into()));
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid(
                "times must be strictly increasing".into(),
            ));
        }
        Ok(Self { times })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn phases(decomp: &SpectralDecomposition, t: f64) -> Vec<Complex64> {
    decomp
        .eigenvalues()
        .iter()
        .map(|&l| Complex64::from_polar(1.0, -l * t))
        .collect()
}

/// Single entry `U[j][k](t)` in `O(N)`. Indices are not checked.
///
/// `U(0)` is returned as the exact identity rather than `V^T V`.
pub fn amplitude(decomp: &SpectralDecomposition, j: usize, k: usize, t: f64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(if j == k { 1.0 } else { 0.0 }, 0.0);
    }
    decomp
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(l, &lambda)| {
            Complex64::from_polar(decomp.component(l, j) * decomp.component(l, k), -lambda * t)
        })
        .sum()
}

pub fn propagator_at(decomp: &SpectralDecomposition, t: f64) -> Propagator {
    let n = decomp.size();
    if t == 0.0 {
        let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
        for j in 0..n {
            matrix[j * n + j] = Complex64::new(1.0, 0.0);
        }
        return Propagator {
            time: t,
            size: n,
            matrix,
        };
    }
    let ph = phases(decomp, t);
    let mut matrix = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in j..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, p) in ph.iter().enumerate() {
                acc += p * (decomp.component(l, j) * decomp.component(l, k));
            }
            matrix[j * n + k] = acc;
            matrix[k * n + j] = acc;
        }
    }
    Propagator {
        time: t,
        size: n,
        matrix,
    }
}

/// Lazily evaluated propagators at each grid time, in grid order.
///
/// Matrices are produced in chunks (in parallel when the execution mode
/// allows) so at most one chunk is alive at a time.
pub struct PropagatorSeries<'a> {
    decomp: &'a SpectralDecomposition,
    times: &'a [f64],
    exec: Execution,
    chunk: usize,
    next: usize,
    buffer: std::vec::IntoIter<Propagator>,
}

impl Iterator for PropagatorSeries<'_> {
    type Item = Propagator;

    fn next(&mut self) -> Option<Propagator> {
        if let Some(p) = self.buffer.next() {
            return Some(p);
        }
        if self.next >= self.times.len() {
            return None;
        }
        let end = (self.next + self.chunk).min(self.times.len());
        let slice = &self.times[self.next..end];
        let decomp = self.decomp;
        self.buffer = self
            .exec
            .map_slice(slice, |&t| propagator_at(decomp, t))
            .into_iter();
        self.next = end;
        self.buffer.next()
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.times.len() - self.next + self.buffer.len();
        (left, Some(left))
    }
}

pub fn propagator_series<'a>(
    decomp: &'a SpectralDecomposition,
    grid: &'a TimeGrid,
) -> PropagatorSeries<'a> {
    propagator_series_with(decomp, grid, Execution::default())
}

pub fn propagator_series_with<'a>(
    decomp: &'a SpectralDecomposition,
    grid: &'a TimeGrid,
    exec: Execution,
) -> PropagatorSeries<'a> {
    // keep a chunk around 32 MB of complex entries
    let per = (decomp.size() * decomp.size()).max(1);
    let chunk = (2_000_000 / per).clamp(1, 256);
    PropagatorSeries {
        decomp,
        times: grid.times(),
        exec,
        chunk,
        next: 0,
        buffer: Vec::new().into_iter(),
    }
}

/// Collective-mode amplitudes `b = V a`.
pub fn collective_modes(decomp: &SpectralDecomposition, a: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = decomp.size();
    if a.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: a.len(),
        });
    }
    Ok((0..n)
        .map(|j| {
            decomp
                .eigenvector(j)
                .iter()
                .zip(a)
                .map(|(v, x)| x * *v)
                .sum()
        })
        .collect())
}

/// `V^T b`: back from collective modes to waveguide amplitudes.
pub fn from_collective_modes(
    decomp: &SpectralDecomposition,
    b: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = decomp.size();
    if b.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: b.len(),
        });
    }
    Ok((0..n)
        .map(|k| (0..n).map(|j| b[j] * decomp.component(j, k)).sum())
        .collect())
}

/// Evolve waveguide amplitudes through the diagonal frame:
/// `V^T exp(-i Lambda t) V a`.
pub fn evolve_amplitudes(
    decomp: &SpectralDecomposition,
    a: &[Complex64],
    t: f64,
) -> Result<Vec<Complex64>> {
    let mut b = collective_modes(decomp, a)?;
    for (x, p) in b.iter_mut().zip(phases(decomp, t)) {
        *x *= p;
    }
    from_collective_modes(decomp, &b)
}
