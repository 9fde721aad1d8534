//! Coupling matrix of the Glauber-Fock lattice and its closed-form spectral
//! decomposition.
//!
//! `M` is the real symmetric tridiagonal matrix with zero diagonal and
//! `M[j][j+1] = M[j+1][j] = sqrt(j + 1)`. Its characteristic polynomial is
//! proportional to `H_N(lambda / sqrt 2)` and the eigenvector for `lambda_j`
//! is the normalized orthonormal Hermite sequence `u_k(lambda_j)`, `k < N`.
//!
//! Roots are isolated by Sturm bisection (complete by construction) and then
//! polished by safeguarded Newton on the Hermite recurrence, using
//! `d u_N / d lambda = sqrt(N) u_{N-1}`.

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::oracle;
use crate::specfun::{hermite_orthonormal_seq, orthonormal_tail};

/// A lattice of `size` waveguides, couplings in units of `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeSpec {
    size: usize,
}

impl LatticeSpec {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidSize(size));
        }
        Ok(Self { size })
    }

    pub fn size(&self) -> usize {
        self.size
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
}

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    size: usize,
    off_diagonal: Vec<f64>,
}

impl CouplingMatrix {
    pub fn new(spec: &LatticeSpec) -> Self {
        let off_diagonal = (0..spec.size() - 1)
            .map(|j| ((j + 1) as f64).sqrt())
            .collect();
        Self {
            size: spec.size(),
            off_diagonal,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry `j` couples waveguides `j` and `j + 1`.
    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    /// `(M v)` for a real vector.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.size;
        let e = &self.off_diagonal;
        (0..n)
            .map(|i| {
                let mut acc = 0.0;
                if i > 0 {
                    acc += e[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += e[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }
}

pub fn coupling_matrix(spec: &LatticeSpec) -> CouplingMatrix {
    CouplingMatrix::new(spec)
}

/// Ascending eigenvalues and the matching unit eigenvectors, stored as rows.
///
/// Row `j` is the eigenvector of `lambda_j` with components `v[j][k]`,
/// `k` the waveguide index, and `v[j][0] > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    size: usize,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, j: usize) -> &[f64] {
        &self.eigenvectors[j * self.size..(j + 1) * self.size]
    }

    /// `v[j][k]`.
    pub fn component(&self, j: usize, k: usize) -> f64 {
        self.eigenvectors[j * self.size + k]
    }

    pub fn lattice(&self) -> LatticeSpec {
        LatticeSpec { size: self.size }
    }

    /// `max |V V^T - I|` entrywise.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.size;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = self
                    .eigenvector(a)
                    .iter()
                    .zip(self.eigenvector(b))
                    .map(|(x, y)| x * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `max_j ||M v_j - lambda_j v_j||_inf`.
    pub fn residual(&self) -> f64 {
        let m = CouplingMatrix::new(&self.lattice());
        (0..self.size)
            .map(|j| {
                let v = self.eigenvector(j);
                let lambda = self.eigenvalues[j];
                m.apply(v)
                    .iter()
                    .zip(v)
                    .map(|(mv, x)| (mv - lambda * x).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// `|u_N(lambda)| / max_{k <= N} |u_k(lambda)|`: how far `lambda` is from a
/// zero of `H_N(lambda / sqrt 2)`, relative to the size of the recurrence.
pub fn characteristic_residual(lambda: f64, n: usize) -> f64 {
    let seq = hermite_orthonormal_seq(lambda, n + 1);
    let top = seq.iter().map(|v| v.exponent2()).max().unwrap_or(0);
    let max = seq
        .iter()
        .map(|v| v.to_f64_scaled(top).abs())
        .fold(0.0, f64::max);
    seq[n].to_f64_scaled(top).abs() / max
}

/// Closed-form decomposition with default tolerances and execution mode.
pub fn eigen_decompose(spec: &LatticeSpec) -> Result<SpectralDecomposition> {
    eigen_decompose_with(spec, &Tolerances::default(), Execution::default())
}

pub fn eigen_decompose_with(
    spec: &LatticeSpec,
    tol: &Tolerances,
    exec: Execution,
) -> Result<SpectralDecomposition> {
    let n = spec.size();
    let m = CouplingMatrix::new(spec);

    let eigenvalues = exec.try_map_range(n, |j| polished_root(&m, j, tol))?;
    let rows = exec.map_range(n, |j| normalized_eigenvector(eigenvalues[j], n));

    Ok(SpectralDecomposition {
        size: n,
        eigenvalues,
        eigenvectors: rows.concat(),
    })
}

const ISOLATION_WIDTH: f64 = 1e-6;
const MAX_NEWTON: usize = 50;

fn polished_root(m: &CouplingMatrix, index: usize, tol: &Tolerances) -> Result<f64> {
    let n = m.size();
    if n == 1 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = oracle::bisect_eigenvalue(m, index, ISOLATION_WIDTH);
    let f_lo = orthonormal_tail(lo, n).1;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if orthonormal_tail(hi, n).1 == 0.0 {
        return Ok(hi);
    }
    let lo_positive = f_lo > 0.0;

    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON {
        let (prev, cur) = orthonormal_tail(x, n);
        if cur == 0.0 {
            return Ok(x);
        }
        // keep the sign-change bracket up to date
        if (cur > 0.0) == lo_positive {
            lo = x;
        } else {
            hi = x;
        }
        let step = cur / ((n as f64).sqrt() * prev);
        let next = x - step;
        if step.abs() <= tol.newton_step * (1.0 + x.abs()) {
            return Ok(if next > lo && next < hi { next } else { x });
        }
        x = if step.is_finite() && next > lo && next < hi {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NotConverged {
        index,
        iterations: MAX_NEWTON,
    })
}

fn normalized_eigenvector(lambda: f64, n: usize) -> Vec<f64> {
    let seq = hermite_orthonormal_seq(lambda, n);
    let top = seq.iter().map(|v| v.exponent2()).max().unwrap_or(0);
    let mut v: Vec<f64> = seq.iter().map(|u| u.to_f64_scaled(top)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
    v
}

/// Smallest strictly positive eigenvalue. For even `N` this is
/// `lambda_{N/2}`, for odd `N` it is `lambda_{(N+1)/2}`.
pub fn min_positive_eigenvalue(decomp: &SpectralDecomposition) -> Result<f64> {
    min_positive_eigenvalue_with(decomp, Tolerances::default().zero_eigenvalue)
}

pub fn min_positive_eigenvalue_with(decomp: &SpectralDecomposition, zero: f64) -> Result<f64> {
    decomp
        .eigenvalues()
        .iter()
        .copied()
        .filter(|&l| l > zero)
        .reduce(f64::min)
        .ok_or(Error::NoPositiveEigenvalue)
}

/// `w_l = v[l][j]^2`: the weight of eigenmode `l` at waveguide `j`.
pub fn spectral_weights(decomp: &SpectralDecomposition, j: usize) -> Result<Vec<f64>> {
    decomp.lattice().check_index(j)?;
    Ok((0..decomp.size())
        .map(|l| decomp.component(l, j).powi(2))
        .collect())
}
