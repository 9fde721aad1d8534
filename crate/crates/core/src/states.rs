//! Input states and observables computed from `U(t)`.
//!
//! All states are unit-normalized. For the NOON state this means the prefactor
//! is `1 / sqrt(2 m!)`, which is what the mean-photon and two-photon
//! correlation formulas below assume.

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::propagator::{amplitude, Propagator, TimeGrid};
use crate::spectral::{min_positive_eigenvalue, SpectralDecomposition};

#[derive(Debug, Clone, PartialEq)]
pub enum InputState {
    /// `m` photons in waveguide `waveguide`.
    FockAt { waveguide: usize, photons: u32 },
    /// One photon spread over the lattice with amplitudes `c_j`.
    SinglePhotonSuperposition { amplitudes: Vec<Complex64> },
    /// One photon in each of two distinct waveguides.
    TwoPhotonProduct { j: usize, k: usize },
    /// `(|m, 0> + exp(i m phi) |0, m>) / sqrt 2` on waveguides `j`, `k`.
    Noon {
        j: usize,
        k: usize,
        photons: u32,
        phase: f64,
    },
}

impl InputState {
    /// Photon-number beam splitter state `alpha |1_j> + beta |1_k>`.
    pub fn beam_splitter(n: usize, j: usize, k: usize, alpha: Complex64, beta: Complex64) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n];
        if j < n {
            amplitudes[j] += alpha;
        }
        if k < n {
            amplitudes[k] += beta;
        }
        InputState::SinglePhotonSuperposition { amplitudes }
    }

    pub fn total_photons(&self) -> u32 {
        match self {
            InputState::FockAt { photons, .. } => *photons,
            InputState::SinglePhotonSuperposition { .. } => 1,
            InputState::TwoPhotonProduct { .. } => 2,
            InputState::Noon { photons, .. } => *photons,
        }
    }

    pub fn validate(&self, size: usize, tol: &Tolerances) -> Result<()> {
        let check = |index: usize| {
            if index >= size {
                Err(Error::IndexOutOfRange { index, size })
            } else {
                Ok(())
            }
        };
        match self {
            InputState::FockAt { waveguide, photons } => {
                check(*waveguide)?;
                if *photons < 1 {
                    return Err(Error::InvalidPhotonNumber {
                        photons: *photons,
                        min: 1,
                    });
                }
            }
            InputState::SinglePhotonSuperposition { amplitudes } => {
                if amplitudes.len() != size {
                    return Err(Error::LengthMismatch {
                        expected: size,
                        found: amplitudes.len(),
                    });
                }
                check_normalized(amplitudes.iter().map(|c| c.norm_sqr()).sum(), tol)?;
            }
            InputState::TwoPhotonProduct { j, k } => {
                check(*j)?;
                check(*k)?;
                if j == k {
                    return Err(Error::IndexClash(*j));
                }
            }
            InputState::Noon {
                j,
                k,
                photons,
                phase: _,
            } => {
                check(*j)?;
                check(*k)?;
                if j == k {
                    return Err(Error::IndexClash(*j));
                }
                if *photons < 2 {
                    return Err(Error::InvalidPhotonNumber {
                        photons: *photons,
                        min: 2,
                    });
                }
            }
        }
        Ok(())
    }
}

fn check_normalized(norm_sq: f64, tol: &Tolerances) -> Result<()> {
    if (norm_sq - 1.0).abs() > tol.normalization || !norm_sq.is_finite() {
        return Err(Error::Unnormalized { norm_sq });
    }
    Ok(())
}

/// `m |U[p][q]|^2` for every output waveguide `q`.
pub fn mean_photon_fock(u: &Propagator, p: usize, m: u32) -> Result<Vec<f64>> {
    u.check_index(p)?;
    if m < 1 {
        return Err(Error::InvalidPhotonNumber { photons: m, min: 1 });
    }
    let m = m as f64;
    Ok(u.row(p).iter().map(|z| m * z.norm_sqr()).collect())
}

/// `|sum_j c_j U[j][q]|^2`.
pub fn mean_photon_superposition(u: &Propagator, c: &[Complex64]) -> Result<Vec<f64>> {
    mean_photon_superposition_with(u, c, &Tolerances::default())
}

pub fn mean_photon_superposition_with(
    u: &Propagator,
    c: &[Complex64],
    tol: &Tolerances,
) -> Result<Vec<f64>> {
    let n = u.size();
    if c.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: c.len(),
        });
    }
    check_normalized(c.iter().map(|x| x.norm_sqr()).sum(), tol)?;
    Ok((0..n)
        .map(|q| {
            c.iter()
                .enumerate()
                .filter(|(_, cj)| cj.norm_sqr() > 0.0)
                .map(|(j, cj)| cj * u.get(j, q))
                .sum::<Complex64>()
                .norm_sqr()
        })
        .collect())
}

/// `sum_j |U[x_j][q]|^2` for one photon in each listed waveguide.
pub fn mean_photon_product(u: &Propagator, x: &[usize]) -> Result<Vec<f64>> {
    for (i, &a) in x.iter().enumerate() {
        u.check_index(a)?;
        if x[..i].contains(&a) {
            return Err(Error::RepeatedIndex(a));
        }
    }
    let n = u.size();
    Ok((0..n)
        .map(|q| x.iter().map(|&j| u.get(j, q).norm_sqr()).sum())
        .collect())
}

/// `(m / 2) (|U[j][q]|^2 + |U[k][q]|^2)` for a unit-norm NOON state.
pub fn mean_photon_noon(u: &Propagator, j: usize, k: usize, m: u32) -> Result<Vec<f64>> {
    u.check_index(j)?;
    u.check_index(k)?;
    if j == k {
        return Err(Error::IndexClash(j));
    }
    if m < 2 {
        return Err(Error::InvalidPhotonNumber { photons: m, min: 2 });
    }
    let half = m as f64 / 2.0;
    Ok((0..u.size())
        .map(|q| half * (u.get(j, q).norm_sqr() + u.get(k, q).norm_sqr()))
        .collect())
}

/// Mean photon number per waveguide for any input state.
pub fn mean_photon(u: &Propagator, state: &InputState) -> Result<Vec<f64>> {
    match state {
        InputState::FockAt { waveguide, photons } => mean_photon_fock(u, *waveguide, *photons),
        InputState::SinglePhotonSuperposition { amplitudes } => {
            mean_photon_superposition(u, amplitudes)
        }
        InputState::TwoPhotonProduct { j, k } => mean_photon_product(u, &[*j, *k]),
        InputState::Noon { j, k, photons, .. } => mean_photon_noon(u, *j, *k, *photons),
    }
}

fn check_amplitudes(alpha: Complex64, beta: Complex64, tol: &Tolerances) -> Result<()> {
    check_normalized(alpha.norm_sqr() + beta.norm_sqr(), tol)
}

/// Fidelity of `alpha |1_j> + beta |1_k>` with its evolved self,
/// `| |alpha|^2 U_jj + |beta|^2 U_kk + 2 Re(alpha* beta) U_jk |^2`,
/// sampled on `grid`.
pub fn fidelity_two_mode(
    decomp: &SpectralDecomposition,
    grid: &TimeGrid,
    j: usize,
    k: usize,
    alpha: Complex64,
    beta: Complex64,
) -> Result<Vec<f64>> {
    fidelity_two_mode_with(
        decomp,
        grid,
        j,
        k,
        alpha,
        beta,
        &Tolerances::default(),
        Execution::default(),
    )
}

#[allow(clippy::too_many_arguments)]
pub fn fidelity_two_mode_with(
    decomp: &SpectralDecomposition,
    grid: &TimeGrid,
    j: usize,
    k: usize,
    alpha: Complex64,
    beta: Complex64,
    tol: &Tolerances,
    exec: Execution,
) -> Result<Vec<f64>> {
    let lattice = decomp.lattice();
    lattice.check_index(j)?;
    lattice.check_index(k)?;
    if j == k {
        return Err(Error::IndexClash(j));
    }
    check_amplitudes(alpha, beta, tol)?;
    let (a2, b2) = (alpha.norm_sqr(), beta.norm_sqr());
    let cross = 2.0 * (alpha.conj() * beta).re;
    Ok(exec.map_slice(grid.times(), |&t| {
        let overlap = amplitude(decomp, j, j, t) * a2
            + amplitude(decomp, k, k, t) * b2
            + amplitude(decomp, j, k, t) * cross;
        overlap.norm_sqr()
    }))
}

/// Two-photon coincidence map `Gamma[p][q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMap {
    size: usize,
    entries: Vec<f64>,
    clamped: usize,
}

impl CorrelationMap {
    fn from_fn(size: usize, tol: &Tolerances, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; size * size];
        let mut clamped = 0;
        for p in 0..size {
            for q in p..size {
                let mut g = f(p, q);
                if g < 0.0 && g >= -tol.clamp {
                    g = 0.0;
                    clamped += 1;
                }
                entries[p * size + q] = g;
                entries[q * size + p] = g;
            }
        }
        Self {
            size,
            entries,
            clamped,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, p: usize, q: usize) -> f64 {
        self.entries[p * self.size + q]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Number of slightly negative entries that were rounded up to zero.
    pub fn clamped(&self) -> usize {
        self.clamped
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn symmetry_error(&self) -> f64 {
        let n = self.size;
        let mut worst = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                worst = worst.max((self.get(p, q) - self.get(q, p)).abs());
            }
        }
        worst
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Cosine similarity of the two maps flattened to vectors.
    pub fn cosine_similarity(&self, other: &Self) -> f64 {
        assert_eq!(self.size, other.size, "correlation maps differ in size");
        let dot: f64 = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum();
        let na = self.entries.iter().map(|a| a * a).sum::<f64>().sqrt();
        let nb = other.entries.iter().map(|b| b * b).sum::<f64>().sqrt();
        dot / (na * nb)
    }
}

/// `Gamma[p][q] = |U[p][j] U[q][k] + U[p][k] U[q][j]|^2` for `|1_j 1_k>`.
pub fn correlation_product(u: &Propagator, j: usize, k: usize) -> Result<CorrelationMap> {
    u.check_index(j)?;
    u.check_index(k)?;
    if j == k {
        return Err(Error::IndexClash(j));
    }
    Ok(CorrelationMap::from_fn(
        u.size(),
        &Tolerances::default(),
        |p, q| (u.get(p, j) * u.get(q, k) + u.get(p, k) * u.get(q, j)).norm_sqr(),
    ))
}

/// Two-photon NOON correlation
/// `|U_pj U_qj|^2 + |U_pk U_qk|^2 + 2 Re(e^{i m phi} U*_pj U*_qj U_pk U_qk)`.
/// Only `m = 2` is supported: the formula is a two-photon result.
pub fn correlation_noon(
    u: &Propagator,
    j: usize,
    k: usize,
    m: u32,
    phi: f64,
) -> Result<CorrelationMap> {
    if m != 2 {
        return Err(Error::UnsupportedNoonOrder(m));
    }
    u.check_index(j)?;
    u.check_index(k)?;
    if j == k {
        return Err(Error::IndexClash(j));
    }
    let rot = Complex64::from_polar(1.0, m as f64 * phi);
    Ok(CorrelationMap::from_fn(
        u.size(),
        &Tolerances::default(),
        |p, q| {
            let a = u.get(p, j) * u.get(q, j);
            let b = u.get(p, k) * u.get(q, k);
            a.norm_sqr() + b.norm_sqr() + 2.0 * (rot * a.conj() * b).re
        },
    ))
}

/// Correlation map for a two-photon input state.
pub fn correlation(u: &Propagator, state: &InputState) -> Result<CorrelationMap> {
    match state {
        InputState::TwoPhotonProduct { j, k } => correlation_product(u, *j, *k),
        InputState::Noon {
            j,
            k,
            photons,
            phase,
        } => correlation_noon(u, *j, *k, *photons, *phase),
        InputState::FockAt { photons, .. } => Err(Error::UnsupportedNoonOrder(*photons)),
        InputState::SinglePhotonSuperposition { .. } => {
            Err(Error::InvalidPhotonNumber { photons: 1, min: 2 })
        }
    }
}

/// `pi / lambda_min`, the time of the first partial recovery.
pub fn revival_time_estimate(decomp: &SpectralDecomposition) -> Result<f64> {
    Ok(std::f64::consts::PI / min_positive_eigenvalue(decomp)?)
}

/// `|U[j][j](t)|^2`, the probability of finding a photon back where it started.
pub fn return_probability(decomp: &SpectralDecomposition, j: usize, t: f64) -> f64 {
    amplitude(decomp, j, j, t).norm_sqr()
}

/// Grid maximum of `|U[j][j](t)|^2` over `(t_lo, t_hi]`.
///
/// The grid is `t_lo + i (t_hi - t_lo) / samples` for `i = 1..=samples`, so
/// resolution is `(t_hi - t_lo) / samples`. Earliest time wins ties.
pub fn revival_search(
    decomp: &SpectralDecomposition,
    j: usize,
    t_lo: f64,
    t_hi: f64,
    samples: usize,
) -> Result<(f64, f64)> {
    revival_search_with(decomp, j, t_lo, t_hi, samples, Execution::default())
}

pub fn revival_search_with(
    decomp: &SpectralDecomposition,
    j: usize,
    t_lo: f64,
    t_hi: f64,
    samples: usize,
    exec: Execution,
) -> Result<(f64, f64)> {
    decomp.lattice().check_index(j)?;
    if !(t_lo > 0.0 && t_hi > t_lo && t_hi.is_finite()) || samples < 2 {
        return Err(Error::EmptyWindow {
            lo: t_lo,
            hi: t_hi,
            samples,
        });
    }
    let dt = (t_hi - t_lo) / samples as f64;
    let values = exec.map_range(samples, |i| {
        let t = if i + 1 == samples {
            t_hi
        } else {
            t_lo + (i + 1) as f64 * dt
        };
        (t, return_probability(decomp, j, t))
    });
    Ok(values
        .into_iter()
        .fold((f64::NAN, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        }))
}
