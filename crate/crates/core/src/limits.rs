//! Closed-form intensities of the semi-infinite Glauber-Fock lattice and
//! comparison against a finite lattice.
//!
//! For a photon entering waveguide `k` of the semi-infinite lattice, the
//! intensity at waveguide `k + s` is
//! `e^{-t^2} t^{2s} k!/(k+s)! [L_k^{(s)}(t^2)]^2` and at `k - s` it is
//! `e^{-t^2} t^{2s} (k-s)!/k! [L_{k-s}^{(s)}(t^2)]^2`. From `k = 0` this
//! reduces to the Poisson profile `e^{-t^2} t^{2q} / q!`.
//!
//! Prefactors are assembled in log space so that `q` in the hundreds does not
//! overflow `t^{2q}` or `q!`.

use crate::error::{Error, Result};
use crate::propagator::amplitude;
use crate::specfun::laguerre_eval;
use crate::spectral::SpectralDecomposition;

/// Which side of the input waveguide the output lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Towards waveguide 0: output `k - s`.
    Down,
    /// Away from waveguide 0: output `k + s`.
    Up,
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// `e^{-t^2} t^{2s}` times `exp(ln_ratio)`, safe for `t = 0`.
fn gaussian_power(t: f64, s: usize, ln_ratio: f64) -> f64 {
    let t2 = t * t;
    if s == 0 {
        return (-t2 + ln_ratio).exp();
    }
    if t == 0.0 {
        return 0.0;
    }
    (-t2 + 2.0 * s as f64 * t.abs().ln() + ln_ratio).exp()
}

/// Semi-infinite intensity at waveguide `k -/+ s` for a photon injected at `k`.
pub fn semi_infinite_intensity(k: usize, s: usize, direction: Direction, t: f64) -> Result<f64> {
    let x = t * t;
    match direction {
        Direction::Down => {
            if s > k {
                return Err(Error::OffsetExceedsIndex {
                    offset: s,
                    index: k,
                });
            }
            let lag = laguerre_eval(k - s, s as u32, x);
            let pre = gaussian_power(t, s, ln_factorial(k - s) - ln_factorial(k));
            Ok(pre * lag * lag)
        }
        Direction::Up => {
            let lag = laguerre_eval(k, s as u32, x);
            let pre = gaussian_power(t, s, ln_factorial(k) - ln_factorial(k + s));
            Ok(pre * lag * lag)
        }
    }
}

/// `e^{-t^2} t^{2q} / q!`.
pub fn poisson_intensity(q: usize, t: f64) -> f64 {
    gaussian_power(t, q, -ln_factorial(q))
}

/// Semi-infinite intensity at output `q` for input `p`.
fn semi_infinite_at(p: usize, q: usize, t: f64) -> f64 {
    if p == 0 {
        return poisson_intensity(q, t);
    }
    let r = if q >= p {
        semi_infinite_intensity(p, q - p, Direction::Up, t)
    } else {
        semi_infinite_intensity(p, p - q, Direction::Down, t)
    };
    r.expect("offset is bounded by the input index")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitRecord {
    pub waveguide: usize,
    pub finite: f64,
    pub infinite: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitComparison {
    pub size: usize,
    pub input: usize,
    pub time: f64,
    pub records: Vec<LimitRecord>,
    pub max_abs_diff: f64,
    /// Finite-lattice occupation of the last ten waveguides (or all of them
    /// for smaller lattices).
    pub edge_leakage: f64,
}

/// Number of trailing waveguides summed into [`LimitComparison::edge_leakage`].
pub const EDGE_WINDOW: usize = 10;

/// `|U[q][p](t)|^2` on the finite lattice against the semi-infinite formula
/// for every `q < N`. The input index is not range-checked beyond `p < N`.
pub fn compare_finite_infinite(
    decomp: &SpectralDecomposition,
    p: usize,
    t: f64,
) -> Result<LimitComparison> {
    let n = decomp.size();
    decomp.lattice().check_index(p)?;
    let records: Vec<LimitRecord> = (0..n)
        .map(|q| {
            let finite = amplitude(decomp, q, p, t).norm_sqr();
            let infinite = semi_infinite_at(p, q, t);
            LimitRecord {
                waveguide: q,
                finite,
                infinite,
                abs_diff: (finite - infinite).abs(),
            }
        })
        .collect();
    let max_abs_diff = records.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let edge_leakage = records[n.saturating_sub(EDGE_WINDOW)..]
        .iter()
        .map(|r| r.finite)
        .sum();
    Ok(LimitComparison {
        size: n,
        input: p,
        time: t,
        records,
        max_abs_diff,
        edge_leakage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{eigen_decompose, LatticeSpec};

    fn decomp(n: usize) -> SpectralDecomposition {
        eigen_decompose(&LatticeSpec::new(n).unwrap()).unwrap()
    }

    #[test]
    fn no_evolution_at_zero_time() {
        for k in 0..6 {
            assert_eq!(
                semi_infinite_intensity(k, 0, Direction::Up, 0.0).unwrap(),
                1.0
            );
            assert_eq!(
                semi_infinite_intensity(k, 0, Direction::Down, 0.0).unwrap(),
                1.0
            );
            for s in 1..4 {
                assert_eq!(
                    semi_infinite_intensity(k, s, Direction::Up, 0.0).unwrap(),
                    0.0
                );
                if s <= k {
                    assert_eq!(
                        semi_infinite_intensity(k, s, Direction::Down, 0.0).unwrap(),
                        0.0
                    );
                }
            }
        }
        assert_eq!(
            semi_infinite_intensity(2, 3, Direction::Down, 1.0),
            Err(Error::OffsetExceedsIndex {
                offset: 3,
                index: 2
            })
        );
    }

    #[test]
    fn poisson_values() {
        assert_eq!(poisson_intensity(0, 0.0), 1.0);
        assert!((poisson_intensity(0, 1.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert!((poisson_intensity(0, 1.0) - 0.3678794).abs() < 1e-7);
        for &t in &[0.5, 2.0, 6.0, 10.0] {
            let total: f64 = (0..400).map(|q| poisson_intensity(q, t)).sum();
            assert!((total - 1.0).abs() < 1e-12, "t={t}: {total}");
        }
        assert!(poisson_intensity(250, 14.0).is_finite());
    }

    #[test]
    fn poisson_path_agrees_with_laguerre_path() {
        for s in 0..=60 {
            for i in 0..=20 {
                let t = 0.5 * i as f64;
                let a = poisson_intensity(s, t);
                let b = semi_infinite_intensity(0, s, Direction::Up, t).unwrap();
                assert!((a - b).abs() <= 1e-12, "s={s} t={t}");
            }
        }
    }

    #[test]
    fn semi_infinite_total_is_one() {
        for &(k, t) in &[(3usize, 1.5), (5, 3.0), (8, 2.0)] {
            let down: f64 = (1..=k)
                .map(|s| semi_infinite_intensity(k, s, Direction::Down, t).unwrap())
                .sum();
            let up: f64 = (0..300)
                .map(|s| semi_infinite_intensity(k, s, Direction::Up, t).unwrap())
                .sum();
            assert!(
                (down + up - 1.0).abs() < 1e-10,
                "k={k} t={t}: {}",
                down + up
            );
        }
    }

    #[test]
    fn large_lattice_matches_both_directions() {
        let d = decomp(200);
        for s in 0..=2 {
            let up = semi_infinite_intensity(5, s, Direction::Up, 3.0).unwrap();
            let finite_up = amplitude(&d, 5 + s, 5, 3.0).norm_sqr();
            assert!((up - finite_up).abs() <= 1e-6);
            let down = semi_infinite_intensity(5, s, Direction::Down, 3.0).unwrap();
            let finite_down = amplitude(&d, 5 - s, 5, 3.0).norm_sqr();
            assert!((down - finite_down).abs() <= 1e-6);
        }
    }

    #[test]
    fn comparison_regimes() {
        let d = decomp(200);
        let c = compare_finite_infinite(&d, 0, 3.0).unwrap();
        assert!(c.max_abs_diff <= 1e-6);
        assert_eq!(c.records.len(), 200);
        let c = compare_finite_infinite(&d, 5, 6.0).unwrap();
        assert!(c.max_abs_diff <= 1e-6);
        assert!(c.edge_leakage < 1e-12);

        let small = compare_finite_infinite(&decomp(20), 0, 6.0).unwrap();
        assert!(small.max_abs_diff > 0.05, "{}", small.max_abs_diff);
        assert!(small.edge_leakage > 0.05, "{}", small.edge_leakage);
    }

    #[test]
    fn convergence_in_size() {
        // at t = 3 all three sizes already agree to rounding, so the trend is
        // checked above a 1e-14 noise floor
        let at = |t: f64| -> Vec<f64> {
            [50usize, 100, 200]
                .iter()
                .map(|&n| {
                    compare_finite_infinite(&decomp(n), 0, t)
                        .unwrap()
                        .max_abs_diff
                })
                .collect()
        };
        let d3 = at(3.0);
        assert!(d3[1] <= d3[0] + 1e-14 && d3[2] <= d3[1] + 1e-14, "{d3:?}");
        // at t = 6 the N = 50 lattice is visibly finite
        let d6 = at(6.0);
        assert!(
            d6[0] > 1e-3 && d6[1] < d6[0] && d6[2] <= d6[1] + 1e-14,
            "{d6:?}"
        );
    }
}
