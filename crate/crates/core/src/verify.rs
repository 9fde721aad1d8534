//! The oracle suite as a pass/fail report: closed-form spectrum against Sturm
//! bisection, spectral propagator against the dense matrix exponential,
//! unitarity and two-photon sum rules, for every lattice size up to a limit.

use std::fmt;

use crate::config::Tolerances;
use crate::error::Result;
use crate::exec::Execution;
use crate::oracle::{bisect_eigenvalues_with_tol, dense_expm, ORACLE_SIZE_CAP};
use crate::propagator::propagator_at;
use crate::spectral::{characteristic_residual, eigen_decompose_with, CouplingMatrix, LatticeSpec};
use crate::states::{correlation_noon, correlation_product, mean_photon_fock};

/// Times at which each propagator check is sampled.
pub const CHECK_TIMES: [f64; 4] = [0.0, 0.75, 3.1, 9.4];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub size: usize,
    /// Worst observed deviation.
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} N={} {}: worst {:.3e} (threshold {:.3e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.size,
            self.name,
            self.value,
            self.threshold
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &'static str, size: usize, value: f64, threshold: f64) {
        let passed = value <= threshold && value.is_finite();
        self.checks.push(CheckOutcome {
            name,
            size,
            value,
            threshold,
            passed,
        });
    }
}

/// Run every check for `N = 1..=n_max`. The dense exponential comparison is
/// skipped above the oracle size cap.
pub fn run_verification(n_max: usize, tol: &Tolerances, exec: Execution) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for n in 1..=n_max {
        let spec = LatticeSpec::new(n)?;
        let m = CouplingMatrix::new(&spec);
        let decomp = eigen_decompose_with(&spec, tol, exec)?;

        let oracle = bisect_eigenvalues_with_tol(&m, tol.bisection);
        let spectrum_gap = decomp
            .eigenvalues()
            .iter()
            .zip(&oracle)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        report.push(
            "spectrum vs Sturm bisection",
            n,
            spectrum_gap,
            tol.eigen_agreement,
        );

        let residual = decomp
            .eigenvalues()
            .iter()
            .map(|&l| characteristic_residual(l, n))
            .fold(0.0, f64::max);
        report.push(
            "Hermite characteristic residual",
            n,
            residual,
            tol.eigen_agreement,
        );

        report.push(
            "eigenvector orthonormality",
            n,
            decomp.orthonormality_error(),
            tol.eigen_agreement,
        );

        let mut unitarity = 0.0f64;
        let mut expm_gap = 0.0f64;
        let mut fock_sum = 0.0f64;
        let mut product_sum = 0.0f64;
        let mut noon_sum = 0.0f64;
        for &t in &CHECK_TIMES {
            let u = propagator_at(&decomp, t);
            unitarity = unitarity.max(u.unitarity_error());
            if n <= ORACLE_SIZE_CAP {
                expm_gap = expm_gap.max(u.to_dense().max_abs_diff(&dense_expm(&m, t)?));
            }
            let total: f64 = mean_photon_fock(&u, 0, 1)?.iter().sum();
            fock_sum = fock_sum.max((total - 1.0).abs());
            if n >= 2 {
                product_sum =
                    product_sum.max((correlation_product(&u, 0, n - 1)?.total() - 2.0).abs());
                noon_sum =
                    noon_sum.max((correlation_noon(&u, 0, n - 1, 2, 0.4)?.total() - 2.0).abs());
            }
        }
        report.push("propagator unitarity", n, unitarity, tol.unitarity);
        if n <= ORACLE_SIZE_CAP {
            report.push("propagator vs dense expm", n, expm_gap, tol.expm_agreement);
        }
        report.push("single-photon conservation", n, fock_sum, tol.sum_rule);
        if n >= 2 {
            report.push("product correlation sum rule", n, product_sum, tol.sum_rule);
            report.push("NOON correlation sum rule", n, noon_sum, tol.sum_rule);
        }
    }
    Ok(report)
}
