//! Numerical tolerances shared by the solver, the observables and the
//! verification suite. Defaults pass for every lattice with `N <= 200` in double
//! precision.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Newton polishing stops once `|step| <= newton_step * (1 + |lambda|)`.
    pub newton_step: f64,
    /// Absolute width at which Sturm bisection stops.
    pub bisection: f64,
    /// Allowed per-eigenvalue gap between the closed form and bisection.
    pub eigen_agreement: f64,
    /// Bound on `max |U^dagger U - I|`.
    pub unitarity: f64,
    /// Allowed entrywise gap between the spectral propagator and `expm`.
    pub expm_agreement: f64,
    /// Allowed deviation of photon totals and correlation sums.
    pub sum_rule: f64,
    /// Allowed deviation of `sum |c|^2` from one for caller-supplied amplitudes.
    pub normalization: f64,
    /// Eigenvalues at or below this are treated as zero.
    pub zero_eigenvalue: f64,
    /// Negative correlation entries down to `-clamp` are rounding noise and
    /// are clamped to zero.
    pub clamp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            newton_step: 1e-14,
            bisection: 1e-12,
            eigen_agreement: 1e-10,
            unitarity: 1e-10,
            expm_agreement: 1e-9,
            sum_rule: 1e-10,
            normalization: 1e-9,
            zero_eigenvalue: 1e-12,
            clamp: 1e-12,
        }
    }
}
