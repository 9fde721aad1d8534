use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lattice size must be at least 1, got {0}")]
    InvalidSize(usize),

    #[error("waveguide index {index} out of range for a lattice of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("expected a vector of length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("amplitudes are not normalized: sum of squared magnitudes is {norm_sq}")]
    Unnormalized { norm_sq: f64 },

    #[error("the two waveguide indices must differ, both are {0}")]
    IndexClash(usize),

    #[error("waveguide index {0} appears more than once in a product state")]
    RepeatedIndex(usize),

    #[error("photon number {photons} is below the minimum {min} for this state")]
    InvalidPhotonNumber { photons: u32, min: u32 },

    #[error(
        "two-photon correlation of a NOON state is only defined for m = 2 photons, got m = {0}"
    )]
    UnsupportedNoonOrder(u32),

    #[error("Newton polishing of eigenvalue {index} did not converge in {iterations} iterations")]
    NotConverged { index: usize, iterations: usize },

    #[error("a lattice of size 1 has no strictly positive eigenvalue")]
    NoPositiveEigenvalue,

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("empty search window ({lo}, {hi}] with {samples} samples")]
    EmptyWindow { lo: f64, hi: f64, samples: usize },

    #[error("oracle limited to size {cap}, got {size}")]
    OracleSizeCap { size: usize, cap: usize },

    #[error("offset {offset} exceeds input index {index} for a downward displacement")]
    OffsetExceedsIndex { offset: usize, index: usize },
}
