//! `--input` descriptors.
//!
//! ```text
//! fock:p:m            m photons in waveguide p
//! superpos:j:k:alpha  alpha |1_j> + sqrt(1 - alpha^2) |1_k>, real amplitudes
//! product:j:k         |1_j 1_k>
//! noon:j:k:phi[:m]    (|m,0> + e^{i m phi} |0,m>) / sqrt 2, m defaults to 2
//! ```

use std::fmt;
use std::str::FromStr;

use glauber_fock::{InputState, Tolerances};
use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub enum InputDescriptor {
    Fock {
        p: usize,
        m: u32,
    },
    Superpos {
        j: usize,
        k: usize,
        alpha: f64,
    },
    Product {
        j: usize,
        k: usize,
    },
    Noon {
        j: usize,
        k: usize,
        phi: f64,
        m: u32,
    },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("malformed input descriptor `{input}`: {reason}")]
pub struct DescriptorError {
    input: String,
    reason: String,
}

fn field<T: FromStr>(s: &str, what: &str, input: &str) -> Result<T, DescriptorError> {
    s.parse().map_err(|_| DescriptorError {
        input: input.to_string(),
        reason: format!("cannot parse {what} from `{s}`"),
    })
}

impl FromStr for InputDescriptor {
    type Err = DescriptorError;

    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = input.split(':').collect();
        let bad = |reason: &str| DescriptorError {
            input: input.to_string(),
            reason: reason.into(),
        };
        match parts.as_slice() {
            ["fock", p, m] => Ok(Self::Fock {
                p: field(p, "waveguide index", input)?,
                m: field(m, "photon number", input)?,
            }),
            ["superpos", j, k, a] => {
                let alpha: f64 = field(a, "alpha", input)?;
                if !(alpha.is_finite() && alpha.abs() <= 1.0) {
                    return Err(bad("alpha must lie in [-1, 1]"));
                }
                Ok(Self::Superpos {
                    j: field(j, "waveguide index", input)?,
                    k: field(k, "waveguide index", input)?,
                    alpha,
                })
            }
            ["product", j, k] => Ok(Self::Product {
                j: field(j, "waveguide index", input)?,
                k: field(k, "waveguide index", input)?,
            }),
            ["noon", j, k, phi, rest @ ..] if rest.len() <= 1 => {
                let phi: f64 = field(phi, "phase", input)?;
                if !phi.is_finite() {
                    return Err(bad("phase must be finite"));
                }
                let m = match rest.first() {
                    Some(m) => field(m, "photon number", input)?,
                    None => 2,
                };
                Ok(Self::Noon {
                    j: field(j, "waveguide index", input)?,
                    k: field(k, "waveguide index", input)?,
                    phi,
                    m,
                })
            }
            _ => Err(bad(
                "expected fock:p:m, superpos:j:k:alpha, product:j:k or noon:j:k:phi[:m]",
            )),
        }
    }
}

impl fmt::Display for InputDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fock { p, m } => write!(f, "fock:{p}:{m}"),
            Self::Superpos { j, k, alpha } => write!(f, "superpos:{j}:{k}:{alpha}"),
            Self::Product { j, k } => write!(f, "product:{j}:{k}"),
            Self::Noon { j, k, phi, m } => write!(f, "noon:{j}:{k}:{phi}:{m}"),
        }
    }
}

impl InputDescriptor {
    /// `(alpha, beta)` of a beam-splitter descriptor.
    pub fn beam_splitter_amplitudes(&self) -> Option<(usize, usize, Complex64, Complex64)> {
        match *self {
            Self::Superpos { j, k, alpha } => Some((
                j,
                k,
                Complex64::new(alpha, 0.0),
                Complex64::new((1.0 - alpha * alpha).max(0.0).sqrt(), 0.0),
            )),
            _ => None,
        }
    }

    /// Build and validate the state on a lattice of `size` waveguides.
    pub fn to_state(&self, size: usize, tol: &Tolerances) -> glauber_fock::Result<InputState> {
        let state = match *self {
            Self::Fock { p, m } => InputState::FockAt {
                waveguide: p,
                photons: m,
            },
            Self::Superpos { j, k, .. } => {
                let (_, _, a, b) = self.beam_splitter_amplitudes().expect("superposition");
                if j == k {
                    return Err(glauber_fock::Error::IndexClash(j));
                }
                for idx in [j, k] {
                    if idx >= size {
                        return Err(glauber_fock::Error::IndexOutOfRange { index: idx, size });
                    }
                }
                InputState::beam_splitter(size, j, k, a, b)
            }
            Self::Product { j, k } => InputState::TwoPhotonProduct { j, k },
            Self::Noon { j, k, phi, m } => InputState::Noon {
                j,
                k,
                photons: m,
                phase: phi,
            },
        };
        state.validate(size, tol)?;
        Ok(state)
    }
}
