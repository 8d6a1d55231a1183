// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frequency of mode {mode} must be positive and finite, got {value}")]
    InvalidFrequency { mode: usize, value: f64 },

    #[error("coupling of bath mode {mode} must be nonnegative and finite, got {value}")]
    InvalidCoupling { mode: usize, value: f64 },

    #[error("expected {expected} couplings for {expected} bath modes, got {found}")]
    CouplingCount { expected: usize, found: usize },

    #[error("potential matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("invalid spectral family: {0}")]
    InvalidFamily(&'static str),

    #[error("{what} must be positive and finite, got {value}")]
    NonPositive { what: &'static str, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite (smallest eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("uncertainty relation violated (smallest symplectic eigenvalue {0})")]
    UncertaintyViolated(f64),

    #[error("mode {mode} out of range for a {modes}-mode state")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("bipartition must leave at least one mode on each side")]
    EmptyBipartition,

    #[error(
        "PPT is only decisive when one side holds a single mode \
         (got {system} system vs {environment} environment modes)"
    )]
    UnsupportedBipartition { system: usize, environment: usize },

    #[error("two-mode block is not a valid covariance (discriminant {0:e})")]
    InvalidBlock(f64),

    #[error("the network has no bath modes")]
    NoBath,

    #[error("no feasible inverse temperature in [{lo:e}, {hi:e}]")]
    InfeasibleBracket { lo: f64, hi: f64 },

    #[error("system covariance still violates the uncertainty relation after {attempts} margin doublings")]
    CertificateConstruction { attempts: u32 },

    #[error("certificate inequality violated (smallest eigenvalue {0:e})")]
    CertificateViolated(f64),

    #[error("system state is not pure (purity residual {0:e})")]
    NotPure(f64),

    #[error(
        "bath mode {mode} is effectively at zero temperature; the smallest PT eigenvalue \
         is degenerate at t = 0 and only one-sided derivatives exist"
    )]
    DegenerateDiscriminant { mode: usize },

    #[error("evolved covariance at t = {t} is invalid (smallest symplectic eigenvalue {min_symplectic})")]
    InvalidEvolution { t: f64, min_symplectic: f64 },

    #[error("time grid is empty")]
    EmptyGrid,
}
