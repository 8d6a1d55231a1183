// SPDX-License-Identifier: Apache-2.0

//! Gaussian covariance-matrix dynamics for quantum Brownian motion.
//!
//! One distinguished oscillator (the system, mode 0) couples through its
//! position to a finite bath of harmonic oscillators. Everything here works
//! on the level of covariance matrices: the full joint covariance is evolved
//! exactly by the symplectic flow of the quadratic Hamiltonian, and
//! entanglement between the system and the bath is decided by the PPT
//! criterion, which is necessary and sufficient for 1 x N Gaussian states.
//!
//! Phase-space coordinates are interleaved, `(X_0, P_0, X_1, P_1, ...)`, the
//! symplectic form has blocks `[[0, 1], [-1, 0]]` and the vacuum covariance is
//! the identity. Mode indices are zero-based: mode 0 is the system and modes
//! `1..=N` are the bath.
//!
//! The crate is `no_std` (it needs `alloc`); IO lives in the companion CLI
//! crate.

#![cfg_attr(not(test), no_std)]
// Matrix code reads better with explicit index loops.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod entanglement;
mod error;
mod linalg;
pub mod model;
pub mod propositions;
pub mod symplectic;

pub use error::{Error, Result};

pub use entanglement::{
    lambda_of_block, log_negativity, partial_transpose, ppt_verdict, ppt_verdict_with,
    reduce_two_mode, EntanglementVerdict, Separability, TwoModeBlock,
};
pub use model::{
    build_potential_matrix, build_quadratic_form, make_spectral_model, OscillatorNetwork,
    PotentialMatrix, QuadraticForm, SpectralFamily,
};
pub use propositions::{
    build_certificate, critical_beta, immediate_entanglement_check, lambda_dot_analytic,
    n_scaling_study, prop1_constants, verify_all_times_separable, Prop1Constants, Prop2Report,
    ScalingRow, SeparabilityCertificate, SeparabilityReport,
};
pub use symplectic::{
    evolve, gibbs_covariance, is_pure, make_pure_gaussian, mean_energy, normal_modes, propagator,
    symplectic_form, symplectic_spectrum, thermal_factor, CovarianceMatrix, Dynamics, NormalModes,
    SymplecticMap,
};
