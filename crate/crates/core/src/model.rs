// SPDX-License-Identifier: Apache-2.0

//! The oscillator network: one system oscillator coupled in position to a
//! bath of `N` oscillators, all with unit mass.
//!
//! ```text
//! H = P_0^2/2 + w_0^2 X_0^2/2 + sum_j (P_j^2/2 + w_j^2 X_j^2/2) - X_0 sum_j k_j X_j
//! ```
//!
//! The potential part is written `x^T V x`, so `V` carries `w_j^2/2` on the
//! diagonal and `-k_j/2` in the first row and column. `V` must be strictly
//! positive definite.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::linalg;
use crate::{Error, Result};

/// Relative tolerance for the positive-definiteness check on `V`.
const PD_RELATIVE_TOL: f64 = 1e-12;

/// Potential-energy matrix `V` of a network, `(N+1) x (N+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialMatrix(DMatrix<f64>);

impl PotentialMatrix {
    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// Ascending eigenvalues of `V`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::symmetric_eigenvalues(&self.0)
    }

    /// Spectral norm, which for `V > 0` is the largest eigenvalue.
    pub fn operator_norm(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }

    /// Upper bound on `||V||` from splitting off the diagonal:
    /// `max_j w_j^2 / 2 + sqrt(2 sum_j k_j^2)`, the maximum taken over every
    /// oscillator including the system.
    pub fn norm_bound(&self) -> f64 {
        let n = self.dim();
        let diag_max = (0..n).map(|j| self.0[(j, j)]).fold(0.0_f64, f64::max);
        let kappa_sq: f64 = (1..n).map(|j| 4.0 * self.0[(0, j)] * self.0[(0, j)]).sum();
        diag_max + libm::sqrt(2.0 * kappa_sq)
    }

    /// `x^T V x`.
    pub fn energy(&self, positions: &DVector<f64>) -> f64 {
        positions.dot(&(&self.0 * positions))
    }
}

/// `W` such that `H = 1/2 o^T W o` for interleaved phase-space vectors `o`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm(DMatrix<f64>);

impl QuadraticForm {
    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.nrows() / 2
    }

    /// `1/2 o^T W o`.
    pub fn evaluate(&self, point: &DVector<f64>) -> f64 {
        0.5 * point.dot(&(&self.0 * point))
    }
}

/// A validated network. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorNetwork {
    omegas: Vec<f64>,
    kappas: Vec<f64>,
    potential: PotentialMatrix,
}

impl OscillatorNetwork {
    /// `omegas[0]` is the system frequency, `omegas[1..]` the bath;
    /// `kappas[j - 1]` couples bath mode `j` to the system.
    pub fn new(omegas: Vec<f64>, kappas: Vec<f64>) -> Result<Self> {
        let potential = build_potential_matrix(&omegas, &kappas)?;
        Ok(Self {
            omegas,
            kappas,
            potential,
        })
    }

    /// A network with the conventional unit system frequency.
    pub fn with_unit_system(bath_omegas: &[f64], kappas: Vec<f64>) -> Result<Self> {
        let mut omegas = Vec::with_capacity(bath_omegas.len() + 1);
        omegas.push(1.0);
        omegas.extend_from_slice(bath_omegas);
        Self::new(omegas, kappas)
    }

    /// Independent oscillators with the given frequencies.
    pub fn uncoupled(omegas: Vec<f64>) -> Result<Self> {
        let kappas = alloc::vec![0.0; omegas.len().saturating_sub(1)];
        Self::new(omegas, kappas)
    }

    /// Bath oscillators alone, decoupled from the system. Its Gibbs state is
    /// the initial bath state.
    pub fn bath(&self) -> Result<Self> {
        if self.n_env() == 0 {
            return Err(Error::NoBath);
        }
        Self::uncoupled(self.bath_frequencies().to_vec())
    }

    /// Number of bath oscillators `N`.
    pub fn n_env(&self) -> usize {
        self.kappas.len()
    }

    /// Total number of oscillators `N + 1`.
    pub fn modes(&self) -> usize {
        self.omegas.len()
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub fn system_frequency(&self) -> f64 {
        self.omegas[0]
    }

    pub fn bath_frequencies(&self) -> &[f64] {
        &self.omegas[1..]
    }

    /// Coupling of bath mode `mode` (1-based within the network, i.e. the
    /// global mode index).
    pub fn coupling(&self, mode: usize) -> Option<f64> {
        mode.checked_sub(1)
            .and_then(|k| self.kappas.get(k))
            .copied()
    }

    pub fn potential(&self) -> &PotentialMatrix {
        &self.potential
    }

    pub fn quadratic_form(&self) -> QuadraticForm {
        build_quadratic_form(self)
    }

    /// The same network with bath modes reordered: bath mode `perm[i]` of
    /// `self` becomes bath mode `i` (both zero-based within the bath).
    pub fn permute_bath(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_env();
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: perm.len(),
            });
        }
        let mut omegas = Vec::with_capacity(n + 1);
        omegas.push(self.omegas[0]);
        let mut kappas = Vec::with_capacity(n);
        for &p in perm {
            if p >= n {
                return Err(Error::ModeOutOfRange {
                    mode: p + 1,
                    modes: n + 1,
                });
            }
            omegas.push(self.omegas[p + 1]);
            kappas.push(self.kappas[p]);
        }
        Self::new(omegas, kappas)
    }
}

/// Builds `V` and checks it is strictly positive definite.
pub fn build_potential_matrix(omegas: &[f64], kappas: &[f64]) -> Result<PotentialMatrix> {
    for (mode, &w) in omegas.iter().enumerate() {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::InvalidFrequency { mode, value: w });
        }
    }
    if omegas.is_empty() || kappas.len() + 1 != omegas.len() {
        return Err(Error::CouplingCount {
            expected: omegas.len().saturating_sub(1),
            found: kappas.len(),
        });
    }
    for (k, &kappa) in kappas.iter().enumerate() {
        if !(kappa.is_finite() && kappa >= 0.0) {
            return Err(Error::InvalidCoupling {
                mode: k + 1,
                value: kappa,
            });
        }
    }

    let n = omegas.len();
    let mut v = DMatrix::zeros(n, n);
    for (j, &w) in omegas.iter().enumerate() {
        v[(j, j)] = 0.5 * w * w;
    }
    for (k, &kappa) in kappas.iter().enumerate() {
        v[(0, k + 1)] = -0.5 * kappa;
        v[(k + 1, 0)] = -0.5 * kappa;
    }

    let eig = linalg::symmetric_eigenvalues(&v);
    let (lo, hi) = (eig[0], eig[n - 1]);
    if lo <= PD_RELATIVE_TOL * hi.abs() {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: lo });
    }
    Ok(PotentialMatrix(v))
}

/// `W = 2V` on positions and the identity on momenta, interleaved.
pub fn build_quadratic_form(net: &OscillatorNetwork) -> QuadraticForm {
    let n = net.modes();
    let v = net.potential.as_matrix();
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            w[(2 * i, 2 * j)] = 2.0 * v[(i, j)];
        }
        w[(2 * i + 1, 2 * i + 1)] = 1.0;
    }
    QuadraticForm(w)
}

/// Discretized spectral density with couplings `k_j = alpha_N w_j^p` on the
/// equidistant grid `w_j = j * omega_max / N`, `j = 1..=N`, with `alpha_N`
/// fixed by the total `sum_j k_j^2 = coupling_norm`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralFamily {
    pub exponent: f64,
    pub omega_max: f64,
    pub coupling_norm: f64,
    pub n_env: usize,
}

impl SpectralFamily {
    pub fn new(exponent: f64, omega_max: f64, coupling_norm: f64, n_env: usize) -> Result<Self> {
        let fam = Self {
            exponent,
            omega_max,
            coupling_norm,
            n_env,
        };
        fam.validate()?;
        Ok(fam)
    }

    /// Ohmic family, `p = 1`.
    pub fn ohmic(omega_max: f64, coupling_norm: f64, n_env: usize) -> Result<Self> {
        Self::new(1.0, omega_max, coupling_norm, n_env)
    }

    pub fn with_n_env(self, n_env: usize) -> Self {
        Self { n_env, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.exponent.is_finite() && self.exponent > 0.0) {
            return Err(Error::InvalidFamily("exponent must be positive"));
        }
        if !(self.omega_max.is_finite() && self.omega_max > 0.0) {
            return Err(Error::InvalidFamily("omega_max must be positive"));
        }
        if !(self.coupling_norm.is_finite() && self.coupling_norm > 0.0) {
            return Err(Error::InvalidFamily("coupling_norm must be positive"));
        }
        if self.n_env == 0 {
            return Err(Error::InvalidFamily("n_env must be at least 1"));
        }
        Ok(())
    }

    pub fn bath_frequencies(&self) -> Vec<f64> {
        let n = self.n_env as f64;
        (1..=self.n_env)
            .map(|j| j as f64 * self.omega_max / n)
            .collect()
    }

    /// `alpha_N` such that the couplings square-sum to `coupling_norm`.
    pub fn amplitude(&self) -> f64 {
        let shape: f64 = self
            .bath_frequencies()
            .iter()
            .map(|&w| libm::pow(w, 2.0 * self.exponent))
            .sum();
        libm::sqrt(self.coupling_norm / shape)
    }

    pub fn couplings(&self) -> Vec<f64> {
        let alpha = self.amplitude();
        self.bath_frequencies()
            .iter()
            .map(|&w| alpha * libm::pow(w, self.exponent))
            .collect()
    }
}

/// Unit system frequency plus the discretized bath of `fam`.
pub fn make_spectral_model(fam: &SpectralFamily) -> Result<OscillatorNetwork> {
    fam.validate()?;
    OscillatorNetwork::with_unit_system(&fam.bath_frequencies(), fam.couplings())
}
