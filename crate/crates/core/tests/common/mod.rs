// SPDX-License-Identifier: Apache-2.0

//! Independent oracles and random generators shared by the integration tests.

#![allow(dead_code)]

use nalgebra::DMatrix;
use qbm_core::{CovarianceMatrix, OscillatorNetwork, TwoModeBlock};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Interleaved symplectic form, built here without the library.
pub fn sigma(modes: usize) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        s[(2 * j, 2 * j + 1)] = 1.0;
        s[(2 * j + 1, 2 * j)] = -1.0;
    }
    s
}

/// Hamiltonian matrix `W` with `H = 1/2 o^T W o`, from the definition of the
/// model: `omega_j^2` on positions, unit momenta, `-kappa_j` between `X_0`
/// and `X_j`.
pub fn hamiltonian_matrix(omegas: &[f64], kappas: &[f64]) -> DMatrix<f64> {
    let n = omegas.len();
    let mut w = DMatrix::zeros(2 * n, 2 * n);
    for (j, &om) in omegas.iter().enumerate() {
        w[(2 * j, 2 * j)] = om * om;
        w[(2 * j + 1, 2 * j + 1)] = 1.0;
    }
    for (j, &k) in kappas.iter().enumerate() {
        w[(0, 2 * j + 2)] = -k;
        w[(2 * j + 2, 0)] = -k;
    }
    w
}

fn one_norm(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Dense matrix exponential by scaling and squaring with a degree-24 Taylor
/// polynomial on the scaled matrix.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = one_norm(a);
    let mut s = 0;
    while norm / f64::powi(2.0, s) > 0.25 {
        s += 1;
    }
    let scaled = a / f64::powi(2.0, s);
    let mut term = DMatrix::identity(n, n);
    let mut sum = DMatrix::identity(n, n);
    for k in 1..=24 {
        term = &term * &scaled / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// `exp(t Sigma W)`.
pub fn oracle_propagator(net: &OscillatorNetwork, t: f64) -> DMatrix<f64> {
    let g = sigma(net.modes()) * hamiltonian_matrix(net.omegas(), net.kappas());
    expm(&(g * t))
}

/// Random coupled network with at most `max_env` bath modes; couplings are
/// scaled so that `sum_j kappa_j^2 / omega_j^2 <= omega_0^2 / 2`, which keeps
/// the potential positive definite.
pub fn random_network(rng: &mut ChaCha8Rng, max_env: usize) -> OscillatorNetwork {
    let n = rng.random_range(1..=max_env);
    let omegas: Vec<f64> = (0..=n).map(|_| rng.random_range(0.5..3.0)).collect();
    let mut kappas: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
    let load: f64 = kappas
        .iter()
        .zip(&omegas[1..])
        .map(|(k, w)| k * k / (w * w))
        .sum();
    let cap = 0.5 * omegas[0] * omegas[0];
    let scale = rng.random_range(0.05..1.0) * (cap / load).sqrt();
    for k in &mut kappas {
        *k *= scale;
    }
    OscillatorNetwork::new(omegas, kappas).unwrap()
}

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-scale..scale));
    (&a + a.transpose()) * 0.5
}

/// Random symplectic matrix `exp(Sigma H)` for a random symmetric `H`.
pub fn random_symplectic(rng: &mut ChaCha8Rng, modes: usize, scale: f64) -> DMatrix<f64> {
    let h = random_symmetric(rng, 2 * modes, scale);
    expm(&(sigma(modes) * h))
}

/// `S (nu_1 1_2 (+) ... ) S^T` with symplectic eigenvalues `nu_j >= 1`.
pub fn random_covariance(rng: &mut ChaCha8Rng, modes: usize, scale: f64) -> DMatrix<f64> {
    let s = random_symplectic(rng, modes, scale);
    let mut d = DMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        let nu = 1.0 + rng.random_range(0.0..2.0);
        d[(2 * j, 2 * j)] = nu;
        d[(2 * j + 1, 2 * j + 1)] = nu;
    }
    let g = &s * d * s.transpose();
    (&g + g.transpose()) * 0.5
}

pub fn random_block(rng: &mut ChaCha8Rng) -> TwoModeBlock {
    let g = random_covariance(rng, 2, 0.8);
    TwoModeBlock::from_matrix(&nalgebra::Matrix4::from_iterator(g.iter().copied()))
}

/// Random pure one-mode covariance.
pub fn random_pure_state(rng: &mut ChaCha8Rng) -> CovarianceMatrix {
    qbm_core::make_pure_gaussian(
        rng.random_range(0.0..1.5),
        rng.random_range(0.0..std::f64::consts::PI),
    )
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |a, x| a.max(x.abs()))
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eig(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
