// SPDX-License-Identifier: Apache-2.0

//! Separability certificates and immediate entanglement generation.
//!
//! **Separable for all times.** Let `G = G(gamma H)` be the Gibbs covariance
//! of the full Hamiltonian at the inverse temperature `gamma` below. In mode
//! coordinates `G >= 1`, and since `G` is stationary any initial
//! `G_0 >= G` evolves into `G_t = S_t (G_0 - G) S_t^T + G`, whose partial
//! transpose stays positive. A certificate is a system covariance `G_0^S`
//! and a bath inverse temperature `beta` with
//! `G_0^S (+) G(beta H_E) >= G`.
//!
//! **Immediate entanglement.** For a pure system state and a thermal bath,
//! the two-mode quantity `lambda_t` of the system and any coupled bath mode
//! starts at exactly one and drops below one for small `t > 0`.

use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, Matrix2, Matrix4};

use crate::entanglement::{
    lambda_of_block, ppt_verdict, reduce_two_mode, EntanglementVerdict, TwoModeBlock,
};
use crate::linalg;
use crate::model::{make_spectral_model, OscillatorNetwork, SpectralFamily};
use crate::symplectic::{
    gibbs_covariance, normal_modes, thermal_factor, CovarianceMatrix, Dynamics,
};
use crate::{Error, Result};

/// Search bracket for the critical inverse temperature.
pub const BETA_BRACKET: (f64, f64) = (1e-6, 1e3);
/// Width of the final bisection bracket.
pub const BETA_RESOLUTION: f64 = 1e-10;
/// Default slack in the certificate inequalities.
pub const DEFAULT_MARGIN: f64 = 1e-6;
/// An all-times run passes when every PT symplectic minimum is at least
/// `1 - SEPARABILITY_TOL`.
pub const SEPARABILITY_TOL: f64 = 1e-8;
/// Entrywise tolerance on `(J G)^2 + 1` for pure system states.
pub const PURITY_TOL: f64 = 1e-9;

const MAX_MARGIN_DOUBLINGS: u32 = 8;

/// Constants of the all-times separability construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop1Constants {
    /// Largest bath frequency.
    pub omega_inf: f64,
    /// Largest frequency of any oscillator, system included; bounds `||V||`.
    pub omega_max: f64,
    /// `2 sum_j k_j^2`.
    pub delta: f64,
    /// `sqrt(omega_max^2 + 2 sqrt(delta))`, an upper bound on the normal-mode
    /// frequencies.
    pub big_omega: f64,
    /// `min(2, ln(1 + 2/Omega) / Omega)`.
    pub gamma: f64,
}

pub fn prop1_constants(net: &OscillatorNetwork) -> Result<Prop1Constants> {
    if net.n_env() == 0 {
        return Err(Error::NoBath);
    }
    let omega_inf = net
        .bath_frequencies()
        .iter()
        .copied()
        .fold(0.0_f64, f64::max);
    let omega_max = omega_inf.max(net.system_frequency());
    let delta = 2.0 * net.kappas().iter().map(|k| k * k).sum::<f64>();
    let big_omega = libm::sqrt(omega_max * omega_max + 2.0 * libm::sqrt(delta));
    let gamma = (libm::log1p(2.0 / big_omega) / big_omega).min(2.0);
    Ok(Prop1Constants {
        omega_inf,
        omega_max,
        delta,
        big_omega,
        gamma,
    })
}

/// `G(beta H_E)`: diagonal, `f(beta w)/w` and `f(beta w) w` per bath mode.
fn bath_gibbs(bath: &[f64], beta: f64) -> Result<DMatrix<f64>> {
    let mut d = DMatrix::zeros(2 * bath.len(), 2 * bath.len());
    for (j, &w) in bath.iter().enumerate() {
        let f = thermal_factor(beta * w)?;
        d[(2 * j, 2 * j)] = f / w;
        d[(2 * j + 1, 2 * j + 1)] = f * w;
    }
    Ok(d)
}

/// The target `G(gamma H)` split into system and bath blocks.
struct GibbsTarget {
    full: DMatrix<f64>,
    bath: Vec<f64>,
}

impl GibbsTarget {
    fn new(net: &OscillatorNetwork, gamma: f64) -> Result<Self> {
        let modes = normal_modes(net.potential())?;
        Ok(Self {
            full: gibbs_covariance(&modes, gamma)?.into_matrix(),
            bath: net.bath_frequencies().to_vec(),
        })
    }

    fn dim_e(&self) -> usize {
        2 * self.bath.len()
    }

    fn ee(&self) -> DMatrix<f64> {
        let n = self.dim_e();
        self.full.view((2, 2), (n, n)).into_owned()
    }

    fn se(&self) -> DMatrix<f64> {
        self.full.view((0, 2), (2, self.dim_e())).into_owned()
    }

    fn ss(&self) -> Matrix2<f64> {
        self.full.fixed_view::<2, 2>(0, 0).into_owned()
    }

    /// `G(beta H_E) - G_EE`.
    fn e_gap(&self, beta: f64) -> Result<DMatrix<f64>> {
        Ok(bath_gibbs(&self.bath, beta)? - self.ee())
    }

    fn feasible(&self, beta: f64, margin: f64) -> Result<bool> {
        Ok(linalg::min_eigenvalue(&self.e_gap(beta)?) >= margin)
    }
}

/// Feasible/infeasible pair bracketing the critical inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaBracket {
    /// Largest inverse temperature known to satisfy the bath-block condition.
    pub feasible: f64,
    /// Smallest known violator; `None` when the whole search bracket is
    /// feasible.
    pub infeasible: Option<f64>,
}

fn search_beta(target: &GibbsTarget, margin: f64) -> Result<BetaBracket> {
    let (lo0, hi0) = BETA_BRACKET;
    if !target.feasible(lo0, margin)? {
        return Err(Error::InfeasibleBracket { lo: lo0, hi: hi0 });
    }
    if target.feasible(hi0, margin)? {
        return Ok(BetaBracket {
            feasible: hi0,
            infeasible: None,
        });
    }
    let (mut lo, mut hi) = (lo0, hi0);
    // geometric halving first, the bracket spans nine decades
    while hi / lo > 2.0 {
        let mid = libm::sqrt(lo * hi);
        if target.feasible(mid, margin)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    while hi - lo > BETA_RESOLUTION {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if target.feasible(mid, margin)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BetaBracket {
        feasible: lo,
        infeasible: Some(hi),
    })
}

/// Bisection bracket for `critical_beta`.
pub fn critical_beta_bracket(net: &OscillatorNetwork, margin: f64) -> Result<BetaBracket> {
    let constants = prop1_constants(net)?;
    let target = GibbsTarget::new(net, constants.gamma)?;
    search_beta(&target, margin)
}

/// Largest `beta` with `G(beta H_E) - [G(gamma H)]_EE >= margin`.
///
/// `G(beta H_E)` decreases entrywise in `beta`, so the feasible set is the
/// interval `(0, beta*]`; it is located by bisection.
pub fn critical_beta(net: &OscillatorNetwork, margin: f64) -> Result<f64> {
    Ok(critical_beta_bracket(net, margin)?.feasible)
}

/// Smallest eigenvalue of `G(beta H_E) - [G(gamma H)]_EE`.
pub fn bath_block_slack(net: &OscillatorNetwork, beta: f64) -> Result<f64> {
    let constants = prop1_constants(net)?;
    let target = GibbsTarget::new(net, constants.gamma)?;
    Ok(linalg::min_eigenvalue(&target.e_gap(beta)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityCertificate {
    pub constants: Prop1Constants,
    pub beta_star: f64,
    /// Bath inverse temperature actually used, `beta_star / 2`.
    pub beta: f64,
    pub gamma0_sys: Matrix2<f64>,
    /// Slack added to the system block (after any doublings).
    pub margin: f64,
}

impl SeparabilityCertificate {
    /// `G_0 = G_0^S (+) G(beta H_E)`.
    pub fn initial_covariance(&self, net: &OscillatorNetwork) -> Result<CovarianceMatrix> {
        let sys = DMatrix::from_iterator(2, 2, self.gamma0_sys.iter().copied());
        let bath = bath_gibbs(net.bath_frequencies(), self.beta)?;
        CovarianceMatrix::new(linalg::direct_sum(&sys, &bath))
    }

    /// Smallest eigenvalue of `G_0 - G(gamma H)`.
    pub fn slack(&self, net: &OscillatorNetwork) -> Result<f64> {
        let target = GibbsTarget::new(net, self.constants.gamma)?;
        let g0 = self.initial_covariance(net)?;
        Ok(linalg::min_eigenvalue(&(g0.as_matrix() - &target.full)))
    }
}

/// Builds `(gamma, beta, G_0^S)` with the minimal system block
/// `G_SS + G_SE (G(beta H_E) - G_EE)^{-1} G_ES + margin`, i.e. the Schur
/// complement condition for `G_0 - G >= 0` plus slack, at
/// `beta = beta* / 2`.
pub fn build_certificate(net: &OscillatorNetwork, margin: f64) -> Result<SeparabilityCertificate> {
    if margin.is_nan() || margin <= 0.0 {
        return Err(Error::NonPositive {
            what: "margin",
            value: margin,
        });
    }
    let constants = prop1_constants(net)?;
    let target = GibbsTarget::new(net, constants.gamma)?;
    let beta_star = search_beta(&target, margin)?.feasible;
    let beta = 0.5 * beta_star;

    let gap = target.e_gap(beta)?;
    let se = target.se();
    let chol = Cholesky::new(gap).ok_or(Error::CertificateViolated(f64::NAN))?;
    let correction = &se * chol.solve(&se.transpose());
    let base = target.ss() + Matrix2::from_iterator(correction.iter().copied());

    let mut margin_used = margin;
    let mut attempts = 0;
    let gamma0_sys = loop {
        let candidate = base + Matrix2::identity() * margin_used;
        let mut m = DMatrix::from_iterator(2, 2, candidate.iter().copied());
        linalg::symmetrize(&mut m);
        if CovarianceMatrix::with_tolerance(m.clone(), 0.0).is_ok() {
            break Matrix2::from_iterator(m.iter().copied());
        }
        attempts += 1;
        if attempts > MAX_MARGIN_DOUBLINGS {
            return Err(Error::CertificateConstruction {
                attempts: MAX_MARGIN_DOUBLINGS,
            });
        }
        margin_used *= 2.0;
    };

    let cert = SeparabilityCertificate {
        constants,
        beta_star,
        beta,
        gamma0_sys,
        margin: margin_used,
    };
    let g0 = cert.initial_covariance(net)?;
    let diff = g0.as_matrix() - &target.full;
    let slack = linalg::min_eigenvalue(&diff);
    if slack < -1e-10 * linalg::max_abs(&diff).max(1.0) {
        return Err(Error::CertificateViolated(slack));
    }
    Ok(cert)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparabilitySample {
    pub t: f64,
    pub verdict: EntanglementVerdict,
    /// Smallest symplectic eigenvalue of the evolved covariance itself.
    pub min_symplectic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityReport {
    pub samples: Vec<SeparabilitySample>,
    /// Minimum over the grid of the smallest PT symplectic eigenvalue.
    pub min_pt_symplectic: f64,
    pub passed: bool,
}

/// Evolves the certified initial state over `times` and checks PPT at each.
pub fn verify_all_times_separable(
    cert: &SeparabilityCertificate,
    net: &OscillatorNetwork,
    times: &[f64],
    tol: f64,
) -> Result<SeparabilityReport> {
    if times.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let g0 = cert.initial_covariance(net)?;
    let dynamics = Dynamics::new(net);
    let mut samples = Vec::with_capacity(times.len());
    for &t in times {
        let gt = dynamics.evolve(&g0, t)?;
        let min_symplectic = gt.min_symplectic_eigenvalue();
        if min_symplectic < 1.0 - SEPARABILITY_TOL {
            return Err(Error::InvalidEvolution { t, min_symplectic });
        }
        samples.push(SeparabilitySample {
            t,
            verdict: ppt_verdict(&gt, tol)?,
            min_symplectic,
        });
    }
    let min_pt_symplectic = samples
        .iter()
        .map(|s| s.verdict.min_pt_symplectic)
        .fold(f64::INFINITY, f64::min);
    Ok(SeparabilityReport {
        samples,
        min_pt_symplectic,
        passed: min_pt_symplectic >= 1.0 - SEPARABILITY_TOL,
    })
}

fn adjugate2(m: &Matrix2<f64>) -> Matrix2<f64> {
    Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

/// Time derivatives of the two-mode blocks at `t = 0` for a product initial
/// state, from `d/dt G = K G + G K^T` with the flow generator `K`.
pub fn derivative_blocks(
    block: &TwoModeBlock,
    omega_sys: f64,
    omega_env: f64,
    kappa: f64,
) -> TwoModeBlock {
    let local = |w: f64| Matrix2::new(0.0, 1.0, -w * w, 0.0);
    let (ks, ke) = (local(omega_sys), local(omega_env));
    // dP_0/dt picks up +k X_k and dP_k/dt picks up +k X_0
    let cross = Matrix2::new(0.0, 0.0, kappa, 0.0);
    TwoModeBlock {
        a: ks * block.a
            + block.a * ks.transpose()
            + cross * block.c.transpose()
            + block.c * cross.transpose(),
        b: ke * block.b
            + block.b * ke.transpose()
            + cross * block.c
            + block.c.transpose() * cross.transpose(),
        c: ks * block.c + block.c * ke.transpose() + cross * block.b + block.a * cross.transpose(),
    }
}

/// The derivative blocks in the closed form usually quoted for a unit
/// system frequency: `dA` with off-diagonals `A22 - A11` and corner
/// `-2 A12`, `dC = [[0, -k A11], [0, k A12]]`, `dB` with off-diagonals
/// `B22 - B11`. They drop the `2 A12` corner of `dA` and the `k B11`
/// entry of `dC`, so they match the exact blocks only for
/// position-momentum-uncorrelated system states at unit frequencies.
pub fn quoted_derivative_blocks(block: &TwoModeBlock, kappa: f64) -> TwoModeBlock {
    let (a, b) = (&block.a, &block.b);
    let da = a[(1, 1)] - a[(0, 0)];
    let db = b[(1, 1)] - b[(0, 0)];
    TwoModeBlock {
        a: Matrix2::new(0.0, da, da, -2.0 * a[(0, 1)]),
        b: Matrix2::new(0.0, db, db, 0.0),
        c: Matrix2::new(0.0, -kappa * a[(0, 0)], 0.0, kappa * a[(0, 1)]),
    }
}

/// `d lambda / dt` by the chain rule on `lambda = d/2 - sqrt(d^2/4 - det g)`
/// given the block derivatives. Fails on a degenerate discriminant.
pub fn lambda_rate(block: &TwoModeBlock, rate: &TwoModeBlock) -> Result<f64> {
    let d = block.pt_seralian();
    let gamma: Matrix4<f64> = block.assemble();
    let det = block.determinant();
    let disc = block.pt_discriminant();
    if disc <= 1e-12 * (0.25 * d * d).max(1.0) {
        return Err(Error::InvalidBlock(disc));
    }
    let d_rate = (adjugate2(&block.a) * rate.a).trace() + (adjugate2(&block.b) * rate.b).trace()
        - 2.0 * (adjugate2(&block.c) * rate.c).trace();
    let inv = gamma.try_inverse().ok_or(Error::InvalidBlock(det))?;
    let det_rate = det * (inv * rate.assemble()).trace();
    Ok(0.5 * d_rate - (0.5 * d * d_rate - det_rate) / (2.0 * libm::sqrt(disc)))
}

fn check_pure(gamma0_sys: &CovarianceMatrix) -> Result<()> {
    if gamma0_sys.modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: 2 * gamma0_sys.modes(),
        });
    }
    let residual = gamma0_sys.purity_residual();
    if residual > PURITY_TOL {
        return Err(Error::NotPure(residual));
    }
    Ok(())
}

/// `G_0 = G_0^S (+) G(beta H_E)`.
pub fn product_initial_state(
    gamma0_sys: &CovarianceMatrix,
    net: &OscillatorNetwork,
    beta: f64,
) -> Result<CovarianceMatrix> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::NonPositive {
            what: "inverse temperature",
            value: beta,
        });
    }
    let bath = bath_gibbs(net.bath_frequencies(), beta)?;
    Ok(CovarianceMatrix::from_matrix_unchecked(linalg::direct_sum(
        gamma0_sys.as_matrix(),
        &bath,
    )))
}

fn initial_block(
    gamma0_sys: &CovarianceMatrix,
    net: &OscillatorNetwork,
    env_mode: usize,
    beta: f64,
) -> Result<(TwoModeBlock, f64)> {
    check_pure(gamma0_sys)?;
    let kappa = net.coupling(env_mode).ok_or(Error::ModeOutOfRange {
        mode: env_mode,
        modes: net.modes(),
    })?;
    let g0 = product_initial_state(gamma0_sys, net, beta)?;
    let block = reduce_two_mode(&g0, env_mode)?;
    let d = block.pt_seralian();
    let disc = block.pt_discriminant();
    if disc <= 1e-12 * (0.25 * d * d).max(1.0) {
        return Err(Error::DegenerateDiscriminant { mode: env_mode });
    }
    Ok((block, kappa))
}

/// Exact `d lambda_t / dt` at `t = 0` for the system and bath mode
/// `env_mode`, starting from a pure system state and a thermal bath.
pub fn lambda_dot_analytic(
    gamma0_sys: &CovarianceMatrix,
    net: &OscillatorNetwork,
    env_mode: usize,
    beta: f64,
) -> Result<f64> {
    let (block, kappa) = initial_block(gamma0_sys, net, env_mode, beta)?;
    if kappa == 0.0 {
        // the two modes never interact; lambda_t stays at one
        return Ok(0.0);
    }
    let rate = derivative_blocks(
        &block,
        net.system_frequency(),
        net.omegas()[env_mode],
        kappa,
    );
    lambda_rate(&block, &rate)
}

/// Same chain rule as `lambda_dot_analytic`, but fed the quoted closed-form
/// blocks. Reported for comparison only.
pub fn lambda_dot_quoted(
    gamma0_sys: &CovarianceMatrix,
    net: &OscillatorNetwork,
    env_mode: usize,
    beta: f64,
) -> Result<f64> {
    let (block, kappa) = initial_block(gamma0_sys, net, env_mode, beta)?;
    lambda_rate(&block, &quoted_derivative_blocks(&block, kappa))
}

fn lambda_at(dynamics: &Dynamics, g0: &CovarianceMatrix, env_mode: usize, t: f64) -> Result<f64> {
    lambda_of_block(&reduce_two_mode(&dynamics.evolve(g0, t)?, env_mode)?)
}

/// Richardson-refined central difference of `lambda_t` at zero, from the
/// exact evolution: `(4 D(h/2) - D(h)) / 3`.
pub fn lambda_dot_finite_difference(
    gamma0_sys: &CovarianceMatrix,
    net: &OscillatorNetwork,
    env_mode: usize,
    beta: f64,
    h: f64,
) -> Result<f64> {
    check_pure(gamma0_sys)?;
    let g0 = product_initial_state(gamma0_sys, net, beta)?;
    let dynamics = Dynamics::new(net);
    let central = |step: f64| -> Result<f64> {
        Ok((lambda_at(&dynamics, &g0, env_mode, step)?
            - lambda_at(&dynamics, &g0, env_mode, -step)?)
            / (2.0 * step))
    };
    Ok((4.0 * central(0.5 * h)? - central(h)?) / 3.0)
}

/// Step used for the finite-difference rate in reports.
pub const FINITE_DIFFERENCE_STEP: f64 = 1e-6;

/// `points` log-spaced times from `start` to `stop` inclusive.
pub fn log_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => alloc::vec![start],
        _ => {
            let (a, b) = (libm::log10(start), libm::log10(stop));
            (0..points)
                .map(|i| libm::pow(10.0, a + (b - a) * i as f64 / (points - 1) as f64))
                .collect()
        }
    }
}

/// Log-spaced `1e-4 ..= 1e-1`, 25 points.
pub fn default_onset_grid() -> Vec<f64> {
    log_grid(1e-4, 1e-1, 25)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OnsetSample {
    pub t: f64,
    /// `lambda_t` per probed bath mode, in the order of `Prop2Report::modes`.
    pub lambdas: Vec<f64>,
    pub min_lambda: f64,
    /// PT symplectic minimum of the full state, as corroboration.
    pub full_min_pt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeRate {
    pub mode: usize,
    /// Exact `d lambda/dt` at zero; `None` for a zero-temperature mode.
    pub analytic: Option<f64>,
    /// Same, from the quoted closed-form blocks.
    pub quoted: Option<f64>,
    pub finite_difference: f64,
}

/// Fit `1 - lambda_t ~ c t^k` over the first decade of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OnsetFit {
    pub order: f64,
    pub coefficient: f64,
    /// Number of samples in the fit window.
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop2Report {
    /// Probed bath modes (global indices).
    pub modes: Vec<usize>,
    pub rates: Vec<ModeRate>,
    /// Minimum over probed modes of `lambda_0`.
    pub lambda_at_zero: f64,
    pub onset_curve: Vec<OnsetSample>,
    pub onset_fit: Option<OnsetFit>,
    /// Largest grid time up to which every sample has `lambda < 1`.
    pub epsilon_found: Option<f64>,
    pub passed: bool,
}

/// Least-squares slope of `ln(1 - lambda)` against `ln t` over samples with
/// `t <= 10 t_min`, or over the whole curve when that leaves fewer than
/// three points.
fn fit_onset(curve: &[OnsetSample]) -> Option<OnsetFit> {
    let usable: Vec<(f64, f64)> = curve
        .iter()
        .filter(|s| s.t > 0.0 && s.min_lambda < 1.0)
        .map(|s| (libm::log(s.t), libm::log(1.0 - s.min_lambda)))
        .collect();
    let t_min = usable.first()?.0;
    let window: Vec<(f64, f64)> = usable
        .iter()
        .copied()
        .filter(|p| p.0 <= t_min + core::f64::consts::LN_10 * (1.0 + 1e-12))
        .collect();
    let pts = if window.len() >= 3 { window } else { usable };
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let order = sxy / sxx;
    Some(OnsetFit {
        order,
        coefficient: libm::exp(my - order * mx),
        points: pts.len(),
    })
}

/// Evolves `G_0^S (+) G(beta H_E)` over `times` and tracks `lambda_t` for
/// every coupled bath mode (all bath modes if none is coupled).
///
/// The report passes iff at every sampled `t > 0` some probed mode has
/// `lambda_t < 1`; a failing report still carries the full curve.
pub fn immediate_entanglement_check(
    gamma0_sys: &CovarianceMatrix,
    net: &OscillatorNetwork,
    beta: f64,
    times: &[f64],
) -> Result<Prop2Report> {
    check_pure(gamma0_sys)?;
    if net.n_env() == 0 {
        return Err(Error::NoBath);
    }
    if times.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let g0 = product_initial_state(gamma0_sys, net, beta)?;
    let dynamics = Dynamics::new(net);

    let mut modes: Vec<usize> = (1..net.modes())
        .filter(|&m| net.kappas()[m - 1] > 0.0)
        .collect();
    if modes.is_empty() {
        modes = (1..net.modes()).collect();
    }

    let mut rates = Vec::with_capacity(modes.len());
    let mut lambda_at_zero = f64::INFINITY;
    for &mode in &modes {
        lambda_at_zero = lambda_at_zero.min(lambda_of_block(&reduce_two_mode(&g0, mode)?)?);
        let analytic = match lambda_dot_analytic(gamma0_sys, net, mode, beta) {
            Ok(v) => Some(v),
            Err(Error::DegenerateDiscriminant { .. }) => None,
            Err(e) => return Err(e),
        };
        let quoted = match lambda_dot_quoted(gamma0_sys, net, mode, beta) {
            Ok(v) => Some(v),
            Err(Error::DegenerateDiscriminant { .. }) | Err(Error::InvalidBlock(_)) => None,
            Err(e) => return Err(e),
        };
        rates.push(ModeRate {
            mode,
            analytic,
            quoted,
            finite_difference: lambda_dot_finite_difference(
                gamma0_sys,
                net,
                mode,
                beta,
                FINITE_DIFFERENCE_STEP,
            )?,
        });
    }

    let mut sorted: Vec<f64> = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut onset_curve = Vec::with_capacity(sorted.len());
    for &t in &sorted {
        let gt = dynamics.evolve(&g0, t)?;
        let lambdas = modes
            .iter()
            .map(|&m| lambda_of_block(&reduce_two_mode(&gt, m)?))
            .collect::<Result<Vec<f64>>>()?;
        let min_lambda = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
        onset_curve.push(OnsetSample {
            t,
            lambdas,
            min_lambda,
            full_min_pt: ppt_verdict(&gt, SEPARABILITY_TOL)?.min_pt_symplectic,
        });
    }

    let positive = || onset_curve.iter().filter(|s| s.t > 0.0);
    let passed = positive().count() > 0 && positive().all(|s| s.min_lambda < 1.0);
    let epsilon_found = positive()
        .take_while(|s| s.min_lambda < 1.0)
        .last()
        .map(|s| s.t);
    let onset_fit = fit_onset(&onset_curve);

    Ok(Prop2Report {
        modes,
        rates,
        lambda_at_zero,
        onset_curve,
        onset_fit,
        epsilon_found,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRow {
    pub n_env: usize,
    pub delta: f64,
    pub big_omega: f64,
    pub gamma: f64,
    pub beta_star: f64,
}

/// Constants and critical inverse temperature for one discretization.
pub fn scaling_row(fam: &SpectralFamily, margin: f64) -> Result<ScalingRow> {
    let net = make_spectral_model(fam)?;
    let c = prop1_constants(&net)?;
    Ok(ScalingRow {
        n_env: fam.n_env,
        delta: c.delta,
        big_omega: c.big_omega,
        gamma: c.gamma,
        beta_star: critical_beta(&net, margin)?,
    })
}

/// One row per bath size in `ns`, everything else taken from `template`.
pub fn n_scaling_study(
    template: &SpectralFamily,
    ns: &[usize],
    margin: f64,
) -> Result<Vec<ScalingRow>> {
    ns.iter()
        .map(|&n| scaling_row(&template.with_n_env(n), margin))
        .collect()
}
