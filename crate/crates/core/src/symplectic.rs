// SPDX-License-Identifier: Apache-2.0

//! Covariance-matrix algebra: the symplectic form, validity and purity,
//! normal modes, Gibbs states, the exact quadratic flow and symplectic
//! spectra.
//!
//! The covariance of a state is `G_jk = <{O_j, O_k}>` at zero first moments,
//! so the vacuum of a unit-frequency oscillator is the identity and physical
//! states satisfy `G + i S >= 0` for the symplectic form `S`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix2, SymmetricEigen};

use crate::linalg;
use crate::model::{OscillatorNetwork, PotentialMatrix, QuadraticForm};
use crate::{Error, Result};

/// Block-diagonal symplectic form with `n` copies of `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut s = DMatrix::zeros(2 * modes, 2 * modes);
    for j in 0..modes {
        s[(2 * j, 2 * j + 1)] = 1.0;
        s[(2 * j + 1, 2 * j)] = -1.0;
    }
    s
}

/// `f(x) = 1 + 2 / (e^x - 1) = coth(x / 2)`: the thermal inflation of a mode
/// at `x = beta * omega`. `x = +inf` gives the ground state.
pub fn thermal_factor(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::NonPositive {
            what: "thermal argument",
            value: x,
        });
    }
    Ok(1.0 + 2.0 / libm::expm1(x))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::NonPositive {
            what: "inverse temperature",
            value: beta,
        });
    }
    Ok(())
}

/// Symplectic eigenvalues of a symmetric positive-definite `2n x 2n` matrix,
/// ascending.
///
/// They are the moduli of the eigenvalues `+-i d_j` of `S G`. When `G` is
/// badly conditioned (`cond > 1e8`) the same values are read off the real
/// Schur form of the skew-symmetric `G^{1/2} S G^{1/2}` instead.
pub fn symplectic_spectrum(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = m.nrows();
    if n != m.ncols() || !n.is_multiple_of(2) || n == 0 {
        return Err(Error::DimensionMismatch {
            expected: n + n % 2,
            found: m.ncols(),
        });
    }
    let scale = linalg::max_abs(m).max(1.0);
    let asym = linalg::asymmetry(m);
    if asym > 1e-10 * scale {
        return Err(Error::NotSymmetric(asym));
    }

    let eig = SymmetricEigen::new(m.clone());
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for &e in eig.eigenvalues.iter() {
        lo = lo.min(e);
        hi = hi.max(e);
    }
    if lo <= 0.0 {
        return Err(Error::NotPositive(lo));
    }

    let form = symplectic_form(n / 2);
    let target = if hi / lo > 1e8 {
        let root = &eig.eigenvectors
            * DMatrix::from_diagonal(&eig.eigenvalues.map(libm::sqrt))
            * eig.eigenvectors.transpose();
        &root * form * &root
    } else {
        form * m
    };

    let mut moduli: Vec<f64> = target
        .complex_eigenvalues()
        .iter()
        .map(|z| libm::hypot(z.re, z.im))
        .collect();
    moduli.sort_by(f64::total_cmp);
    Ok(moduli
        .chunks_exact(2)
        .map(|pair| 0.5 * (pair[0] + pair[1]))
        .collect())
}

/// A symmetric `2n x 2n` matrix satisfying the uncertainty relation.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(DMatrix<f64>);

impl CovarianceMatrix {
    /// Default slack on the smallest symplectic eigenvalue.
    pub const DEFAULT_TOL: f64 = 1e-9;

    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(m, Self::DEFAULT_TOL)
    }

    /// Validates with `min symplectic eigenvalue >= 1 - tol`. Rounding-level
    /// asymmetry is averaged away.
    pub fn with_tolerance(mut m: DMatrix<f64>, tol: f64) -> Result<Self> {
        let spectrum = symplectic_spectrum(&m)?;
        if spectrum[0] < 1.0 - tol {
            return Err(Error::UncertaintyViolated(spectrum[0]));
        }
        linalg::symmetrize(&mut m);
        Ok(Self(m))
    }

    pub(crate) fn from_matrix_unchecked(m: DMatrix<f64>) -> Self {
        Self(m)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self(DMatrix::identity(2 * modes, 2 * modes))
    }

    pub fn from_block(block: Matrix2<f64>) -> Result<Self> {
        Self::new(DMatrix::from_iterator(2, 2, block.iter().copied()))
    }

    pub fn modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    /// `2 x 2` block coupling modes `i` and `j`.
    pub fn mode_block(&self, i: usize, j: usize) -> Matrix2<f64> {
        Matrix2::new(
            self.0[(2 * i, 2 * j)],
            self.0[(2 * i, 2 * j + 1)],
            self.0[(2 * i + 1, 2 * j)],
            self.0[(2 * i + 1, 2 * j + 1)],
        )
    }

    /// Product state `self (+) other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        Self(linalg::direct_sum(&self.0, &other.0))
    }

    /// Reduced state of the listed modes (in the given order).
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        let total = self.modes();
        if let Some(&mode) = modes.iter().find(|&&m| m >= total) {
            return Err(Error::ModeOutOfRange { mode, modes: total });
        }
        let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        Ok(Self(DMatrix::from_fn(idx.len(), idx.len(), |r, c| {
            self.0[(idx[r], idx[c])]
        })))
    }

    pub fn symplectic_spectrum(&self) -> Vec<f64> {
        symplectic_spectrum(&self.0).expect("covariance matrices are positive definite")
    }

    pub fn min_symplectic_eigenvalue(&self) -> f64 {
        self.symplectic_spectrum()[0]
    }

    /// `max |(S G)^2 + 1|`, zero exactly for pure states.
    pub fn purity_residual(&self) -> f64 {
        let sg = symplectic_form(self.modes()) * &self.0;
        let sq = &sg * &sg + DMatrix::<f64>::identity(sg.nrows(), sg.nrows());
        linalg::max_abs(&sq)
    }
}

/// True iff `(S G)^2 = -1` to within `tol` entrywise.
pub fn is_pure(gamma: &CovarianceMatrix, tol: f64) -> bool {
    gamma.purity_residual() <= tol
}

/// Pure single-mode state `R(theta) diag(e^{2r}, e^{-2r}) R(theta)^T`.
pub fn make_pure_gaussian(r: f64, theta: f64) -> CovarianceMatrix {
    let (s, c) = libm::sincos(theta);
    let rot = Matrix2::new(c, -s, s, c);
    let squeeze = Matrix2::new(libm::exp(2.0 * r), 0.0, 0.0, libm::exp(-2.0 * r));
    let g = rot * squeeze * rot.transpose();
    let mut m = DMatrix::from_iterator(2, 2, g.iter().copied());
    linalg::symmetrize(&mut m);
    CovarianceMatrix(m)
}

/// `tr(W G) / 4`, the mean energy at zero first moments.
pub fn mean_energy(gamma: &CovarianceMatrix, form: &QuadraticForm) -> Result<f64> {
    let w = form.as_matrix();
    if w.nrows() != gamma.0.nrows() {
        return Err(Error::DimensionMismatch {
            expected: w.nrows(),
            found: gamma.0.nrows(),
        });
    }
    Ok(w.component_mul(&gamma.0).sum() / 4.0)
}

/// Orthogonal diagonalization of the potential.
///
/// `mode_matrix` has the eigenvectors of `2V` as columns, so
/// `M^T (2V) M = diag(w~^2)` with `w~` ascending. Mode coordinates are
/// `o~ = T o` where `T` applies `M^T` to positions and to momenta alike;
/// `T` is orthogonal and symplectic at once.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalModes {
    mode_matrix: DMatrix<f64>,
    frequencies: Vec<f64>,
    embedded: DMatrix<f64>,
}

impl NormalModes {
    pub fn mode_matrix(&self) -> &DMatrix<f64> {
        &self.mode_matrix
    }

    /// Normal-mode frequencies `w~_j`, ascending.
    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    /// The phase-space transformation `T`.
    pub fn embedded(&self) -> &DMatrix<f64> {
        &self.embedded
    }

    pub fn modes(&self) -> usize {
        self.frequencies.len()
    }

    /// `T G T^T`.
    pub fn to_mode_coordinates(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        &self.embedded * m * self.embedded.transpose()
    }

    /// `T^T G~ T`.
    pub fn from_mode_coordinates(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        self.embedded.transpose() * m * &self.embedded
    }

    /// Diagonal Gibbs covariance in mode coordinates:
    /// `f(beta w~)/w~` on positions and `f(beta w~) w~` on momenta.
    pub fn gibbs_in_mode_coordinates(&self, beta: f64) -> Result<DMatrix<f64>> {
        check_beta(beta)?;
        let mut d = DMatrix::zeros(2 * self.modes(), 2 * self.modes());
        for (j, &w) in self.frequencies.iter().enumerate() {
            let f = thermal_factor(beta * w)?;
            d[(2 * j, 2 * j)] = f / w;
            d[(2 * j + 1, 2 * j + 1)] = f * w;
        }
        Ok(d)
    }
}

pub fn normal_modes(v: &PotentialMatrix) -> Result<NormalModes> {
    let n = v.dim();
    let eig = SymmetricEigen::new(2.0 * v.as_matrix());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let lowest = eig.eigenvalues[order[0]];
    if lowest <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: 0.5 * lowest,
        });
    }

    let mode_matrix = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    let frequencies = order
        .iter()
        .map(|&k| libm::sqrt(eig.eigenvalues[k]))
        .collect();
    let mut embedded = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let t = mode_matrix[(j, i)];
            embedded[(2 * i, 2 * j)] = t;
            embedded[(2 * i + 1, 2 * j + 1)] = t;
        }
    }
    Ok(NormalModes {
        mode_matrix,
        frequencies,
        embedded,
    })
}

/// Covariance of the Gibbs state `exp(-beta H)` for the modes' Hamiltonian,
/// in the original coordinates.
pub fn gibbs_covariance(modes: &NormalModes, beta: f64) -> Result<CovarianceMatrix> {
    let diag = modes.gibbs_in_mode_coordinates(beta)?;
    let mut g = modes.from_mode_coordinates(&diag);
    linalg::symmetrize(&mut g);
    Ok(CovarianceMatrix(g))
}

/// A real linear symplectic map acting as `G -> S G S^T`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMap(DMatrix<f64>);

impl SymplecticMap {
    pub fn identity(modes: usize) -> Self {
        Self(DMatrix::identity(2 * modes, 2 * modes))
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    /// `max |S J S^T - J|`.
    pub fn symplecticity_defect(&self) -> f64 {
        let form = symplectic_form(self.0.nrows() / 2);
        linalg::max_abs(&(&self.0 * &form * self.0.transpose() - form))
    }

    pub fn apply(&self, gamma: &CovarianceMatrix) -> Result<CovarianceMatrix> {
        if gamma.0.nrows() != self.0.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.0.nrows(),
                found: gamma.0.nrows(),
            });
        }
        let mut g = &self.0 * &gamma.0 * self.0.transpose();
        linalg::symmetrize(&mut g);
        Ok(CovarianceMatrix(g))
    }
}

/// Exact flow of a network, computed once through its normal modes.
#[derive(Debug, Clone)]
pub struct Dynamics {
    modes: NormalModes,
}

impl Dynamics {
    pub fn new(net: &OscillatorNetwork) -> Self {
        let modes = normal_modes(net.potential()).expect("network potential is positive definite");
        Self { modes }
    }

    pub fn normal_modes(&self) -> &NormalModes {
        &self.modes
    }

    /// `S_t = T^T R_t T` with one rotation
    /// `[[cos wt, sin(wt)/w], [-w sin wt, cos wt]]` per normal mode.
    pub fn propagator(&self, t: f64) -> SymplecticMap {
        let n = self.modes.modes();
        if t == 0.0 {
            return SymplecticMap::identity(n);
        }
        let tm = &self.modes.embedded;
        let mut rt = DMatrix::zeros(2 * n, 2 * n);
        for (j, &w) in self.modes.frequencies.iter().enumerate() {
            let (s, c) = libm::sincos(w * t);
            for col in 0..2 * n {
                let (x, p) = (tm[(2 * j, col)], tm[(2 * j + 1, col)]);
                rt[(2 * j, col)] = c * x + s / w * p;
                rt[(2 * j + 1, col)] = -w * s * x + c * p;
            }
        }
        SymplecticMap(tm.transpose() * rt)
    }

    pub fn evolve(&self, gamma0: &CovarianceMatrix, t: f64) -> Result<CovarianceMatrix> {
        let n = self.modes.modes();
        if gamma0.modes() != n {
            return Err(Error::DimensionMismatch {
                expected: 2 * n,
                found: gamma0.0.nrows(),
            });
        }
        if t == 0.0 {
            return Ok(gamma0.clone());
        }
        self.propagator(t).apply(gamma0)
    }
}

pub fn propagator(net: &OscillatorNetwork, t: f64) -> SymplecticMap {
    Dynamics::new(net).propagator(t)
}

/// `G_t = S_t G_0 S_t^T`.
pub fn evolve(
    gamma0: &CovarianceMatrix,
    net: &OscillatorNetwork,
    t: f64,
) -> Result<CovarianceMatrix> {
    Dynamics::new(net).evolve(gamma0, t)
}

/// Generator `K = J W` of the phase-space flow, `d/dt o = K o`, so that
/// `d/dt G = K G + G K^T`.
pub fn flow_generator(net: &OscillatorNetwork) -> DMatrix<f64> {
    symplectic_form(net.modes()) * net.quadratic_form().as_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn form_squares_to_minus_identity() {
        let s = symplectic_form(3);
        assert_eq!(&s * &s, -DMatrix::<f64>::identity(6, 6));
        assert_eq!(s.transpose(), -s);
    }

    #[test]
    fn thermal_factor_values() {
        assert!(close(thermal_factor(50.0).unwrap(), 1.0, 1e-15));
        // 1 + 2/(e - 1)
        assert!(close(
            thermal_factor(1.0).unwrap(),
            2.163_953_413_738_653,
            4e-16
        ));
        let x = 1e-3;
        let laurent = 2.0 / x + x / 6.0;
        assert!((thermal_factor(x).unwrap() / laurent - 1.0).abs() <= 1e-6);
        assert_eq!(thermal_factor(f64::INFINITY).unwrap(), 1.0);
        assert!(thermal_factor(0.0).is_err());
        assert!(thermal_factor(-1.0).is_err());
        assert!(thermal_factor(f64::NAN).is_err());
    }

    #[test]
    fn thermal_factor_is_decreasing_above_one() {
        let xs = [1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0];
        for pair in xs.windows(2) {
            let (a, b) = (
                thermal_factor(pair[0]).unwrap(),
                thermal_factor(pair[1]).unwrap(),
            );
            assert!(a > b && b > 1.0);
        }
    }

    #[test]
    fn spectrum_examples() {
        let spec = symplectic_spectrum(&DMatrix::identity(6, 6)).unwrap();
        assert!(spec.iter().all(|&d| close(d, 1.0, 1e-14)));

        let a = 3.7;
        let squeezed = DMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, 1.0 / a]);
        assert!(close(
            symplectic_spectrum(&squeezed).unwrap()[0],
            1.0,
            1e-14
        ));

        let thermal = DMatrix::<f64>::identity(2, 2) * 2.5;
        assert!(close(symplectic_spectrum(&thermal).unwrap()[0], 2.5, 1e-14));
    }

    #[test]
    fn spectrum_fallback_route_agrees() {
        // cond = 1e10 takes the skew-symmetric route
        let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1e5, 2e-5, 3.0, 3.0]));
        let spec = symplectic_spectrum(&g).unwrap();
        assert!(close(spec[0], 2.0f64.sqrt(), 1e-9), "{spec:?}");
        assert!(close(spec[1], 3.0, 1e-9));
    }

    #[test]
    fn spectrum_rejects_bad_input() {
        assert!(symplectic_spectrum(&DMatrix::zeros(3, 3)).is_err());
        let indefinite = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            symplectic_spectrum(&indefinite),
            Err(Error::NotPositive(_))
        ));
        let skewed = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(
            symplectic_spectrum(&skewed),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn covariance_validation() {
        assert!(CovarianceMatrix::new(DMatrix::identity(2, 2) * 0.5).is_err());
        assert!(CovarianceMatrix::new(DMatrix::identity(4, 4)).is_ok());
    }

    #[test]
    fn purity() {
        assert!(is_pure(&CovarianceMatrix::vacuum(1), 1e-12));
        let sq =
            CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5])).unwrap();
        assert!(is_pure(&sq, 1e-12));
        let th = CovarianceMatrix::new(DMatrix::identity(2, 2) * 2.0).unwrap();
        assert!(!is_pure(&th, 1e-6));
    }

    #[test]
    fn pure_gaussian_examples() {
        assert_eq!(
            make_pure_gaussian(0.0, 0.3).as_matrix(),
            &DMatrix::identity(2, 2)
        );
        let g = make_pure_gaussian(0.5, 0.0);
        assert!(close(g.as_matrix()[(0, 0)], core::f64::consts::E, 1e-15));
        assert!(close(
            g.as_matrix()[(1, 1)],
            1.0 / core::f64::consts::E,
            1e-15
        ));
        for &(r, th) in &[(0.3, 1.1), (1.0, -0.7), (2.0, 2.9)] {
            let g = make_pure_gaussian(r, th);
            assert!(close(g.as_matrix().determinant(), 1.0, 1e-12));
            assert!(is_pure(&g, 1e-10));
        }
    }

    #[test]
    fn mean_energy_examples() {
        let net = OscillatorNetwork::new(vec![1.0], vec![]).unwrap();
        let e = mean_energy(&CovarianceMatrix::vacuum(1), &net.quadratic_form()).unwrap();
        assert!(close(e, 0.5, 1e-15));

        let (w, f) = (1.7, 2.3);
        let net = OscillatorNetwork::new(vec![w], vec![]).unwrap();
        let g = CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[f / w, 0.0, 0.0, f * w]))
            .unwrap();
        assert!(close(
            mean_energy(&g, &net.quadratic_form()).unwrap(),
            f * w / 2.0,
            1e-14
        ));

        let two = OscillatorNetwork::uncoupled(vec![1.0, 1.0]).unwrap();
        assert!(mean_energy(&g, &two.quadratic_form()).is_err());
    }

    #[test]
    fn normal_modes_examples() {
        let net = OscillatorNetwork::uncoupled(vec![2.0, 0.5, 1.0]).unwrap();
        let nm = normal_modes(net.potential()).unwrap();
        assert_eq!(nm.frequencies().len(), 3);
        for (got, want) in nm.frequencies().iter().zip([0.5, 1.0, 2.0]) {
            assert!(close(*got, want, 1e-14));
        }
        // a signed permutation
        for v in nm.mode_matrix().iter() {
            assert!(close(v.abs(), 0.0, 1e-14) || close(v.abs(), 1.0, 1e-14));
        }

        let net = OscillatorNetwork::new(vec![1.0, 1.0], vec![0.2]).unwrap();
        let nm = normal_modes(net.potential()).unwrap();
        assert!(close(nm.frequencies()[0].powi(2), 0.8, 1e-14));
        assert!(close(nm.frequencies()[1].powi(2), 1.2, 1e-14));
    }

    #[test]
    fn gibbs_single_mode() {
        let net = OscillatorNetwork::new(vec![1.0], vec![]).unwrap();
        let nm = normal_modes(net.potential()).unwrap();
        let g = gibbs_covariance(&nm, 200.0).unwrap();
        assert!((g.as_matrix() - DMatrix::<f64>::identity(2, 2)).abs().max() < 1e-15);

        let net = OscillatorNetwork::new(vec![2.0], vec![]).unwrap();
        let nm = normal_modes(net.potential()).unwrap();
        let g = gibbs_covariance(&nm, 1.0).unwrap();
        // f(2) = 1.3130352854993313
        assert!(close(g.as_matrix()[(0, 0)], 0.656_517_642_749_665_6, 1e-15));
        assert!(close(g.as_matrix()[(1, 1)], 2.626_070_570_998_662_6, 1e-15));
        assert!(gibbs_covariance(&nm, 0.0).is_err());
    }

    #[test]
    fn propagator_identity_and_period() {
        let net = OscillatorNetwork::new(vec![1.0, 1.3, 0.7], vec![0.1, 0.2]).unwrap();
        let dyn_ = Dynamics::new(&net);
        assert_eq!(dyn_.propagator(0.0).as_matrix(), &DMatrix::identity(6, 6));

        let w = 1.9;
        let single = OscillatorNetwork::new(vec![w], vec![]).unwrap();
        let s = propagator(&single, 2.0 * core::f64::consts::PI / w);
        assert!((s.as_matrix() - DMatrix::<f64>::identity(2, 2)).abs().max() < 1e-13);
    }

    #[test]
    fn quarter_period_swaps_quadratures() {
        let (w, a) = (1.6, 2.5);
        let net = OscillatorNetwork::new(vec![w], vec![]).unwrap();
        let g0 =
            CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, 1.0 / a])).unwrap();
        let g = evolve(&g0, &net, core::f64::consts::FRAC_PI_2 / w).unwrap();
        let m = g.as_matrix();
        assert!(close(m[(0, 0)], 1.0 / (a * w * w), 1e-14));
        assert!(close(m[(1, 1)], a * w * w, 1e-14));
        assert!(m[(0, 1)].abs() < 1e-14);
    }

    #[test]
    fn evolve_at_zero_is_exact_and_checks_dims() {
        let net = OscillatorNetwork::new(vec![1.0, 2.0], vec![0.3]).unwrap();
        let g0 = make_pure_gaussian(0.4, 0.2).direct_sum(&CovarianceMatrix::vacuum(1));
        assert_eq!(evolve(&g0, &net, 0.0).unwrap(), g0);
        assert!(evolve(&CovarianceMatrix::vacuum(3), &net, 1.0).is_err());
    }

    #[test]
    fn coupled_gibbs_is_stationary() {
        let net = OscillatorNetwork::new(vec![1.0, 1.0], vec![0.2]).unwrap();
        let dyn_ = Dynamics::new(&net);
        let g = gibbs_covariance(dyn_.normal_modes(), 0.7).unwrap();
        for &t in &[0.3, 2.0, 17.0] {
            let gt = dyn_.evolve(&g, t).unwrap();
            assert!((gt.as_matrix() - g.as_matrix()).abs().max() < 1e-12);
        }
    }

    #[test]
    fn reduce_and_blocks() {
        let g = make_pure_gaussian(0.3, 0.1).direct_sum(&CovarianceMatrix::vacuum(2));
        let r = g.reduce(&[0, 2]).unwrap();
        assert_eq!(r.modes(), 2);
        assert_eq!(r.mode_block(0, 0), g.mode_block(0, 0));
        assert!(g.reduce(&[3]).is_err());
    }
}
