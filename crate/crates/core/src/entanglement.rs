// SPDX-License-Identifier: Apache-2.0

//! Partial transposition and the PPT test for `1 x N` Gaussian states.
//!
//! On covariance matrices, transposing the environment flips the sign of
//! every environment momentum: `G -> P G P`. A `1 x N` Gaussian state is
//! separable iff `P G P` is again a valid covariance, i.e. iff its smallest
//! symplectic eigenvalue is at least one.

use alloc::vec::Vec;

use nalgebra::{DMatrix, Matrix2, Matrix4};

use crate::symplectic::{symplectic_spectrum, CovarianceMatrix};
use crate::{Error, Result};

/// Relative slack on the `lambda` discriminant before a block is rejected.
const DISCRIMINANT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separability {
    Separable,
    Entangled,
    /// Within the numerical band just below the PPT boundary.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementVerdict {
    pub separability: Separability,
    /// Smallest symplectic eigenvalue of the partial transpose.
    pub min_pt_symplectic: f64,
    pub log_negativity: f64,
}

impl EntanglementVerdict {
    /// Classifies `min_pt`: separable at or above `1 - tol`, entangled below
    /// `1 - 3 tol`, inconclusive in between. Separable verdicts carry zero
    /// log-negativity.
    pub fn from_min_pt(min_pt: f64, tol: f64) -> Self {
        let separability = if min_pt >= 1.0 - tol {
            Separability::Separable
        } else if min_pt < 1.0 - 3.0 * tol {
            Separability::Entangled
        } else {
            Separability::Inconclusive
        };
        // rounding below one is not negativity
        let log_negativity = match separability {
            Separability::Separable => 0.0,
            _ => log_negativity(min_pt),
        };
        Self {
            separability,
            min_pt_symplectic: min_pt,
            log_negativity,
        }
    }

    pub fn is_separable(&self) -> bool {
        self.separability == Separability::Separable
    }

    pub fn is_entangled(&self) -> bool {
        self.separability == Separability::Entangled
    }
}

/// `max(0, -ln nu)` for the smallest PT symplectic eigenvalue `nu`.
pub fn log_negativity(min_pt_symplectic: f64) -> f64 {
    (-libm::log(min_pt_symplectic)).max(0.0)
}

fn environment_of(system: &[usize], modes: usize) -> Result<Vec<bool>> {
    let mut in_system = alloc::vec![false; modes];
    for &m in system {
        if m >= modes {
            return Err(Error::ModeOutOfRange { mode: m, modes });
        }
        in_system[m] = true;
    }
    let count = in_system.iter().filter(|&&s| s).count();
    if count == 0 || count == modes {
        return Err(Error::EmptyBipartition);
    }
    Ok(in_system.into_iter().map(|s| !s).collect())
}

/// `P G P`, with `P` negating the momenta of every mode not in `system`.
pub fn partial_transpose(m: &DMatrix<f64>, system: &[usize]) -> Result<DMatrix<f64>> {
    let modes = m.nrows() / 2;
    let env = environment_of(system, modes)?;
    let sign = |i: usize| if i % 2 == 1 && env[i / 2] { -1.0 } else { 1.0 };
    Ok(DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| {
        sign(r) * sign(c) * m[(r, c)]
    }))
}

/// PPT verdict with the system on mode 0 and the bath on everything else.
pub fn ppt_verdict(gamma: &CovarianceMatrix, tol: f64) -> Result<EntanglementVerdict> {
    ppt_verdict_with(gamma, &[0], tol)
}

/// PPT verdict for an arbitrary bipartition in which one side is a single
/// mode. Other bipartitions are refused: there PPT is only necessary.
pub fn ppt_verdict_with(
    gamma: &CovarianceMatrix,
    system: &[usize],
    tol: f64,
) -> Result<EntanglementVerdict> {
    let modes = gamma.modes();
    let env = environment_of(system, modes)?;
    let env_count = env.iter().filter(|&&e| e).count();
    let sys_count = modes - env_count;
    if sys_count > 1 && env_count > 1 {
        return Err(Error::UnsupportedBipartition {
            system: sys_count,
            environment: env_count,
        });
    }
    let pt = partial_transpose(gamma.as_matrix(), system)?;
    let min_pt = symplectic_spectrum(&pt)?[0];
    Ok(EntanglementVerdict::from_min_pt(min_pt, tol))
}

/// Two-mode covariance `[[A, C], [C^T, B]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeBlock {
    pub a: Matrix2<f64>,
    pub b: Matrix2<f64>,
    pub c: Matrix2<f64>,
}

impl TwoModeBlock {
    pub fn new(a: Matrix2<f64>, b: Matrix2<f64>, c: Matrix2<f64>) -> Self {
        Self { a, b, c }
    }

    pub fn from_matrix(m: &Matrix4<f64>) -> Self {
        Self {
            a: m.fixed_view::<2, 2>(0, 0).into_owned(),
            b: m.fixed_view::<2, 2>(2, 2).into_owned(),
            c: m.fixed_view::<2, 2>(0, 2).into_owned(),
        }
    }

    pub fn assemble(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.a);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.b);
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&self.c);
        m.fixed_view_mut::<2, 2>(2, 0)
            .copy_from(&self.c.transpose());
        m
    }

    pub fn to_covariance(&self) -> Result<CovarianceMatrix> {
        CovarianceMatrix::new(DMatrix::from_iterator(
            4,
            4,
            self.assemble().iter().copied(),
        ))
    }

    /// `det A + det B - 2 det C`, the seralian of the partial transpose.
    pub fn pt_seralian(&self) -> f64 {
        self.a.determinant() + self.b.determinant() - 2.0 * self.c.determinant()
    }

    /// `tr(A J C J B J C^T J)`, the cross term of the block determinant.
    fn cross_invariant(&self) -> f64 {
        let j = Matrix2::new(0.0, 1.0, -1.0, 0.0);
        (self.a * j * self.c * j * self.b * j * self.c.transpose() * j).trace()
    }

    /// `det A det B + (det C)^2 - tr(A J C J B J C^T J)`.
    pub fn determinant(&self) -> f64 {
        let det_c = self.c.determinant();
        self.a.determinant() * self.b.determinant() + det_c * det_c - self.cross_invariant()
    }

    /// `d^2/4 - det g` with `d` the PT seralian, expanded as
    /// `((det A - det B)/2)^2 - det C (det A + det B) + tr(A J C J B J C^T J)`
    /// so that it is exact for uncorrelated blocks.
    pub fn pt_discriminant(&self) -> f64 {
        let (da, db) = (self.a.determinant(), self.b.determinant());
        let half = 0.5 * (da - db);
        half * half - self.c.determinant() * (da + db) + self.cross_invariant()
    }
}

/// The system and bath mode `env_mode` (zero-based global index, so
/// `1..=N`) as a two-mode block. Reduction of a Gaussian state is just the
/// principal submatrix.
pub fn reduce_two_mode(gamma: &CovarianceMatrix, env_mode: usize) -> Result<TwoModeBlock> {
    let modes = gamma.modes();
    if env_mode == 0 || env_mode >= modes {
        return Err(Error::ModeOutOfRange {
            mode: env_mode,
            modes,
        });
    }
    Ok(TwoModeBlock {
        a: gamma.mode_block(0, 0),
        b: gamma.mode_block(env_mode, env_mode),
        c: gamma.mode_block(0, env_mode),
    })
}

/// Smallest eigenvalue of `(i J^{T_E} g)^2`, the squared smallest PT
/// symplectic eigenvalue: `d/2 - sqrt(d^2/4 - det g)`. Below one iff the
/// two modes are entangled.
///
/// Evaluated as `det g / (d/2 + sqrt(d^2/4 - det g))` with the
/// discriminant expanded in block invariants; the textbook form cancels
/// badly for hot modes and near-pure blocks.
pub fn lambda_of_block(block: &TwoModeBlock) -> Result<f64> {
    let d = block.pt_seralian();
    let det = block.determinant();
    let quarter = 0.25 * d * d;
    let disc = block.pt_discriminant();
    if d <= 0.0 || det <= 0.0 || disc < -DISCRIMINANT_TOL * quarter.max(1.0) {
        return Err(Error::InvalidBlock(disc));
    }
    Ok(det / (0.5 * d + libm::sqrt(disc.max(0.0))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::make_pure_gaussian;

    fn two_mode_squeezed(r: f64) -> CovarianceMatrix {
        let (ch, sh) = (libm::cosh(2.0 * r), libm::sinh(2.0 * r));
        let block = TwoModeBlock::new(
            Matrix2::identity() * ch,
            Matrix2::identity() * ch,
            Matrix2::new(sh, 0.0, 0.0, -sh),
        );
        block.to_covariance().unwrap()
    }

    #[test]
    fn identity_is_fixed_by_transposition() {
        let id = DMatrix::<f64>::identity(6, 6);
        assert_eq!(partial_transpose(&id, &[0]).unwrap(), id);
    }

    #[test]
    fn squeezed_correlations_flip_sign() {
        let r = 0.5;
        let g = two_mode_squeezed(r);
        let pt = partial_transpose(g.as_matrix(), &[0]).unwrap();
        let sh = libm::sinh(2.0 * r);
        assert_eq!(pt[(0, 2)], sh);
        assert_eq!(pt[(1, 3)], sh);
        assert_eq!(pt[(1, 1)], g.as_matrix()[(1, 1)]);
    }

    #[test]
    fn transposition_is_an_involution() {
        let g = two_mode_squeezed(0.8).direct_sum(&make_pure_gaussian(0.2, 0.4));
        let twice =
            partial_transpose(&partial_transpose(g.as_matrix(), &[0]).unwrap(), &[0]).unwrap();
        assert_eq!(&twice, g.as_matrix());
    }

    #[test]
    fn bipartition_errors() {
        let g = CovarianceMatrix::vacuum(4);
        assert!(matches!(
            partial_transpose(g.as_matrix(), &[]),
            Err(Error::EmptyBipartition)
        ));
        assert!(matches!(
            partial_transpose(g.as_matrix(), &[0, 1, 2, 3]),
            Err(Error::EmptyBipartition)
        ));
        assert!(matches!(
            ppt_verdict_with(&g, &[0, 1], 1e-9),
            Err(Error::UnsupportedBipartition {
                system: 2,
                environment: 2
            })
        ));
        // N x 1 is still decisive
        assert!(ppt_verdict_with(&g, &[0, 1, 2], 1e-9).is_ok());
        assert!(matches!(
            ppt_verdict_with(&g, &[7], 1e-9),
            Err(Error::ModeOutOfRange { mode: 7, modes: 4 })
        ));
    }

    #[test]
    fn product_states_are_separable() {
        let g = make_pure_gaussian(1.2, 0.3)
            .direct_sum(&CovarianceMatrix::new(DMatrix::identity(4, 4) * 3.0).unwrap());
        let v = ppt_verdict(&g, 1e-9).unwrap();
        assert!(v.is_separable());
        assert_eq!(v.log_negativity, 0.0);

        let v = ppt_verdict(&CovarianceMatrix::vacuum(5), 1e-9).unwrap();
        assert!(v.is_separable());
        assert!((v.min_pt_symplectic - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_mode_squeezed_is_entangled() {
        let r = 0.5;
        let v = ppt_verdict(&two_mode_squeezed(r), 1e-9).unwrap();
        assert!(v.is_entangled());
        assert!((v.min_pt_symplectic - libm::exp(-1.0)).abs() < 1e-12);
        assert!((v.log_negativity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn verdict_bands() {
        let tol = 1e-9;
        assert_eq!(
            EntanglementVerdict::from_min_pt(1.0, tol).separability,
            Separability::Separable
        );
        assert_eq!(
            EntanglementVerdict::from_min_pt(1.0 - tol, tol).separability,
            Separability::Separable
        );
        assert_eq!(
            EntanglementVerdict::from_min_pt(1.0 - 2.0 * tol, tol).separability,
            Separability::Inconclusive
        );
        assert_eq!(
            EntanglementVerdict::from_min_pt(1.0 - 4.0 * tol, tol).separability,
            Separability::Entangled
        );
    }

    #[test]
    fn reduction_examples() {
        let g = make_pure_gaussian(0.7, 0.9)
            .direct_sum(&CovarianceMatrix::vacuum(1))
            .direct_sum(&CovarianceMatrix::new(DMatrix::identity(2, 2) * 2.0).unwrap());
        let block = reduce_two_mode(&g, 2).unwrap();
        assert_eq!(block.c, Matrix2::zeros());
        assert!((block.a.determinant() - 1.0).abs() < 1e-12);
        assert_eq!(block.b, Matrix2::identity() * 2.0);
        assert!(reduce_two_mode(&g, 0).is_err());
        assert!(reduce_two_mode(&g, 3).is_err());
    }

    #[test]
    fn lambda_examples() {
        let vac = TwoModeBlock::new(Matrix2::identity(), Matrix2::identity(), Matrix2::zeros());
        assert!((lambda_of_block(&vac).unwrap() - 1.0).abs() < 1e-15);

        let a = make_pure_gaussian(0.9, 0.4).mode_block(0, 0);
        let hot = TwoModeBlock::new(a, Matrix2::new(40.0, 0.0, 0.0, 2.5), Matrix2::zeros());
        assert!((lambda_of_block(&hot).unwrap() - 1.0).abs() < 1e-12);

        for &r in &[0.0, 0.1, 0.5, 1.0, 2.0] {
            let block = reduce_two_mode(&two_mode_squeezed(r), 1).unwrap();
            assert!(
                (block.pt_seralian() - 2.0 * libm::cosh(4.0 * r)).abs()
                    < 1e-9 * libm::cosh(4.0 * r)
            );
            assert!((lambda_of_block(&block).unwrap() - libm::exp(-4.0 * r)).abs() < 1e-12);
        }
    }

    #[test]
    fn block_invariants_match_dense_determinant() {
        let m = Matrix4::new(
            3.1, 0.2, 0.7, -0.4, //
            0.2, 1.9, 0.3, 0.5, //
            0.7, 0.3, 2.6, 0.1, //
            -0.4, 0.5, 0.1, 1.4,
        );
        let block = TwoModeBlock::from_matrix(&m);
        assert_eq!(block.assemble(), m);
        let det = m.determinant();
        assert!((block.determinant() - det).abs() < 1e-12 * det);
        let d = block.pt_seralian();
        assert!((block.pt_discriminant() - (0.25 * d * d - det)).abs() < 1e-12 * d * d);
    }

    #[test]
    fn lambda_rejects_unphysical_blocks() {
        // correlations far beyond what the marginals allow
        let bad = TwoModeBlock::new(
            Matrix2::identity(),
            Matrix2::identity(),
            Matrix2::new(5.0, 0.0, 0.0, 5.0),
        );
        assert!(matches!(lambda_of_block(&bad), Err(Error::InvalidBlock(_))));
    }
}
