// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use nalgebra::DMatrix;
use qbm_core::{lambda_of_block, partial_transpose, ppt_verdict, CovarianceMatrix, Separability};
use rand::Rng;

#[test]
fn lambda_agrees_with_pt_spectrum() {
    let mut r = rng(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let block = random_block(&mut r);
        let lambda = lambda_of_block(&block).unwrap();
        let nu = ppt_verdict(&block.to_covariance().unwrap(), 1e-9)
            .unwrap()
            .min_pt_symplectic;
        worst = worst.max((lambda - nu * nu).abs());
    }
    assert!(worst <= 1e-10, "worst {worst}");
}

#[test]
fn partial_transpose_is_an_involution() {
    let mut r = rng(12);
    for modes in 2..6 {
        let g = random_covariance(&mut r, modes, 0.5);
        let back = partial_transpose(&partial_transpose(&g, &[0]).unwrap(), &[0]).unwrap();
        assert_eq!(back, g);
    }
}

#[test]
fn dominated_product_states_are_separable() {
    let mut r = rng(13);
    for _ in 0..200 {
        let n = r.random_range(1..6);
        let s = random_covariance(&mut r, 1, 0.8);
        let e = random_covariance(&mut r, n, 0.5);
        let mut g = DMatrix::zeros(2 * n + 2, 2 * n + 2);
        g.view_mut((0, 0), (2, 2)).copy_from(&s);
        g.view_mut((2, 2), (2 * n, 2 * n)).copy_from(&e);
        let a = DMatrix::from_fn(2 * n + 2, 2 * n + 2, |_, _| r.random_range(-0.5..0.5));
        let q = &a * a.transpose();
        let verdict = ppt_verdict(&CovarianceMatrix::new(g + q).unwrap(), 1e-9).unwrap();
        assert_eq!(verdict.separability, Separability::Separable);
        assert_eq!(verdict.log_negativity, 0.0);
    }
}

#[test]
fn squeezing_gives_positive_negativity() {
    for r in [0.01, 0.1, 1.0] {
        let (c, s) = ((2.0f64 * r).cosh(), (2.0f64 * r).sinh());
        let g = DMatrix::from_row_slice(
            4,
            4,
            &[
                c, 0.0, s, 0.0, 0.0, c, 0.0, -s, s, 0.0, c, 0.0, 0.0, -s, 0.0, c,
            ],
        );
        let v = ppt_verdict(&CovarianceMatrix::new(g).unwrap(), 1e-9).unwrap();
        assert!(v.is_entangled() && v.log_negativity > 0.0);
    }
}
