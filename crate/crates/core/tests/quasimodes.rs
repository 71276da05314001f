use std::f64::consts::{FRAC_1_SQRT_2, PI};

use approx::assert_abs_diff_eq;
use qci_core::cutoff::{Cutoff, Profile};
use qci_core::grid::{Axis, GridFunction, GridSpec};
use qci_core::quantization::hbar_fourier;
use qci_core::quasimode::{
    elliptic_normalized, eval_block, eval_product, microlocalization_grid, microlocalize, BlockSpec, QuasimodeSpec,
};
use qci_core::special::hermite_poly;
use qci_core::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn hermite_low_orders() {
    assert_eq!(hermite_poly(0, 3.7).unwrap(), 1.0);
    assert_eq!(hermite_poly(1, 2.0).unwrap(), 4.0);
    let x: f64 = 1.3;
    let expanded = 32.0 * x.powi(5) - 160.0 * x.powi(3) + 120.0 * x;
    assert_abs_diff_eq!(hermite_poly(5, x).unwrap(), expanded, epsilon = 1e-10 * expanded.abs());
}

#[test]
fn hermite_degree_cap() {
    assert!(hermite_poly(201, 0.1).is_err());
}

#[test]
fn elliptic_ground_value_at_origin() {
    let v = eval_block(&BlockSpec::Elliptic { n: 0 }, 0.01, &[0.0]).unwrap();
    assert_abs_diff_eq!(v.re, 0.01f64.powf(-0.25), epsilon = 1e-12);
    assert_abs_diff_eq!(v.im, 0.0);
}

#[test]
fn regular_block_is_a_phase() {
    let v = eval_block(&BlockSpec::Regular { m: 3 }, 0.01, &[PI / 2.0]).unwrap();
    assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(v.im, -1.0, epsilon = 1e-14);
}

#[test]
fn hyperbolic_modulus_against_closed_form() {
    let hbar: f64 = 0.01;
    let block = BlockSpec::hyperbolic(1.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
    let y = 0.5;
    let v = eval_block(&block, hbar, &[y]).unwrap();
    let modulus = hbar.ln().abs().powf(-0.5) * y.powf(-0.5);
    assert_abs_diff_eq!(v.norm(), modulus, epsilon = 1e-12);
    assert_abs_diff_eq!(v.arg(), (1.0 * y.ln()).sin().atan2((1.0 * y.ln()).cos()), epsilon = 1e-12);
    // the c₋ half vanishes on y > 0 and the c₊ half on y < 0
    assert_eq!(eval_block(&block, hbar, &[-0.5]).unwrap(), c(0.0, 0.0));
    assert_eq!(eval_block(&block, hbar, &[0.0]).unwrap(), c(0.0, 0.0));
}

#[test]
fn unbalanced_hyperbolic_coefficients_are_rejected() {
    assert!(BlockSpec::hyperbolic(0.0, c(1.0, 0.0), c(1.0, 0.0)).is_err());
}

#[test]
fn product_of_regular_zero_is_one() {
    let spec = QuasimodeSpec::single(BlockSpec::Regular { m: 0 }, 0.1).unwrap();
    for theta in [0.0, 1.0, 4.0] {
        assert_eq!(eval_product(&spec, &[theta]).unwrap(), c(1.0, 0.0));
    }
}

#[test]
fn elliptic_times_regular() {
    let hbar = 0.04;
    let spec = QuasimodeSpec::new(vec![BlockSpec::Elliptic { n: 0 }, BlockSpec::Regular { m: 2 }], hbar).unwrap();
    let v = eval_product(&spec, &[0.0, PI]).unwrap();
    let want = hbar.powf(-0.25);
    assert_abs_diff_eq!(v.re, want, epsilon = 1e-12);
    assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-12);
}

#[test]
fn hyperbolic_times_elliptic_against_closed_forms() {
    let hbar: f64 = 1e-2;
    let spec = QuasimodeSpec::new(
        vec![BlockSpec::hyperbolic(0.0, c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap(), BlockSpec::Elliptic { n: 1 }],
        hbar,
    )
    .unwrap();
    let (y1, y2) = (1.0, hbar.sqrt());
    let hyper = FRAC_1_SQRT_2 * hbar.ln().abs().powf(-0.5);
    // ħ^{-1/4} H₁(x) e^{-x²/2} / √2 at x = 1
    let ell = hbar.powf(-0.25) * 2f64.sqrt() * (-0.5f64).exp();
    assert_abs_diff_eq!(eval_product(&spec, &[y1, y2]).unwrap().norm(), hyper * ell, epsilon = 1e-10);
}

#[test]
fn product_is_multiplicative() {
    let hbar = 0.02;
    let a = BlockSpec::hyperbolic(0.7, c(0.6, 0.0), c(0.0, 0.8)).unwrap();
    let b = BlockSpec::Regular { m: -4 };
    let spec = QuasimodeSpec::new(vec![a.clone(), b.clone()], hbar).unwrap();
    for (y, t) in [(0.3, 1.1), (-0.8, 2.5), (1.7, -0.4)] {
        let joint = eval_product(&spec, &[y, t]).unwrap();
        let split = eval_block(&a, hbar, &[y]).unwrap() * eval_block(&b, hbar, &[t]).unwrap();
        assert_eq!(joint, split);
    }
}

#[test]
fn dimension_mismatch_is_reported() {
    let spec = QuasimodeSpec::single(BlockSpec::Elliptic { n: 0 }, 0.1).unwrap();
    assert!(eval_product(&spec, &[0.0, 1.0]).is_err());
    let dims = QuasimodeSpec::new(
        vec![BlockSpec::ComplexHyperbolic { s1: 0.0, k: 1 }, BlockSpec::Regular { m: 1 }, BlockSpec::Elliptic { n: 2 }],
        0.1,
    )
    .unwrap()
    .dims();
    assert_eq!(dims.n_total, 4);
}

#[test]
fn microlocalized_regular_block_is_the_cutoff() {
    let hbar = 1e-3;
    let spec = QuasimodeSpec::single(BlockSpec::Regular { m: 0 }, hbar).unwrap();
    let cutoff = Cutoff::new(Profile::Plateau, 0.25, 0.0, vec![0.0]).unwrap();
    let grid = microlocalization_grid(&spec, &cutoff).unwrap();
    let psi = microlocalize(&spec, &cutoff, &grid).unwrap();
    let r = cutoff.radius(hbar);
    let mut checked = 0;
    for i in 0..grid.len() {
        let x: f64 = grid.point(i)[0];
        let chi = cutoff.eval_x_axis(hbar, 0, x);
        if x.abs() < 0.5 * r - 0.02 {
            assert_eq!(chi, 1.0);
            assert!((psi.values[i] - c(1.0, 0.0)).norm() < 2e-3, "x = {x}: {}", psi.values[i]);
            checked += 1;
        } else if x.abs() >= r {
            assert_eq!(psi.values[i], c(0.0, 0.0));
        }
    }
    assert!(checked > 50);
}

#[test]
fn microlocalized_elliptic_ground_state_keeps_unit_norm() {
    let hbar = 1e-3;
    let spec = QuasimodeSpec::single(BlockSpec::Elliptic { n: 0 }, hbar).unwrap();
    let cutoff = Cutoff::new(Profile::Bump, 0.2, 0.0, vec![0.0]).unwrap();
    let grid = microlocalization_grid(&spec, &cutoff).unwrap();
    let psi = microlocalize(&spec, &cutoff, &grid).unwrap();
    // the raw block has norm π^{1/4}; the cutoffs keep nearly all of it
    let kept = psi.norm_l2() / PI.powf(0.25);
    assert!((0.95..=1.0).contains(&kept), "{kept}");
    assert_abs_diff_eq!(psi.normalized().norm_l2(), 1.0, epsilon = 1e-12);
}

#[test]
fn microlocalized_hyperbolic_norm_is_order_one() {
    let hbar = 1e-3;
    let spec = QuasimodeSpec::single(BlockSpec::hyperbolic_even(0.0), hbar).unwrap();
    let cutoff = Cutoff::microlocalizer();
    let grid = microlocalization_grid(&spec, &cutoff).unwrap();
    let n = microlocalize(&spec, &cutoff, &grid).unwrap().norm_l2();
    assert!((0.5..=2.0).contains(&n), "{n}");
}

#[test]
fn microlocalized_norms_stay_bounded_across_scales() {
    let cutoff = Cutoff::microlocalizer();
    for hbar in [1e-3, 1e-4, 1e-5] {
        for block in [BlockSpec::Elliptic { n: 0 }, BlockSpec::Elliptic { n: 3 }, BlockSpec::hyperbolic_even(0.5)] {
            let spec = QuasimodeSpec::single(block.clone(), hbar).unwrap();
            let grid = microlocalization_grid(&spec, &cutoff).unwrap();
            let n = microlocalize(&spec, &cutoff, &grid).unwrap().norm_l2();
            assert!((1.0 / 3.0..=3.0).contains(&n), "{block:?} at {hbar}: {n}");
        }
    }
}

#[test]
fn coarse_microlocalization_grid_is_rejected() {
    let hbar = 1e-3;
    let spec = QuasimodeSpec::single(BlockSpec::Elliptic { n: 0 }, hbar).unwrap();
    let coarse = GridSpec::line(Axis::cell_centered(-0.5, 0.5, 0.05).unwrap());
    assert!(microlocalize(&spec, &Cutoff::microlocalizer(), &coarse).is_err());
}

#[test]
fn fourier_transform_preserves_hermite_modulus() {
    for hbar in [1e-1, 1e-2, 1e-3, 1e-4] {
        let s = f64::sqrt(hbar);
        let grid = GridSpec::line(Axis::cell_centered(-14.0 * s, 14.0 * s, s / 12.0).unwrap());
        for n in 0..=10usize {
            let u = GridFunction::from_fn(grid.clone(), hbar, |y| c(elliptic_normalized(n, hbar, y[0]), 0.0)).unwrap();
            let f = hbar_fourier(&u).unwrap();
            let peak = hbar.powf(-0.25);
            for i in 0..f.values.len() {
                let eta = f.grid.point(i)[0];
                let want = elliptic_normalized(n, hbar, eta).abs();
                assert!(
                    (f.values[i].norm() - want).abs() < 1e-6 * peak,
                    "n={n} hbar={hbar} eta={eta}: {} vs {want}",
                    f.values[i].norm()
                );
            }
        }
    }
}
