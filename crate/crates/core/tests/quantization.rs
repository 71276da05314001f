use std::f64::consts::PI;

use qci_core::cutoff::{Cutoff, Profile};
use qci_core::grid::{Axis, GridFunction, GridSpec};
use qci_core::quantization::{
    cutoff_symbol, garding_deficit, matrix_element, quantize, small_scale_cutoff, Symbol, SMALL_SCALE_EPSILON,
};
use qci_core::quasimode::{microlocalization_grid, microlocalize, BlockSpec, QuasimodeSpec};
use qci_core::Complex64;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn gaussian(hbar: f64, half: f64, spacing: f64, xi0: f64) -> GridFunction {
    let grid = GridSpec::line(Axis::cell_centered(-half, half, spacing).unwrap());
    GridFunction::from_fn(grid, hbar, |x| Complex64::from_polar((-x[0] * x[0] / (2.0 * hbar)).exp(), xi0 * x[0] / hbar))
        .unwrap()
        .normalized()
}

fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t * t)).exp()
    }
}

#[test]
fn identity_symbol_is_identity() {
    let u = gaussian(1e-3, 0.5, 1e-3, 0.2);
    let out = quantize(&Symbol::constant(1, c(1.0)), 1e-3, &u).unwrap();
    let err: f64 = out.values.iter().zip(&u.values).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
    assert!(err / u.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt() < 1e-10);
    let me = matrix_element(&Symbol::constant(1, c(1.0)), 1e-3, &u, &u).unwrap();
    assert!((me - c(1.0)).norm() < 1e-10);
}

#[test]
fn momentum_symbol_on_a_plane_wave() {
    let hbar = 1e-2;
    let xi0 = 0.7;
    let grid = GridSpec::line(Axis::periodic(2.0 * PI, 1024).unwrap());
    // a wave packet whose envelope is wide compared with the wavelength 2πħ/ξ₀
    let u = GridFunction::from_fn(grid.clone(), hbar, |x| {
        let env = bump((x[0] - PI) / 2.5);
        Complex64::from_polar(env, xi0 * x[0] / hbar)
    })
    .unwrap();
    let out = quantize(&Symbol::of_frequency(1, |k| c(k[0])), hbar, &u).unwrap();
    for i in 0..grid.len() {
        let x = grid.point(i)[0];
        if (x - PI).abs() < 1.0 {
            let rel = (out.values[i] - u.values[i] * xi0).norm() / u.values[i].norm();
            assert!(rel < 0.01, "x = {x}: {rel}");
        }
    }
}

/// `⟨χ(x) χ(ħD) u, u⟩ = ∫ χ(ξ) û(ξ) conj((χu)^(ξ)) dξ`, with both transforms
/// by direct trapezoid sums.
fn direct_cutoff_expectation(u: &GridFunction, eps: f64) -> f64 {
    let hbar = u.hbar;
    let xs: Vec<f64> = (0..u.grid.len()).map(|i| u.grid.point(i)[0]).collect();
    let dx = u.grid.cell_volume();
    let transform = |f: &dyn Fn(usize) -> Complex64, xi: f64| -> Complex64 {
        xs.iter()
            .enumerate()
            .map(|(i, &x)| f(i) * Complex64::from_polar(1.0, -x * xi / hbar))
            .sum::<Complex64>()
            * dx
            / (2.0 * PI * hbar).sqrt()
    };
    let n = 801;
    let (lo, hi) = (-eps, eps);
    let dxi = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|k| {
            let xi = lo + k as f64 * dxi;
            let a = transform(&|i| u.values[i], xi);
            let b = transform(&|i| u.values[i] * bump(xs[i] / eps), xi);
            bump(xi / eps) * (a * b.conj()).re
        })
        .sum::<f64>()
        * dxi
}

#[test]
fn cutoff_expectation_of_a_gaussian() {
    let hbar = 1e-3;
    let u = gaussian(hbar, 1.05, 1.25e-4, 0.0);
    let symbol = cutoff_symbol(&Cutoff::new(Profile::Bump, 1.0, 0.0, vec![0.0]).unwrap(), hbar, 1).unwrap();
    let value = matrix_element(&symbol, hbar, &u, &u).unwrap();
    let oracle = direct_cutoff_expectation(&u, 1.0);
    assert!((value.re - oracle).abs() < 1e-6, "{} vs {oracle}", value.re);
    // χ(t) = 1 - t² + O(t⁴) gives 1 - ⟨x²⟩ - ⟨ξ²⟩ = 1 - ħ to leading order
    assert!((value.re - (1.0 - hbar)).abs() < 1e-5, "{}", value.re);
}

#[test]
fn small_scale_cutoff_on_microlocalized_ground_state() {
    let hbar = 1e-3;
    let spec = QuasimodeSpec::single(BlockSpec::Elliptic { n: 0 }, hbar).unwrap();
    let cutoff = Cutoff::microlocalizer();
    let grid = microlocalization_grid(&spec, &cutoff).unwrap();
    let u = microlocalize(&spec, &cutoff, &grid).unwrap().normalized();
    let symbol = small_scale_cutoff(0.4, hbar, &[0.0]).unwrap();
    let value = matrix_element(&symbol, hbar, &u, &u).unwrap();
    assert!(value.re >= 0.9, "{value}");
}

#[test]
fn hermitian_symmetry() {
    let hbar = 1e-3;
    let u = gaussian(hbar, 0.5, 9e-4, 0.1);
    let v = gaussian(hbar, 0.5, 9e-4, -0.05);
    let position = Symbol::of_position(1, |x| c((3.0 * x[0]).cos()));
    let frequency = Symbol::of_frequency(1, |k| c(1.0 / (1.0 + k[0] * k[0])));
    for a in [position, frequency] {
        let lhs = matrix_element(&a, hbar, &u, &v).unwrap();
        let rhs = matrix_element(&a.conj(), hbar, &v, &u).unwrap().conj();
        assert!((lhs - rhs).norm() < 1e-12, "{lhs} vs {rhs}");
    }
    // a product symbol is only self-adjoint up to the commutator, O(ħ^{1-2δ})
    let delta = 0.3;
    let product = small_scale_cutoff(delta, hbar, &[0.0]).unwrap();
    let lhs = matrix_element(&product, hbar, &u, &v).unwrap();
    let rhs = matrix_element(&product.conj(), hbar, &v, &u).unwrap().conj();
    assert!((lhs - rhs).norm() < hbar.powf(1.0 - 2.0 * delta), "{lhs} vs {rhs}");
    let diag = matrix_element(&product, hbar, &u, &u).unwrap();
    assert!(diag.im.abs() < hbar.powf(1.0 - 2.0 * delta), "{diag}");
}

#[test]
fn small_scale_cutoff_scales() {
    let plain = small_scale_cutoff(0.0, 1e-2, &[0.0]).unwrap();
    for (x, k) in [(0.3, -0.4), (1.1, 0.2), (-1.9, 1.5)] {
        let want = bump(x / SMALL_SCALE_EPSILON) * bump(k / SMALL_SCALE_EPSILON);
        assert!((plain.eval(&[x], &[k]).re - want).abs() < 1e-14);
    }
    let hbar: f64 = 1e-2;
    let radius = SMALL_SCALE_EPSILON * 10f64.powf(-0.8);
    let shrunk = small_scale_cutoff(0.4, hbar, &[0.0]).unwrap();
    assert!(shrunk.eval(&[0.99 * radius], &[0.0]).re > 0.0);
    assert_eq!(shrunk.eval(&[1.01 * radius], &[0.0]).re, 0.0);
    assert_eq!(shrunk.eval(&[0.0], &[1.01 * radius]).re, 0.0);
}

#[test]
fn small_scale_symbol_class() {
    // first differences of χ(ħ^{-δ}·) grow like ħ^{-δ}
    let delta = 0.4;
    let mut normalized = Vec::new();
    for hbar in [1e-2f64, 1e-3, 1e-4] {
        let s = small_scale_cutoff(delta, hbar, &[0.0]).unwrap();
        let step = 1e-3 * hbar.powf(delta);
        let (first, second) = s.derivative_bounds(9, step).unwrap();
        normalized.push((first * hbar.powf(delta), second * hbar.powf(2.0 * delta)));
    }
    for w in normalized.windows(2) {
        assert!((w[1].0 / w[0].0 - 1.0).abs() < 0.25, "{normalized:?}");
        assert!((w[1].1 / w[0].1 - 1.0).abs() < 0.25, "{normalized:?}");
    }
}

#[test]
fn garding_surrogate_across_decades() {
    let probes: Vec<(f64, f64)> = (-5..=5)
        .flat_map(|i| (-5..=5).map(move |j| (0.5 * i as f64, 0.5 * j as f64)))
        .collect();
    for delta in [0.25, 0.4] {
        let rate = 1.0 - 2.0 * delta;
        let constant = 2.0 * garding_deficit(delta, 1e-2, &probes).unwrap() / 1e-2f64.powf(rate);
        for hbar in [1e-3, 1e-4] {
            let d = garding_deficit(delta, hbar, &probes).unwrap();
            assert!(d <= constant * hbar.powf(rate), "delta {delta} hbar {hbar}: {d:.3e}");
        }
    }
}
