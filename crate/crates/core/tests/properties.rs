use std::sync::Arc;

use nalgebra::DMatrix;
use proptest::prelude::*;
use qci_core::eliasson::{classify, poisson_bracket, random_symplectic, QuadraticHamiltonian};
use qci_core::grid::{Axis, GridFunction, GridSpec};
use qci_core::mass::{gamma_modulus_sq_critical, oscillatory_partial};
use qci_core::quantization::{quantize, small_scale_cutoff, Symbol};
use qci_core::quasimode::{eval_block, eval_product, BlockSpec, QuasimodeSpec};
use qci_core::scaling::{holder_lower_bound, lp_norm, LpExponent};
use qci_core::surfaces::{
    ladder_select, revolution_joint_spectrum, singular_leaf_of, sphere_grid_for_degree, sphere_harmonic,
    sphere_joint_spectrum, tube_mass, tube_volume, RadialSolver, RevolutionProfile, SurfaceField, SurfaceModel,
};
use qci_core::{Complex64, Error};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn symmetric(dim: usize) -> impl Strategy<Value = QuadraticHamiltonian> {
    prop::collection::vec(-2.0f64..2.0, 4 * dim * dim).prop_map(move |v| {
        let n = 2 * dim;
        let m = DMatrix::from_vec(n, n, v);
        QuadraticHamiltonian::new(0.5 * (&m + m.transpose())).unwrap()
    })
}

fn pair(max_dim: usize) -> impl Strategy<Value = (QuadraticHamiltonian, QuadraticHamiltonian)> {
    (1..=max_dim).prop_flat_map(|d| (symmetric(d), symmetric(d)))
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn sphere_leaf() -> qci_core::surfaces::SingularLeaf {
    singular_leaf_of(&SurfaceModel::RoundSphere).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_antisymmetric((a, b) in pair(3)) {
        let ab = poisson_bracket(&a, &b).unwrap();
        let ba = poisson_bracket(&b, &a).unwrap();
        let scale = a.matrix().amax().max(1.0) * b.matrix().amax().max(1.0);
        prop_assert!((ab.matrix() + ba.matrix()).amax() <= 1e-12 * scale);
    }

    #[test]
    fn block_counts_fill_the_dimension(q in (1usize..=4).prop_flat_map(symmetric)) {
        match classify(&q) {
            Ok(dec) => {
                let (h, l, e) = dec.counts();
                prop_assert_eq!(h + 2 * l + e, q.dim());
            }
            Err(Error::Degenerate { .. }) => {}
            Err(other) => prop_assert!(false, "unexpected error {other}"),
        }
    }

    #[test]
    fn classification_is_symplectically_invariant(q in (1usize..=3).prop_flat_map(symmetric), seed in any::<u64>()) {
        let Ok(before) = classify(&q) else { return Ok(()) };
        // stay away from forms whose eigenvalues nearly collide with an axis
        let robust = before.block_spectra.iter().all(|b| {
            let (re, im) = b.eigenvalue;
            let r = (re * re + im * im).sqrt();
            (re == 0.0 || re > 1e-3 * r) && (im == 0.0 || im > 1e-3 * r)
        });
        prop_assume!(robust);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_symplectic(q.dim(), 0.3, &mut rng);
        let after = classify(&q.conjugated(&s).unwrap()).unwrap();
        prop_assert_eq!(before.counts(), after.counts());
    }

    #[test]
    fn quantization_is_linear(alpha in complex(), beta in complex(), k1 in -30.0f64..30.0, k2 in -30.0f64..30.0) {
        let hbar = 1e-2;
        let grid = GridSpec::line(Axis::cell_centered(-1.0, 1.0, 2e-3).unwrap());
        let u = GridFunction::from_fn(grid.clone(), hbar, |x| Complex64::from_polar((-4.0 * x[0] * x[0]).exp(), k1 * x[0])).unwrap();
        let v = GridFunction::from_fn(grid.clone(), hbar, |x| Complex64::from_polar((-9.0 * x[0] * x[0]).exp(), k2 * x[0])).unwrap();
        let combo = GridFunction::new(
            grid,
            u.values.iter().zip(&v.values).map(|(a, b)| alpha * a + beta * b).collect(),
            hbar,
        ).unwrap();
        let symbol = small_scale_cutoff(0.2, hbar, &[0.0]).unwrap();
        let lhs = quantize(&symbol, hbar, &combo).unwrap();
        let (qu, qv) = (quantize(&symbol, hbar, &u).unwrap(), quantize(&symbol, hbar, &v).unwrap());
        for i in 0..lhs.values.len() {
            let rhs = alpha * qu.values[i] + beta * qv.values[i];
            prop_assert!((lhs.values[i] - rhs).norm() <= 1e-12);
        }
        let id = quantize(&Symbol::constant(1, Complex64::new(1.0, 0.0)), hbar, &combo).unwrap();
        for (a, b) in id.values.iter().zip(&combo.values) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn products_are_multiplicative(
        s in -3.0f64..3.0,
        theta in 0.0f64..std::f64::consts::PI,
        n in 0usize..8,
        m in -6i64..6,
        y in prop::array::uniform3(-1.0f64..1.0),
        hbar in 1e-3f64..1e-1,
    ) {
        let blocks = vec![
            BlockSpec::hyperbolic(s, Complex64::from_polar(1.0, theta).scale(0.6), Complex64::new(0.8, 0.0)).unwrap(),
            BlockSpec::Elliptic { n },
            BlockSpec::Regular { m },
        ];
        let spec = QuasimodeSpec::new(blocks.clone(), hbar).unwrap();
        let joint = eval_product(&spec, &y).unwrap();
        let split: Complex64 = blocks.iter().zip(y).map(|(b, yi)| eval_block(b, hbar, &[yi]).unwrap()).product();
        prop_assert!((joint - split).norm() <= 1e-12 * split.norm().max(1.0));
    }

    #[test]
    fn gamma_modulus_is_even(s in -50.0f64..50.0) {
        prop_assert_eq!(gamma_modulus_sq_critical(s).unwrap(), gamma_modulus_sq_critical(-s).unwrap());
    }

    #[test]
    fn oscillatory_partial_is_small_near_zero(a in 1e-8f64..1e-2, s in -5.0f64..5.0) {
        prop_assert!(oscillatory_partial(a, s).norm() <= 2.1 * a.sqrt());
    }

    #[test]
    fn ladder_members_satisfy_the_window(l_max in 5usize..60, c in 0.0f64..4.0, b2 in 0.2f64..1.0) {
        let spectrum = sphere_joint_spectrum(l_max);
        for e in ladder_select(&spectrum, [1.0, b2], c) {
            let (mu, h) = (e.mu.unwrap(), e.hbar.unwrap());
            prop_assert!((mu[0] - 1.0).abs() <= c * h + 1e-12);
            prop_assert!((mu[1] - b2).abs() <= c * h + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lp_norms_increase_with_p(l in 1usize..120, frac in 0.0f64..=1.0, p in 2.0f64..12.0, dp in 0.1f64..6.0) {
        let m = (frac * l as f64).round() as i64;
        let phi = sphere_harmonic(l, m, Arc::new(sphere_grid_for_degree(l).unwrap())).unwrap().normalized();
        let lo = lp_norm(&phi, LpExponent(p)).unwrap();
        let hi = lp_norm(&phi, LpExponent(p + dp)).unwrap();
        let sup = lp_norm(&phi, LpExponent::INFINITY).unwrap();
        prop_assert!(hi >= lo - 1e-8, "{lo} > {hi}");
        prop_assert!(sup >= hi - 1e-8, "{hi} > {sup}");
    }

    #[test]
    fn tube_mass_shrinks_with_delta(l in 20usize..200, frac in 0.0f64..=1.0, d1 in 0.05f64..0.45, d2 in 0.05f64..0.45) {
        let m = (frac * l as f64).round() as i64;
        let phi = sphere_harmonic(l, m, Arc::new(sphere_grid_for_degree(l.max(200)).unwrap())).unwrap();
        let hbar = 0.05;
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let wide = tube_mass(&phi, &sphere_leaf(), lo, hbar).unwrap();
        let narrow = tube_mass(&phi, &sphere_leaf(), hi, hbar).unwrap();
        prop_assert!(wide >= narrow - 1e-12, "{wide} < {narrow}");
    }

    #[test]
    fn holder_chain_holds_per_eigenfunction(l in 30usize..300, frac in 0.5f64..=1.0, p in 2.5f64..10.0) {
        let m = (frac * l as f64).round() as i64;
        let phi = sphere_harmonic(l, m, Arc::new(sphere_grid_for_degree(l).unwrap())).unwrap().normalized();
        let hbar = ((l * (l + 1)) as f64).sqrt().recip();
        let leaf = sphere_leaf();
        let mass = tube_mass(&phi, &leaf, 0.4, hbar).unwrap();
        prop_assume!(mass > 0.0);
        let volume = tube_volume(&phi.grid, &leaf, 0.4, hbar).unwrap();
        for q in [LpExponent(p), LpExponent::INFINITY] {
            let bound = holder_lower_bound(mass, volume, q).unwrap();
            prop_assert!(lp_norm(&phi, q).unwrap() >= bound - 1e-9);
        }
    }

    #[test]
    fn eigenvalues_grow_with_angular_momentum(kappa in -0.3f64..1.0, m in 0i64..8) {
        let profile = RevolutionProfile::Deformed { kappa };
        let lower = revolution_joint_spectrum(&profile, m, 3).unwrap();
        let upper = revolution_joint_spectrum(&profile, -(m + 1), 3).unwrap();
        for (a, b) in lower.iter().zip(&upper) {
            prop_assert!(b.eigenvalue > a.eigenvalue);
        }
    }

    #[test]
    fn computed_modes_satisfy_bessel(
        kappa in -0.3f64..1.0,
        m in -3i64..=3,
        coeffs in prop::collection::vec(-1.0f64..1.0, 6),
    ) {
        let solver = RadialSolver::new(RevolutionProfile::Deformed { kappa }, 256).unwrap();
        let grid = solver.grid();
        let f = SurfaceField::new(
            grid.clone(),
            grid.coords
                .iter()
                .map(|&r| {
                    let v: f64 = coeffs.iter().enumerate().map(|(k, c)| c * ((k + 1) as f64 * r).sin()).sum();
                    Complex64::new(v, 0.5 * v * r.cos())
                })
                .collect(),
            qci_core::surfaces::Azimuthal::Exp(m),
            4.0,
        )
        .unwrap();
        let total = f.norm_l2().powi(2);
        let mut captured = 0.0;
        for mode in solver.modes(m, 20).unwrap() {
            captured += f.inner(&solver.field(&mode).unwrap()).unwrap().norm_sqr();
        }
        prop_assert!(captured <= total * (1.0 + 1e-9), "{captured} > {total}");
    }
}
