use std::sync::Arc;

use qci_core::scaling::{
    blowup_report, fit_exponent, holder_lower_bound, holder_rate, ideal_rate, lp_norm, sphere_weyl_sample,
    weyl_ladder_average, BlowupOptions, LpExponent, WeylKernel,
};
use qci_core::surfaces::{sphere_grid, sphere_grid_for_degree, sphere_harmonic, JointEigenvalue, RevolutionProfile, SurfaceModel};

#[test]
fn constant_field_has_unit_norms() {
    let grid = Arc::new(sphere_grid(21).unwrap());
    let y00 = sphere_harmonic(0, 0, grid).unwrap().normalized();
    for p in [2.0, 3.0, 6.0, f64::INFINITY] {
        assert!((lp_norm(&y00, LpExponent(p)).unwrap() - 1.0).abs() < 1e-12, "p={p}");
    }
}

#[test]
fn lp_exponent_range() {
    assert!(LpExponent::new(1.5).is_err());
    assert!(LpExponent::new(f64::NAN).is_err());
    assert!(LpExponent::new(f64::INFINITY).unwrap().is_infinite());
}

#[test]
fn holder_bound_examples() {
    let b = holder_lower_bound(0.3, 1e-3, LpExponent::INFINITY).unwrap();
    assert!((b - 300f64.sqrt()).abs() < 1e-12);
    assert!((b - 17.3205).abs() < 1e-4);
    for p in [2.5, 4.0, 6.0, f64::INFINITY] {
        assert!((holder_lower_bound(1.0, 1.0, LpExponent(p)).unwrap() - 1.0).abs() < 1e-15);
    }
    assert!(holder_lower_bound(0.0, 1.0, LpExponent(4.0)).is_err());
    assert!(holder_lower_bound(1.0, -1.0, LpExponent(4.0)).is_err());
    assert!(holder_lower_bound(1.0, 1.0, LpExponent(2.0)).is_err());
}

#[test]
fn holder_exponent_algebra() {
    // volume ħ^{δ·codim} with ħ = 1/λ and δ = 1/2 − ε′ gives λ^{codim(p−2)/(4p)·(1 − 2ε′)}
    for codim in [1usize, 2] {
        for p in [4.0, 6.0, f64::INFINITY] {
            let p = LpExponent(p);
            for eps in [0.0, 0.05, 0.1] {
                let delta = 0.5 - eps;
                let want = ideal_rate(codim, p) * (1.0 - 2.0 * eps);
                assert!((holder_rate(codim, p, delta) - want).abs() < 1e-14);
                let samples: Vec<(f64, f64)> = [10.0f64, 30.0, 100.0, 300.0, 1000.0]
                    .iter()
                    .map(|&l| (l, holder_lower_bound(1.0, l.powf(-delta * codim as f64), p).unwrap()))
                    .collect();
                assert!((fit_exponent(&samples).unwrap().exponent - want).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn fit_of_exact_power_laws() {
    let lambdas = [10.0f64, 100.0, 1e3, 3e3, 1e4];
    let power: Vec<(f64, f64)> = lambdas.iter().map(|&l| (l, l.powf(0.25))).collect();
    let fit = fit_exponent(&power).unwrap();
    assert!((fit.exponent - 0.25).abs() < 1e-10);
    assert!(fit.residual < 1e-12);
    assert_eq!(fit.sample_count, 5);
    assert_eq!(fit.window, (10.0, 1e4));
    let flat: Vec<(f64, f64)> = lambdas.iter().map(|&l| (l, 2.5)).collect();
    assert!(fit_exponent(&flat).unwrap().exponent.abs() < 1e-10);
}

#[test]
fn fit_rejects_degenerate_samples() {
    assert!(fit_exponent(&[(10.0, 1.0); 4]).is_err());
    let narrow: Vec<(f64, f64)> = (0..6).map(|k| (10.0 + k as f64, 1.0)).collect();
    assert!(fit_exponent(&narrow).is_err());
    let negative = [(10.0, 1.0), (20.0, 1.0), (40.0, -1.0), (80.0, 1.0), (160.0, 1.0)];
    assert!(fit_exponent(&negative).is_err());
}

#[test]
fn sectoral_sup_norms_grow_like_a_quarter_power() {
    let samples: Vec<(f64, f64)> = [20usize, 40, 80, 160, 250, 400]
        .iter()
        .map(|&l| {
            let phi = sphere_harmonic(l, l as i64, Arc::new(sphere_grid_for_degree(l).unwrap())).unwrap().normalized();
            (((l * (l + 1)) as f64).sqrt(), lp_norm(&phi, LpExponent::INFINITY).unwrap())
        })
        .collect();
    let fit = fit_exponent(&samples).unwrap();
    assert!((fit.exponent - 0.25).abs() < 0.02, "{fit:?}");
}

#[test]
fn ladder_average_examples() {
    let hbar = 0.01;
    let mode = JointEigenvalue::new(1e4, 100, 0);
    let at_center = weyl_ladder_average(&[mode.clone()], &[1.0], [1.0, 1.0], WeylKernel::Jackson, hbar).unwrap();
    assert!((at_center - WeylKernel::Jackson.eval(0.0).powi(2)).abs() < 1e-12);
    assert!(at_center > 0.0);
    assert_eq!(weyl_ladder_average(&[], &[], [1.0, 1.0], WeylKernel::Jackson, hbar).unwrap(), 0.0);
    assert!(weyl_ladder_average(&[mode], &[1.0, 0.5], [1.0, 1.0], WeylKernel::Jackson, hbar).is_err());
}

#[test]
fn jackson_kernel_is_admissible() {
    let k = WeylKernel::Jackson;
    assert_eq!(k.eval(0.0), 1.0);
    assert_eq!(k.eval(10.5), 0.0);
    for x in [-9.0, -3.3, 0.7, 2.0 * std::f64::consts::PI, 8.1] {
        assert!(k.eval(x) >= 0.0);
        assert_eq!(k.eval(x), k.eval(-x));
    }
}

#[test]
fn sphere_ladder_average_has_a_floor() {
    let values: Vec<f64> = [50usize, 100, 200, 350, 500]
        .iter()
        .map(|&l| sphere_weyl_sample(l, 0.4).unwrap().value)
        .collect();
    let floor = values.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(floor > 1.0, "{values:?}");
    let samples: Vec<(f64, f64)> = [50usize, 100, 200, 350, 500]
        .iter()
        .zip(&values)
        .map(|(&l, &v)| (l as f64, v))
        .collect();
    assert!(fit_exponent(&samples).unwrap().exponent >= -0.05);
}

fn quick(p_list: &[f64]) -> BlowupOptions {
    BlowupOptions {
        p_list: p_list.iter().map(|&p| LpExponent(p)).collect(),
        lambda_window: (20.0, 400.0),
        samples: 8,
        ..BlowupOptions::default()
    }
}

#[test]
fn torus_exponents_vanish() {
    let report = blowup_report(
        &SurfaceModel::FlatTorus {
            basis: [[1.0, 0.0], [0.0, 1.0]],
        },
        &quick(&[4.0, 6.0, f64::INFINITY]),
    )
    .unwrap();
    assert_eq!(report.codim, 0);
    for f in &report.fits {
        assert!(f.measured.exponent.abs() < 1e-6, "{f:?}");
        assert!(f.holder.is_none());
    }
}

#[test]
fn sphere_exponents_reach_the_codimension_one_rates() {
    let report = blowup_report(&SurfaceModel::RoundSphere, &quick(&[4.0, 6.0, f64::INFINITY])).unwrap();
    assert_eq!(report.codim, 1);
    let exponent = |p: f64| report.fits.iter().find(|f| f.p.0 == p).unwrap().measured.exponent;
    assert!(exponent(f64::INFINITY) >= 0.25 - 0.03, "{}", exponent(f64::INFINITY));
    assert!(exponent(6.0) >= 1.0 / 6.0 - 0.03, "{}", exponent(6.0));
    assert!(exponent(f64::INFINITY) >= exponent(6.0));
    assert!(exponent(6.0) >= exponent(4.0));
    assert!(exponent(4.0) >= 0.0);
}

#[test]
fn measured_norms_dominate_the_holder_bound() {
    let surface = SurfaceModel::Revolution(RevolutionProfile::Deformed { kappa: 0.3 });
    let report = blowup_report(&surface, &quick(&[4.0, f64::INFINITY])).unwrap();
    for s in &report.samples {
        for n in &s.norms {
            let holder = n.holder.expect("surface has a singular leaf");
            assert!(n.measured >= holder - 1e-9, "λ={} p={}: {} < {holder}", s.lambda, n.p, n.measured);
        }
    }
}

#[test]
fn invalid_blowup_options() {
    let mut opts = quick(&[4.0]);
    opts.delta = 0.5;
    assert!(blowup_report(&SurfaceModel::RoundSphere, &opts).is_err());
    let mut opts = quick(&[4.0]);
    opts.lambda_window = (20.0, 100.0);
    assert!(blowup_report(&SurfaceModel::RoundSphere, &opts).is_err());
}
