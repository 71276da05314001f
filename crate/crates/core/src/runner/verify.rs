//! Embedded oracle cross-checks, each comparing a library routine against an
//! independent closed form or known value.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eliasson::{classify, model_family, random_symplectic};
use crate::error::Result;
use crate::grid::{Axis, GridFunction, GridSpec};
use crate::mass::{gamma_modulus_sq_critical, gamma_modulus_sq_direct, oscillatory_partial, BesselMellin};
use crate::quantization::{quantize, Symbol};
use crate::scaling::{lp_norm, LpExponent};
use crate::surfaces::{sphere_grid, sphere_harmonic, torus_eigenfunction, Lattice, RadialSolver, RevolutionProfile};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, result: Result<(bool, String)>) -> OracleCheck {
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    OracleCheck {
        name: name.to_string(),
        passed,
        detail,
    }
}

fn gamma_modulus() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for s in [0.0, 0.5, 1.0, 2.5] {
        let closed = gamma_modulus_sq_critical(s)?;
        let direct = gamma_modulus_sq_direct(Complex64::new(0.5, s));
        worst = worst.max((closed - direct).abs() / closed);
    }
    Ok((worst < 1e-10, format!("max relative difference {worst:.3e}")))
}

fn bessel_mellin_modulus() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for (k, t) in [(0, 0.0), (1, 0.5), (2, -1.0), (5, 2.0)] {
        worst = worst.max((BesselMellin::new(k, t)?.limit().norm() - 1.0).abs());
    }
    Ok((worst < 1e-4, format!("max |modulus - 1| = {worst:.3e}")))
}

fn fresnel_tail() -> Result<(bool, String)> {
    let a = 1e4;
    let gap = (oscillatory_partial(a, 0.0).norm() - PI.sqrt()).abs();
    Ok((gap <= a.powf(-0.5), format!("| |I(1e4)| - sqrt(pi) | = {gap:.3e}")))
}

fn identity_quantization() -> Result<(bool, String)> {
    let hbar = 1e-2;
    let grid = GridSpec::line(Axis::cell_centered(-2.0, 2.0, 4.0 / 256.0)?);
    let u = GridFunction::from_fn(grid, hbar, |x| {
        Complex64::from_polar((-x[0] * x[0] / (2.0 * hbar)).exp(), 0.3 * x[0] / hbar)
    })?
    .normalized();
    let out = quantize(&Symbol::constant(1, Complex64::new(1.0, 0.0)), hbar, &u)?;
    let err = out
        .values
        .iter()
        .zip(&u.values)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok((err < 1e-10, format!("||Op(1)u - u|| = {err:.3e}")))
}

fn sphere_sup() -> Result<(bool, String)> {
    let grid = Arc::new(sphere_grid(101)?);
    let sup = lp_norm(&sphere_harmonic(1, 0, grid)?, LpExponent::INFINITY)?;
    let want = (3.0 / (4.0 * PI)).sqrt();
    Ok(((sup - want).abs() < 1e-4, format!("sup |Y_1^0| = {sup:.6}")))
}

fn radial_oracle() -> Result<(bool, String)> {
    let solver = RadialSolver::new(RevolutionProfile::Sine, 256)?;
    let mut worst: f64 = 0.0;
    for m in 0..=3i64 {
        for mode in solver.modes(m, 4)? {
            let l = (m + mode.index as i64) as f64;
            let exact = l * (l + 1.0);
            if exact > 0.0 {
                worst = worst.max((mode.eigenvalue - exact).abs() / exact);
            }
        }
    }
    Ok((worst < 1e-6, format!("max relative error vs l(l+1): {worst:.3e}")))
}

fn torus_flat() -> Result<(bool, String)> {
    let lattice = Lattice::unit_square();
    let k = (3, -2);
    let phi = torus_eigenfunction(k, Arc::new(lattice.grid_for(k)?))?;
    let ratio = lp_norm(&phi, LpExponent(4.0))? / lp_norm(&phi, LpExponent(2.0))?;
    Ok(((ratio - 1.0).abs() < 1e-12, format!("L4/L2 = {ratio:.15}")))
}

fn conjugated_classification() -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let family = model_family(1, 1, 1)?;
    let generic = super::generic_element(&family)?;
    let s = random_symplectic(4, 0.5, &mut rng);
    let counts = classify(&generic.conjugated(&s)?)?.counts();
    Ok((counts == (1, 1, 1), format!("counts {counts:?}")))
}

/// Runs every embedded check; the run is trustworthy only if all pass.
pub fn run_checks() -> Vec<OracleCheck> {
    vec![
        check("gamma_modulus_closed_form", gamma_modulus()),
        check("bessel_mellin_unit_modulus", bessel_mellin_modulus()),
        check("oscillatory_partial_tail", fresnel_tail()),
        check("identity_quantization", identity_quantization()),
        check("sphere_y10_sup", sphere_sup()),
        check("radial_solver_vs_sphere", radial_oracle()),
        check("torus_flat_ratio", torus_flat()),
        check("conjugated_block_classification", conjugated_classification()),
    ]
}
