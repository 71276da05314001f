//! Small-scale masses of the model blocks and their closed-form limits.
//!
//! For the hyperbolic and loxodromic blocks the mass is the logarithmic
//! average `|log ħ|^{-1} ∫_1^{ħ^{2δ-1}} |F(a)|² da/a` of a partial integral
//! `F(a)` whose limit as `a → ∞` is known in closed form.

mod bessel_mellin;
mod oscillatory;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bessel_mellin::{bessel_mellin_closed_form, BesselMellin};
pub use oscillatory::{
    mellin_limit, oscillatory_partial, oscillatory_partial_signed, KernelSign, OscillatoryPartial,
};

use crate::cutoff::{Cutoff, Profile};
use crate::error::{Error, Result};
use crate::grid::{Axis, GridFunction, GridSpec};
use crate::quantization::{hbar_fourier, matrix_element, Symbol};
use crate::quasimode::{elliptic_normalized, BlockKind};
use crate::special::{gauss_legendre, ln_gamma};

/// Radius of the flat-topped cutoff used for the elliptic mass.
pub const ELLIPTIC_EPSILON: f64 = 4.0;
/// Radius of the bump used for the regular-block matrix element.
pub const REGULAR_EPSILON: f64 = 2.0;
/// Largest FFT length the elliptic mass will allocate.
const MAX_FFT_LEN: usize = 1 << 24;
/// Beyond this point the outer integrand is replaced by its running average.
const AVERAGE_FROM: f64 = 1e5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassReport {
    pub block_kind: BlockKind,
    pub hbar: f64,
    pub delta: f64,
    pub value: f64,
    pub asymptote: f64,
    /// `value - asymptote`.
    pub log_deficit: f64,
    /// Estimated absolute quadrature error of `value`.
    pub error_estimate: f64,
}

impl MassReport {
    fn new(block_kind: BlockKind, hbar: f64, delta: f64, value: f64, asymptote: f64, err: f64) -> Self {
        MassReport {
            block_kind,
            hbar,
            delta,
            value,
            asymptote,
            log_deficit: value - asymptote,
            error_estimate: err,
        }
    }
}

/// `|Γ(1/2 + is)|² = π / cosh(πs)`.
pub fn gamma_modulus_sq_critical(s: f64) -> Result<f64> {
    if !(s.abs() <= 50.0) {
        return Err(Error::range("s", format!("|s| = {} exceeds 50", s.abs())));
    }
    Ok(PI / (PI * s.abs()).cosh())
}

/// `|Γ(1/2 + is)|² (1 - 2δ)`.
pub fn hyperbolic_leading_term(s: f64, delta: f64) -> Result<f64> {
    Ok(gamma_modulus_sq_critical(s)? * (1.0 - 2.0 * delta))
}

/// Limit of the hyperbolic mass, `|e^{-iπz/2} Γ(z)|² (1 - 2δ)` with `z = 1/2 + is`,
/// i.e. `e^{πs} π (1 - 2δ) / cosh(πs)`.
pub fn hyperbolic_limit(s: f64, delta: f64) -> Result<f64> {
    gamma_modulus_sq_critical(s)?;
    Ok(2.0 * PI * (1.0 - 2.0 * delta) / (1.0 + (-2.0 * PI * s).exp()))
}

fn check_delta(delta: f64, allow_half: bool) -> Result<()> {
    let ok = if allow_half {
        (0.0..=0.5).contains(&delta)
    } else {
        (0.0..0.5).contains(&delta)
    };
    if ok {
        Ok(())
    } else {
        Err(Error::invalid("delta", format!("must lie in [0, 1/2), got {delta}")))
    }
}

fn check_hbar(hbar: f64, max: f64) -> Result<()> {
    if !(hbar > 0.0 && hbar <= max) {
        return Err(Error::invalid("hbar", format!("must lie in (0, {max}], got {hbar}")));
    }
    Ok(())
}

/// `∫_1^A g(a) da/a` for an oscillatory `g` with `g(a) → c` and oscillating part
/// `O(a^{-1/2})`. Gauss panels of width π/2 up to `AVERAGE_FROM`; beyond it,
/// `g` is replaced by `c + tail_power / a`, which is accurate to `O(a^{-3/2})`.
/// Returns the 16-node value and its difference from the 8-node value.
fn log_average<G>(upper: f64, limit_sq: f64, tail_power: f64, g: G) -> Result<(f64, f64)>
where
    G: Fn(f64) -> Result<f64> + Sync,
{
    if upper <= 1.0 {
        return Ok((0.0, 0.0));
    }
    let top = upper.min(AVERAGE_FROM);
    let width = PI / 2.0;
    let panels = ((top - 1.0) / width).ceil() as usize;
    let h = (top - 1.0) / panels as f64;
    let fine = gauss_legendre(16);
    let coarse = gauss_legendre(8);
    let pieces = (0..panels)
        .into_par_iter()
        .map(|p| -> Result<(f64, f64)> {
            let lo = 1.0 + p as f64 * h;
            let hi = lo + h;
            let integrate = |rule: &crate::special::GaussRule| -> Result<f64> {
                let r = rule.mapped(lo, hi);
                let mut acc = 0.0;
                for (&a, &w) in r.nodes.iter().zip(&r.weights) {
                    acc += w * g(a)? / a;
                }
                Ok(acc)
            };
            Ok((integrate(&fine)?, integrate(&coarse)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let fine_sum: f64 = pieces.iter().map(|p| p.0).sum();
    let coarse_sum: f64 = pieces.iter().map(|p| p.1).sum();
    let mut value = fine_sum;
    let mut err = (fine_sum - coarse_sum).abs();
    if upper > AVERAGE_FROM {
        value += limit_sq * (upper / AVERAGE_FROM).ln() + tail_power * (1.0 / AVERAGE_FROM - 1.0 / upper);
        err += AVERAGE_FROM.powf(-1.5);
    }
    if !(err <= 1e-6 * value.abs().max(1.0)) {
        return Err(Error::NonConvergence {
            what: "outer logarithmic integral",
            achieved: err,
        });
    }
    Ok((value, err))
}

/// Hyperbolic mass `|log ħ|^{-1} ∫_{ħ^{-δ}}^{ħ^{δ-1}} |∫_0^{ħ^δ ξ} e^{-ix} x^{-1/2+is} dx|² dξ/ξ`.
/// The boundary value `δ = 1/2` is accepted for diagnostics.
pub fn mass_hyperbolic(s: f64, hbar: f64, delta: f64) -> Result<MassReport> {
    if !(s.abs() <= 10.0) {
        return Err(Error::range("s", format!("|s| = {} exceeds 10", s.abs())));
    }
    check_delta(delta, true)?;
    check_hbar(hbar, 0.1)?;
    let log = hbar.ln().abs();
    let upper = hbar.powf(2.0 * delta - 1.0);
    let inner = OscillatoryPartial::new(s, KernelSign::Negative);
    let limit_sq = inner.limit().norm_sqr();
    let (integral, err) = log_average(upper, limit_sq, 1.0, |a| Ok(inner.eval(a).norm_sqr()))?;
    Ok(MassReport::new(
        BlockKind::Hyperbolic,
        hbar,
        delta,
        integral / log,
        hyperbolic_limit(s, delta)?,
        err / log,
    ))
}

/// Loxodromic mass `|log ħ|^{-1} ∫_{ħ^{-δ}}^{ħ^{δ-1}} |∫_0^{ħ^δ α} J_k(ρ) ρ^{it} dρ|² dα/α`.
pub fn mass_complex_hyperbolic(k: i32, t: f64, hbar: f64, delta: f64) -> Result<MassReport> {
    check_delta(delta, true)?;
    check_hbar(hbar, 0.1)?;
    let log = hbar.ln().abs();
    let upper = hbar.powf(2.0 * delta - 1.0);
    let inner = BesselMellin::new(k, t)?;
    let limit_sq = inner.limit().norm_sqr();
    let (integral, err) = log_average(upper, limit_sq, 1.0 / PI, |a| Ok(inner.eval(a)?.norm_sqr()))?;
    Ok(MassReport::new(
        BlockKind::ComplexHyperbolic,
        hbar,
        delta,
        integral / log,
        1.0 - 2.0 * delta,
        err / log,
    ))
}

/// Elliptic mass `∫ χ^δ(η) |F_ħ(χ^δ u_e)(η)|² dη` for the unit-L² Hermite block,
/// with a flat-topped cutoff of radius `4 ħ^δ`.
pub fn mass_elliptic(n: usize, hbar: f64, delta: f64) -> Result<MassReport> {
    if n > 50 {
        return Err(Error::range("elliptic index", format!("n = {n} exceeds 50")));
    }
    check_delta(delta, false)?;
    check_hbar(hbar, 0.5)?;
    let cutoff = Cutoff::new(Profile::Plateau, ELLIPTIC_EPSILON, delta, vec![])?;
    let r = cutoff.radius(hbar);
    let spread = ((2 * n + 1) as f64).sqrt() * hbar.sqrt();
    let spacing = (hbar.sqrt() / (8.0 * ((2 * n + 1) as f64).sqrt())).min(PI * hbar / (2.0 * r));
    let box_len = (2.0 * r).max(64.0 * spread);
    let len = (box_len / spacing).ceil() as usize;
    if len > MAX_FFT_LEN {
        return Err(Error::resolution(format!(
            "elliptic mass needs {len} samples to resolve η at ħ = {hbar}"
        )));
    }
    let len = len.next_power_of_two();
    let spacing = box_len / len as f64;
    let grid = GridSpec::line(Axis::new(-0.5 * box_len + 0.5 * spacing, spacing, len)?);
    let u = GridFunction::from_fn(grid, hbar, |y| {
        Complex64::new(elliptic_normalized(n, hbar, y[0]) * cutoff.eval_x_axis(hbar, 0, y[0]), 0.0)
    })?;
    let f = hbar_fourier(&u)?;
    let dxi = f.grid.axes[0].spacing;
    let value: f64 = f
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| cutoff.eval_xi_axis(hbar, f.grid.point(i)[0]) * v.norm_sqr())
        .sum::<f64>()
        * dxi;
    Ok(MassReport::new(BlockKind::Elliptic, hbar, delta, value, 1.0, 1e-12))
}

/// `⟨Op_ħ(χ^δ(ħD_θ)) e^{imθ}, e^{imθ}⟩ / 2π` on the circle.
pub fn mass_regular(m: i64, hbar: f64, delta: f64) -> Result<MassReport> {
    check_delta(delta, false)?;
    check_hbar(hbar, 0.5)?;
    if m.unsigned_abs() > 1000 {
        return Err(Error::range("regular index", format!("|m| = {} exceeds 1000", m.abs())));
    }
    let r = REGULAR_EPSILON * hbar.powf(delta);
    let limit = hbar.powf(1.0 - delta) / 8.0;
    let len = ((2.0 * PI / limit).ceil() as usize).max(4 * m.unsigned_abs() as usize + 8);
    let len = len.next_power_of_two();
    let grid = GridSpec::line(Axis::periodic(2.0 * PI, len)?);
    let u = GridFunction::from_fn(grid, hbar, |th| Complex64::from_polar(1.0, m as f64 * th[0]))?;
    let symbol = Symbol::of_frequency(1, move |k| Complex64::new(Profile::Bump.eval(k[0] / r), 0.0))
        .with_delta(delta)
        .with_xi_support(vec![(-r, r)])
        .with_hbar(hbar);
    let value = matrix_element(&symbol, hbar, &u, &u)?.re / (2.0 * PI);
    Ok(MassReport::new(BlockKind::Regular, hbar, delta, value, 1.0, 1e-13))
}

/// A block together with its quantum numbers, for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MassQuery {
    Elliptic { n: usize },
    Hyperbolic { s: f64 },
    ComplexHyperbolic { k: i32, t: f64 },
    Regular { m: i64 },
}

impl MassQuery {
    pub fn evaluate(&self, hbar: f64, delta: f64) -> Result<MassReport> {
        match *self {
            MassQuery::Elliptic { n } => mass_elliptic(n, hbar, delta),
            MassQuery::Hyperbolic { s } => mass_hyperbolic(s, hbar, delta),
            MassQuery::ComplexHyperbolic { k, t } => mass_complex_hyperbolic(k, t, hbar, delta),
            MassQuery::Regular { m } => mass_regular(m, hbar, delta),
        }
    }
}

/// Evaluates `query` over the Cartesian product of `deltas × hbars`, in that order.
pub fn mass_sweep(query: &MassQuery, hbars: &[f64], deltas: &[f64]) -> Result<Vec<MassReport>> {
    let jobs: Vec<(f64, f64)> = deltas
        .iter()
        .flat_map(|&d| hbars.iter().map(move |&h| (h, d)))
        .collect();
    jobs.par_iter().map(|&(h, d)| query.evaluate(h, d)).collect()
}

/// `|Γ(z)|²` through the complex log-Gamma, independent of the closed form.
pub fn gamma_modulus_sq_direct(z: Complex64) -> f64 {
    (2.0 * ln_gamma(z).re).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_modulus_examples() {
        assert_eq!(gamma_modulus_sq_critical(0.0).unwrap(), PI);
        let v = gamma_modulus_sq_critical(1.0).unwrap();
        assert!((v - PI / PI.cosh()).abs() < 1e-15);
        assert!((v - gamma_modulus_sq_direct(Complex64::new(0.5, 1.0))).abs() < 1e-10);
        assert_eq!(gamma_modulus_sq_critical(-2.5).unwrap(), gamma_modulus_sq_critical(2.5).unwrap());
        assert!(gamma_modulus_sq_critical(51.0).is_err());
    }

    #[test]
    fn hyperbolic_limit_includes_rotation_factor() {
        for s in [0.0, 0.5, 1.0, -1.0] {
            let direct = mellin_limit(s, KernelSign::Negative).norm_sqr() * 0.2;
            assert!((hyperbolic_limit(s, 0.4).unwrap() - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn regular_ground_mode_is_exact() {
        let r = mass_regular(0, 1e-3, 0.4).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn elliptic_ground_state_without_shrinking() {
        let r = mass_elliptic(0, 1e-2, 0.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
    }

    #[test]
    fn half_delta_kills_hyperbolic_window() {
        let r = mass_hyperbolic(0.0, 1e-3, 0.5).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(mass_elliptic(0, 1e-3, 0.5).is_err());
    }
}
