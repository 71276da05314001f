//! `K(b) = ∫_0^b J_k(ρ) ρ^{it} dρ`, the inner integral of the loxodromic mass.
//!
//! The value is assembled from the power series of `J_k` on `[0, 1]`,
//! Gauss–Legendre panels up to `B = max(64, 4k²)`, and beyond `B` the Hankel
//! expansion of `J_k` integrated term by term along rotated contours.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::oscillatory::{contour_tail, KernelSign};
use crate::error::{Error, Result};
use crate::special::{bessel_j, gamma, gauss_legendre, hankel_coefficients, GaussRule};

pub const MAX_ORDER: i32 = 20;
const PANEL_NODES: usize = 16;

#[derive(Debug, Clone)]
pub struct BesselMellin {
    k: i32,
    t: f64,
    rule: GaussRule,
    breaks: Vec<f64>,
    cumulative: Vec<Complex64>,
    tail_from: f64,
    limit: Complex64,
}

impl BesselMellin {
    pub fn new(k: i32, t: f64) -> Result<Self> {
        if k.abs() > MAX_ORDER {
            return Err(Error::range("bessel order", format!("|k| = {} > {MAX_ORDER}", k.abs())));
        }
        if !t.is_finite() {
            return Err(Error::invalid("t", "must be finite"));
        }
        let rule = gauss_legendre(PANEL_NODES);
        let tail_from = 64f64.max(4.0 * (k * k) as f64);
        let mut breaks = vec![1.0];
        let mut cumulative = vec![series(1.0, k, t)];
        let mut p = 1.0;
        while p < tail_from {
            let w = (0.5 * p / (1.0 + t.abs())).min(1.0).min(tail_from - p);
            let next = *cumulative.last().unwrap() + panel(&rule, p, p + w, k, t)?;
            p += w;
            breaks.push(p);
            cumulative.push(next);
        }
        let limit = *cumulative.last().unwrap() + hankel_tail(tail_from, k, t);
        Ok(BesselMellin {
            k,
            t,
            rule,
            breaks,
            cumulative,
            tail_from,
            limit,
        })
    }

    pub fn order(&self) -> i32 {
        self.k
    }

    /// `∫_0^∞ J_k(ρ) ρ^{it} dρ` as assembled by the quadrature.
    pub fn limit(&self) -> Complex64 {
        self.limit
    }

    pub fn eval(&self, b: f64) -> Result<Complex64> {
        if b <= 0.0 {
            return Ok(Complex64::default());
        }
        if b <= 1.0 {
            return Ok(series(b, self.k, self.t));
        }
        if b > self.tail_from {
            return Ok(self.limit - hankel_tail(b, self.k, self.t));
        }
        let j = self.breaks.partition_point(|&x| x <= b) - 1;
        let p = self.breaks[j];
        if b == p {
            return Ok(self.cumulative[j]);
        }
        Ok(self.cumulative[j] + panel(&self.rule, p, b, self.k, self.t)?)
    }
}

/// Closed form `2^{it} Γ((k+1+it)/2) / Γ((k+1-it)/2)`, of unit modulus.
pub fn bessel_mellin_closed_form(k: i32, t: f64) -> Complex64 {
    let n = k.unsigned_abs() as f64;
    let up = gamma(Complex64::new((n + 1.0) / 2.0, t / 2.0));
    let down = gamma(Complex64::new((n + 1.0) / 2.0, -t / 2.0));
    let sign = if k < 0 && k % 2 != 0 { -1.0 } else { 1.0 };
    Complex64::from_polar(sign, t * 2f64.ln()) * up / down
}

fn panel(rule: &GaussRule, lo: f64, hi: f64, k: i32, t: f64) -> Result<Complex64> {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut acc = Complex64::default();
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let rho = mid + half * x;
        acc += Complex64::from_polar(bessel_j(k, rho)? * w, t * rho.ln());
    }
    Ok(acc * half)
}

fn series(b: f64, k: i32, t: f64) -> Complex64 {
    let n = k.unsigned_abs();
    let sign = if k < 0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let mut c = 0.5f64.powi(n as i32) / (1..=n).map(|j| j as f64).product::<f64>();
    let mut sum = Complex64::default();
    for m in 0..100u32 {
        let power = (2 * m + n + 1) as f64;
        let term = Complex64::new(c * b.powf(power), 0.0) / Complex64::new(power, t);
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        c = -c / (4.0 * (m + 1) as f64 * (m + 1 + n) as f64);
    }
    sum * Complex64::from_polar(sign, t * b.ln())
}

/// `∫_b^∞ J_k(ρ) ρ^{it} dρ` from the Hankel expansion of `J_k`.
fn hankel_tail(b: f64, k: i32, t: f64) -> Complex64 {
    let coeffs = hankel_coefficients(k, 60);
    let phase = k as f64 * FRAC_PI_2 + FRAC_PI_4;
    let mut acc = Complex64::default();
    let mut last = f64::INFINITY;
    let i = Complex64::new(0.0, 1.0);
    for (j, &a) in coeffs.iter().enumerate() {
        let size = a.abs() / b.powi(j as i32);
        if size > last || size < 1e-17 {
            break;
        }
        last = size;
        let z = Complex64::new(0.5 - j as f64, t);
        let plus = i.powu(j as u32) * Complex64::from_polar(1.0, -phase) * contour_tail(b, z, KernelSign::Positive);
        let minus = (-i).powu(j as u32) * Complex64::from_polar(1.0, phase) * contour_tail(b, z, KernelSign::Negative);
        acc += (plus + minus) * a;
    }
    acc / (2.0 * PI).sqrt()
}
