//! Partial Mellin-type oscillatory integrals
//! `I_σ(a; s) = ∫_0^a e^{iσx} x^{z-1} dx` with `z = 1/2 + is`, `σ = ±1`.
//!
//! * `a ≤ 1`: the power series of the exponential, integrated termwise.
//! * `1 < a ≤ 64`: Filon panels. The amplitude `x^{z-1}` is interpolated at
//!   Gauss nodes and the exponential is integrated exactly against the
//!   Lagrange basis, so a panel may span several oscillations.
//! * `a > 64`: `I(64) + T(64) - T(a)` with the tail `T(b) = ∫_b^∞` obtained by
//!   rotating the contour onto `b + iσy` and applying Gauss–Laguerre.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::special::{gamma, gauss_laguerre, gauss_legendre, GaussRule};

const SERIES_LIMIT: f64 = 1.0;
const TAIL_FROM: f64 = 64.0;
const MAX_PANEL: f64 = 4.0;
const FILON_NODES: usize = 12;
const MOMENT_NODES: usize = 48;
const LAGUERRE_NODES: usize = 40;

/// Sign of the exponential in the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelSign {
    /// `e^{-ix}`
    Negative,
    /// `e^{+ix}`
    Positive,
}

impl KernelSign {
    pub fn sigma(self) -> f64 {
        match self {
            KernelSign::Negative => -1.0,
            KernelSign::Positive => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            KernelSign::Negative => KernelSign::Positive,
            KernelSign::Positive => KernelSign::Negative,
        }
    }
}

struct FilonTables {
    nodes: Vec<f64>,
    moment_rule: GaussRule,
    /// `lagrange[q][i] = ℓ_i(τ_q)` at the moment-rule nodes.
    lagrange: Vec<Vec<f64>>,
}

fn filon_tables() -> &'static FilonTables {
    static TABLES: OnceLock<FilonTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let nodes: Vec<f64> = gauss_legendre(FILON_NODES)
            .nodes
            .iter()
            .map(|t| 0.5 * (t + 1.0))
            .collect();
        let moment_rule = gauss_legendre(MOMENT_NODES).mapped(0.0, 1.0);
        let lagrange = moment_rule
            .nodes
            .iter()
            .map(|&tau| {
                (0..FILON_NODES)
                    .map(|i| {
                        nodes
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .map(|(_, &tj)| (tau - tj) / (nodes[i] - tj))
                            .product()
                    })
                    .collect()
            })
            .collect();
        FilonTables {
            nodes,
            moment_rule,
            lagrange,
        }
    })
}

fn laguerre() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| gauss_laguerre(LAGUERRE_NODES))
}

/// `∫_p^{p+w} e^{iσx} g(x) dx` by a Filon rule with exact exponential moments.
pub(crate) fn filon_panel(p: f64, w: f64, sigma: f64, g: impl Fn(f64) -> Complex64) -> Complex64 {
    let t = filon_tables();
    let kappa = sigma * w;
    let mut weights = [Complex64::default(); FILON_NODES];
    for (q, (&tau, &omega)) in t.moment_rule.nodes.iter().zip(&t.moment_rule.weights).enumerate() {
        let e = Complex64::from_polar(omega, kappa * tau);
        for (wi, &li) in weights.iter_mut().zip(&t.lagrange[q]) {
            *wi += e * li;
        }
    }
    let sum: Complex64 = weights
        .iter()
        .zip(&t.nodes)
        .map(|(wi, &tau)| wi * g(p + w * tau))
        .sum();
    sum * Complex64::from_polar(w, sigma * p)
}

/// `∫_b^∞ e^{iσx} x^{z-1} dx` for `b > 0` large and `Re z < 1`.
pub(crate) fn contour_tail(b: f64, z: Complex64, sign: KernelSign) -> Complex64 {
    let sigma = sign.sigma();
    let rule = laguerre();
    let integral: Complex64 = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&y, &w)| Complex64::new(b, sigma * y).powc(z - 1.0) * w)
        .sum();
    Complex64::new(0.0, sigma) * Complex64::from_polar(1.0, sigma * b) * integral
}

/// Full-range value `e^{iσπz/2} Γ(z)`.
pub fn mellin_limit(s: f64, sign: KernelSign) -> Complex64 {
    let z = Complex64::new(0.5, s);
    (Complex64::new(0.0, sign.sigma() * FRAC_PI_2) * z).exp() * gamma(z)
}

/// Precomputed panel sums for repeated evaluation at fixed `s`.
#[derive(Debug, Clone)]
pub struct OscillatoryPartial {
    s: f64,
    sign: KernelSign,
    z: Complex64,
    /// Panel left endpoints from 1 up to (and including) `TAIL_FROM`.
    breaks: Vec<f64>,
    /// `I(breaks[j])`.
    cumulative: Vec<Complex64>,
    /// `I(64) + T(64)`, the numerically obtained full-range value.
    limit: Complex64,
}

impl OscillatoryPartial {
    pub fn new(s: f64, sign: KernelSign) -> Self {
        let z = Complex64::new(0.5, s);
        let sigma = sign.sigma();
        let amplitude = move |x: f64| Complex64::new(x, 0.0).powc(z - 1.0);
        let mut breaks = vec![SERIES_LIMIT];
        let mut cumulative = vec![series(SERIES_LIMIT, z, sigma)];
        let mut p = SERIES_LIMIT;
        while p < TAIL_FROM {
            let w = panel_width(p, s).min(TAIL_FROM - p);
            let next = *cumulative.last().unwrap() + filon_panel(p, w, sigma, amplitude);
            p += w;
            breaks.push(p);
            cumulative.push(next);
        }
        let limit = *cumulative.last().unwrap() + contour_tail(TAIL_FROM, z, sign);
        OscillatoryPartial {
            s,
            sign,
            z,
            breaks,
            cumulative,
            limit,
        }
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// The full-range integral as assembled by the quadrature.
    pub fn limit(&self) -> Complex64 {
        self.limit
    }

    /// `I(a)` for `a ≥ 0`.
    pub fn eval(&self, a: f64) -> Complex64 {
        let sigma = self.sign.sigma();
        if a <= 0.0 {
            return Complex64::default();
        }
        if a <= SERIES_LIMIT {
            return series(a, self.z, sigma);
        }
        if a > TAIL_FROM {
            return self.limit - contour_tail(a, self.z, self.sign);
        }
        let j = self.breaks.partition_point(|&b| b <= a) - 1;
        let p = self.breaks[j];
        if a == p {
            return self.cumulative[j];
        }
        let z = self.z;
        self.cumulative[j] + filon_panel(p, a - p, sigma, move |x| Complex64::new(x, 0.0).powc(z - 1.0))
    }
}

fn panel_width(x: f64, s: f64) -> f64 {
    (0.5 * x / (1.0 + s.abs())).min(MAX_PANEL)
}

fn series(a: f64, z: Complex64, sigma: f64) -> Complex64 {
    // Σ_k (iσ)^k a^{k+z} / (k! (k+z))
    let az = Complex64::new(a, 0.0).powc(z);
    let step = Complex64::new(0.0, sigma * a);
    let mut coeff = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::default();
    for k in 0..200 {
        let term = coeff / (z + k as f64);
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        coeff = coeff * step / (k as f64 + 1.0);
    }
    sum * az
}

/// `∫_0^a e^{-ix} x^{-1/2 + is} dx`.
pub fn oscillatory_partial(a: f64, s: f64) -> Complex64 {
    oscillatory_partial_signed(a, s, KernelSign::Negative)
}

/// `∫_0^a e^{iσx} x^{-1/2 + is} dx` for either kernel sign.
pub fn oscillatory_partial_signed(a: f64, s: f64, sign: KernelSign) -> Complex64 {
    let z = Complex64::new(0.5, s);
    if a <= SERIES_LIMIT {
        return if a <= 0.0 {
            Complex64::default()
        } else {
            series(a, z, sign.sigma())
        };
    }
    OscillatoryPartial::new(s, sign).eval(a)
}
