//! Smooth compactly supported cutoffs and their small-scale rescalings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Shape of a cutoff on the reference interval `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `exp(1 - 1/(1 - t²))` for `|t| < 1`; equals 1 only at the origin.
    Bump,
    /// Identically 1 on `|t| ≤ 1/2`, decaying smoothly to 0 at `|t| = 1`.
    Plateau,
}

impl Profile {
    pub fn eval(self, t: f64) -> f64 {
        let a = t.abs();
        if a >= 1.0 {
            return 0.0;
        }
        match self {
            Profile::Bump => (1.0 - 1.0 / (1.0 - a * a)).exp(),
            Profile::Plateau => {
                if a <= 0.5 {
                    return 1.0;
                }
                let u = 2.0 * (a - 0.5);
                let rise = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
                let (g0, g1) = (rise(1.0 - u), rise(u));
                g0 / (g0 + g1)
            }
        }
    }
}

/// `χ(ħ^{-δ}(x - c)/ε)` in position and `χ(ħ^{-δ}ξ/ε)` in frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cutoff {
    pub profile: Profile,
    pub epsilon: f64,
    pub delta: f64,
    pub center: Vec<f64>,
}

impl Cutoff {
    pub fn new(profile: Profile, epsilon: f64, delta: f64, center: Vec<f64>) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::invalid("epsilon", format!("must be positive, got {epsilon}")));
        }
        if !(0.0..0.5).contains(&delta) {
            return Err(Error::invalid("delta", format!("must lie in [0, 1/2), got {delta}")));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("center", "must be finite"));
        }
        Ok(Cutoff {
            profile,
            epsilon,
            delta,
            center,
        })
    }

    /// Default microlocalizer: bump of radius 1/4 at the origin, no shrinking.
    pub fn microlocalizer() -> Self {
        Cutoff {
            profile: Profile::Bump,
            epsilon: 0.25,
            delta: 0.0,
            center: Vec::new(),
        }
    }

    /// Support radius `ε ħ^δ`.
    pub fn radius(&self, hbar: f64) -> f64 {
        self.epsilon * hbar.powf(self.delta)
    }

    fn center_of(&self, axis: usize) -> f64 {
        self.center.get(axis).copied().unwrap_or(0.0)
    }

    /// One-dimensional factor along `axis` in position space.
    pub fn eval_x_axis(&self, hbar: f64, axis: usize, x: f64) -> f64 {
        self.profile.eval((x - self.center_of(axis)) / self.radius(hbar))
    }

    /// One-dimensional factor in frequency space.
    pub fn eval_xi_axis(&self, hbar: f64, xi: f64) -> f64 {
        self.profile.eval(xi / self.radius(hbar))
    }

    pub fn eval_x(&self, hbar: f64, x: &[f64]) -> f64 {
        x.iter()
            .enumerate()
            .map(|(j, &xj)| self.eval_x_axis(hbar, j, xj))
            .product()
    }

    pub fn eval_xi(&self, hbar: f64, xi: &[f64]) -> f64 {
        xi.iter().map(|&k| self.eval_xi_axis(hbar, k)).product()
    }
}
