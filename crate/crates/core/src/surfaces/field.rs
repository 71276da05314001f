//! Quadrature along a meridian and separated fields `f(r) · g(θ)`.
//!
//! Every surface in this crate is foliated by circles (or, for the torus,
//! parallel closed geodesics), and all fields are separated into a sampled
//! meridian factor and an explicit azimuthal factor. Quadrature weights are
//! normalized so that the surface has total volume 1.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::ln_gamma_real;

#[derive(Debug, Clone, PartialEq)]
pub struct MeridianGrid {
    /// Quadrature coordinate (`cos θ` on the sphere, `r` on a revolution
    /// surface, the first lattice coordinate on the torus).
    pub coords: Vec<f64>,
    /// Meridian arclength coordinate used for distances to the equator.
    pub arclength: Vec<f64>,
    /// Normalized weights, summing to 1.
    pub weights: Vec<f64>,
    /// Closed interval spanned by `coords`.
    pub coord_range: (f64, f64),
    /// Riemannian area of the surface.
    pub volume: f64,
    /// Meridian length in arclength.
    pub meridian_length: f64,
}

impl MeridianGrid {
    pub fn new(
        coords: Vec<f64>,
        arclength: Vec<f64>,
        raw_weights: Vec<f64>,
        coord_range: (f64, f64),
        volume: f64,
        meridian_length: f64,
    ) -> Result<Self> {
        let n = coords.len();
        if n < 3 || arclength.len() != n || raw_weights.len() != n {
            return Err(Error::invalid("meridian grid", "needs at least three aligned samples"));
        }
        let total: f64 = raw_weights.iter().sum();
        if !(total > 0.0) || raw_weights.iter().any(|w| *w < 0.0) {
            return Err(Error::invalid("meridian grid", "weights must be non-negative with positive sum"));
        }
        Ok(MeridianGrid {
            coords,
            arclength,
            weights: raw_weights.into_iter().map(|w| w / total).collect(),
            coord_range,
            volume,
            meridian_length,
        })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Azimuthal factor of a separated field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "m", rename_all = "snake_case")]
pub enum Azimuthal {
    /// `e^{imθ}`, of unit modulus.
    Exp(i64),
    /// `√2 cos(mθ)` for `m ≠ 0`, and `1` for `m = 0`.
    Cos(i64),
}

impl Azimuthal {
    pub fn m(self) -> i64 {
        match self {
            Azimuthal::Exp(m) | Azimuthal::Cos(m) => m,
        }
    }

    /// Mean of `|g|^p` over the circle.
    pub fn mean_power(self, p: f64) -> f64 {
        match self {
            Azimuthal::Exp(_) | Azimuthal::Cos(0) => 1.0,
            Azimuthal::Cos(_) => {
                // mean of |cos|^p = Γ((p+1)/2) / (√π Γ(p/2 + 1))
                let log_mean = ln_gamma_real(0.5 * (p + 1.0))
                    - 0.5 * std::f64::consts::PI.ln()
                    - ln_gamma_real(0.5 * p + 1.0);
                (0.5 * p * 2f64.ln() + log_mean).exp()
            }
        }
    }

    /// Mean of `g · conj(h)` over the circle.
    pub fn mean_product(self, other: Azimuthal) -> f64 {
        use Azimuthal::{Cos, Exp};
        match (self, other) {
            (Exp(a), Exp(b)) => f64::from(u8::from(a == b)),
            (Cos(a), Cos(b)) => f64::from(u8::from(a.abs() == b.abs())),
            (Exp(a), Cos(b)) | (Cos(b), Exp(a)) => {
                if a.abs() != b.abs() {
                    0.0
                } else if a == 0 {
                    1.0
                } else {
                    std::f64::consts::FRAC_1_SQRT_2
                }
            }
        }
    }

    pub fn sup(self) -> f64 {
        match self {
            Azimuthal::Exp(_) | Azimuthal::Cos(0) => 1.0,
            Azimuthal::Cos(_) => std::f64::consts::SQRT_2,
        }
    }

    /// The factor at angle `theta` (in radians).
    pub fn eval(self, theta: f64) -> Complex64 {
        match self {
            Azimuthal::Exp(m) => Complex64::from_polar(1.0, m as f64 * theta),
            Azimuthal::Cos(0) => Complex64::new(1.0, 0.0),
            Azimuthal::Cos(m) => Complex64::new(std::f64::consts::SQRT_2 * (m as f64 * theta).cos(), 0.0),
        }
    }
}

/// A separated field `f(meridian) · g(azimuth)` on a surface.
#[derive(Debug, Clone)]
pub struct SurfaceField {
    pub grid: Arc<MeridianGrid>,
    pub meridian: Vec<Complex64>,
    pub azimuthal: Azimuthal,
    /// Oscillations of the field across the meridian, for resolution checks.
    pub meridian_wavelengths: f64,
}

impl SurfaceField {
    pub fn new(grid: Arc<MeridianGrid>, meridian: Vec<Complex64>, azimuthal: Azimuthal, meridian_wavelengths: f64) -> Result<Self> {
        if meridian.len() != grid.len() {
            return Err(Error::Dimension {
                expected: grid.len(),
                got: meridian.len(),
            });
        }
        Ok(SurfaceField {
            grid,
            meridian,
            azimuthal,
            meridian_wavelengths,
        })
    }

    /// Mean of `|φ|^p` over the surface.
    pub fn mean_power(&self, p: f64) -> f64 {
        let radial: f64 = self
            .meridian
            .iter()
            .zip(&self.grid.weights)
            .map(|(v, w)| w * v.norm().powf(p))
            .sum();
        radial * self.azimuthal.mean_power(p)
    }

    /// L² norm for the volume-one measure.
    pub fn norm_l2(&self) -> f64 {
        self.mean_power(2.0).sqrt()
    }

    /// Rescaled to unit L² norm for the volume-one measure.
    pub fn normalized(&self) -> SurfaceField {
        let n = self.norm_l2();
        let mut out = self.clone();
        if n > 0.0 {
            out.meridian.iter_mut().for_each(|v| *v /= n);
        }
        out
    }

    /// Rescaled to unit L² norm for the Riemannian area.
    pub fn normalized_riemannian(&self) -> SurfaceField {
        let mut out = self.normalized();
        let s = self.grid.volume.sqrt().recip();
        out.meridian.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// Weighted inner product `∫ φ · conj(ψ)` for the volume-one measure when
    /// both fields share the grid and the azimuthal factor.
    pub fn inner(&self, other: &SurfaceField) -> Result<Complex64> {
        if !Arc::ptr_eq(&self.grid, &other.grid) && *self.grid != *other.grid {
            return Err(Error::GridMismatch("surface fields live on different meridian grids".into()));
        }
        let angular = self.azimuthal.mean_product(other.azimuthal);
        if angular == 0.0 {
            return Ok(Complex64::default());
        }
        Ok(angular
            * self
            .meridian
            .iter()
            .zip(&other.meridian)
            .zip(&self.grid.weights)
            .map(|((a, b), w)| a * b.conj() * *w)
            .sum::<Complex64>())
    }

    pub fn sup_sampled(&self) -> (usize, f64) {
        self.meridian
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_power_means() {
        // mean of 2cos² is 1, mean of 4cos⁴ is 3/2
        assert!((Azimuthal::Cos(3).mean_power(2.0) - 1.0).abs() < 1e-13);
        assert!((Azimuthal::Cos(3).mean_power(4.0) - 1.5).abs() < 1e-13);
        let n = 10_000;
        let brute: f64 = (0..n)
            .map(|i| Azimuthal::Cos(2).eval(2.0 * std::f64::consts::PI * i as f64 / n as f64).norm().powf(6.0))
            .sum::<f64>()
            / n as f64;
        assert!((Azimuthal::Cos(2).mean_power(6.0) - brute).abs() < 1e-10);
    }
}
