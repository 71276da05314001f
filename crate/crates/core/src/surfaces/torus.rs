//! Flat tori `ℝ² / Bℤ²`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::Matrix2;
use num_complex::Complex64;

use super::field::{Azimuthal, MeridianGrid, SurfaceField};
use crate::error::{Error, Result};

/// Lattice with basis vectors as the columns of `basis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    basis: Matrix2<f64>,
}

impl Lattice {
    pub fn new(columns: [[f64; 2]; 2]) -> Result<Self> {
        let basis = Matrix2::new(columns[0][0], columns[1][0], columns[0][1], columns[1][1]);
        let det = basis.determinant();
        if !det.is_finite() || det.abs() < 1e-12 * basis.norm_squared().max(1e-300) {
            return Err(Error::invalid("lattice basis", "must be non-singular"));
        }
        Ok(Lattice { basis })
    }

    pub fn unit_square() -> Self {
        Lattice { basis: Matrix2::identity() }
    }

    pub fn area(&self) -> f64 {
        self.basis.determinant().abs()
    }

    /// The dual-lattice vector `2π B^{-T} k`.
    pub fn dual(&self, k: (i64, i64)) -> [f64; 2] {
        let inv_t = self.basis.try_inverse().expect("validated basis").transpose();
        let v = inv_t * nalgebra::Vector2::new(k.0 as f64, k.1 as f64) * (2.0 * PI);
        [v.x, v.y]
    }

    /// Laplace eigenvalue `|2π B^{-T} k|²`.
    pub fn eigenvalue(&self, k: (i64, i64)) -> f64 {
        let d = self.dual(k);
        d[0] * d[0] + d[1] * d[1]
    }

    /// Uniform periodic grid in the first lattice coordinate.
    pub fn grid(&self, n: usize) -> Result<MeridianGrid> {
        let n = n.max(3);
        let coords: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let length = self.basis.column(0).norm();
        let arclength = coords.iter().map(|s| s * length).collect();
        MeridianGrid::new(coords, arclength, vec![1.0; n], (0.0, 1.0), self.area(), length)
    }

    /// A grid with at least eight samples per oscillation of mode `k`.
    pub fn grid_for(&self, k: (i64, i64)) -> Result<MeridianGrid> {
        self.grid(8 * k.0.unsigned_abs() as usize + 16)
    }
}

/// `e^{2πi(k₁s + k₂t)}` in lattice coordinates `x = B(s, t)`, with modulus 1.
pub fn torus_eigenfunction(k: (i64, i64), grid: Arc<MeridianGrid>) -> Result<SurfaceField> {
    let values = grid
        .coords
        .iter()
        .map(|&s| Complex64::from_polar(1.0, 2.0 * PI * k.0 as f64 * s))
        .collect();
    SurfaceField::new(grid, values, Azimuthal::Exp(k.1), k.0.unsigned_abs() as f64)
}
