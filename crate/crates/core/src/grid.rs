//! Uniform sample grids and complex-valued grid functions.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One uniform axis: points `start + i * spacing` for `i < len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub start: f64,
    pub spacing: f64,
    pub len: usize,
}

impl Axis {
    pub fn new(start: f64, spacing: f64, len: usize) -> Result<Self> {
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::invalid("spacing", format!("must be positive, got {spacing}")));
        }
        if len == 0 {
            return Err(Error::invalid("len", "axis needs at least one point"));
        }
        if !start.is_finite() {
            return Err(Error::invalid("start", "must be finite"));
        }
        Ok(Axis { start, spacing, len })
    }

    /// Cell-centred axis covering `[lo, hi]` with at most the given spacing.
    /// No node falls on `lo + k * spacing`, so a symmetric box never samples 0.
    pub fn cell_centered(lo: f64, hi: f64, max_spacing: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::invalid("interval", format!("[{lo}, {hi}] is empty")));
        }
        let len = ((hi - lo) / max_spacing).ceil().max(1.0) as usize;
        let spacing = (hi - lo) / len as f64;
        Axis::new(lo + 0.5 * spacing, spacing, len)
    }

    /// Periodic axis on `[0, period)` with `len` points.
    pub fn periodic(period: f64, len: usize) -> Result<Self> {
        Axis::new(0.0, period / len as f64, len)
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + i as f64 * self.spacing
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.point(i)).collect()
    }

    /// Length of the periodic box `len * spacing`.
    pub fn extent(&self) -> f64 {
        self.len as f64 * self.spacing
    }

    /// Closed interval spanned by the cells.
    pub fn bounds(&self) -> (f64, f64) {
        let lo = self.start - 0.5 * self.spacing;
        (lo, lo + self.extent())
    }

    /// Semiclassical frequencies `ξ_k = 2πħ k / (len * spacing)` in FFT order.
    pub fn frequencies(&self, hbar: f64) -> Vec<f64> {
        let n = self.len as i64;
        let step = 2.0 * std::f64::consts::PI * hbar / self.extent();
        (0..n)
            .map(|k| {
                let signed = if k <= (n - 1) / 2 { k } else { k - n };
                signed as f64 * step
            })
            .collect()
    }
}

/// A one- or two-dimensional product grid, stored row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<Axis>,
}

impl GridSpec {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::Dimension {
                expected: 2,
                got: axes.len(),
            });
        }
        Ok(GridSpec { axes })
    }

    pub fn line(axis: Axis) -> Self {
        GridSpec { axes: vec![axis] }
    }

    pub fn plane(a: Axis, b: Axis) -> Self {
        GridSpec { axes: vec![a, b] }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.len).collect()
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing).product()
    }

    pub fn max_spacing(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing).fold(0.0, f64::max)
    }

    /// Coordinates of the flat index `idx`.
    pub fn point(&self, idx: usize) -> Vec<f64> {
        match self.axes.as_slice() {
            [a] => vec![a.point(idx)],
            [a, b] => vec![a.point(idx / b.len), b.point(idx % b.len)],
            _ => unreachable!("grids are one- or two-dimensional"),
        }
    }

    /// Fails unless the spacing on every axis is at most `limit`.
    pub fn require_spacing(&self, limit: f64, what: &str) -> Result<()> {
        let worst = self.max_spacing();
        if worst > limit * (1.0 + 1e-12) {
            return Err(Error::resolution(format!(
                "{what}: spacing {worst:.3e} exceeds {limit:.3e}"
            )));
        }
        Ok(())
    }

    /// Whether two grids agree to round-off.
    pub fn matches(&self, other: &GridSpec) -> bool {
        self.axes.len() == other.axes.len()
            && self.axes.iter().zip(&other.axes).all(|(a, b)| {
                a.len == b.len
                    && (a.spacing - b.spacing).abs() <= 1e-12 * a.spacing
                    && (a.start - b.start).abs() <= 1e-12 * a.spacing.max(a.start.abs())
            })
    }
}

/// Complex samples on a [`GridSpec`], tagged with the semiclassical parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
    pub hbar: f64,
}

impl GridFunction {
    pub fn new(grid: GridSpec, values: Vec<Complex64>, hbar: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension {
                expected: grid.len(),
                got: values.len(),
            });
        }
        if !(hbar > 0.0) {
            return Err(Error::invalid("hbar", format!("must be positive, got {hbar}")));
        }
        Ok(GridFunction { grid, values, hbar })
    }

    /// Samples `f` at every grid point (in parallel).
    pub fn from_fn<F>(grid: GridSpec, hbar: f64, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| f(&grid.point(i)))
            .collect();
        GridFunction::new(grid, values, hbar)
    }

    /// Like [`GridFunction::from_fn`] but for fallible samplers.
    pub fn try_from_fn<F>(grid: GridSpec, hbar: f64, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Result<Complex64> + Sync,
    {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|i| f(&grid.point(i)))
            .collect::<Result<Vec<_>>>()?;
        GridFunction::new(grid, values, hbar)
    }

    pub fn norm_l2(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.cell_volume()).sqrt()
    }

    /// `∫ self · conj(other)` by the rectangle rule (exact trapezoid for
    /// periodic or compactly supported data).
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        if !self.grid.matches(&other.grid) {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid.shape(),
                other.grid.shape()
            )));
        }
        let sum: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum();
        Ok(sum * self.grid.cell_volume())
    }

    pub fn scaled(&self, factor: Complex64) -> GridFunction {
        GridFunction {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
            hbar: self.hbar,
        }
    }

    /// Unit-L² copy. A zero function is returned unchanged.
    pub fn normalized(&self) -> GridFunction {
        let n = self.norm_l2();
        if n == 0.0 {
            return self.clone();
        }
        self.scaled(Complex64::new(1.0 / n, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}
