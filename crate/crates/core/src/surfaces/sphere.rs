//! Spherical harmonics on the round unit sphere.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{Azimuthal, MeridianGrid, SurfaceField};
use super::JointEigenvalue;
use crate::error::{Error, Result};
use crate::special::gauss_legendre;

pub const MAX_DEGREE: usize = 2000;

const RESCALE: f64 = 1e150;

/// Gauss–Legendre grid in `cos θ` with `n` nodes (made odd so that the
/// equator is a node).
pub fn sphere_grid(n: usize) -> Result<MeridianGrid> {
    let n = n.max(3) | 1;
    let rule = gauss_legendre(n);
    let arclength = rule.nodes.iter().map(|x| x.clamp(-1.0, 1.0).acos()).collect();
    MeridianGrid::new(rule.nodes, arclength, rule.weights, (-1.0, 1.0), 4.0 * PI, PI)
}

/// A grid exact for `|Y_l^m|^p` with `p ≤ 8` and fine enough for the
/// resolution checks at degree `l`.
pub fn sphere_grid_for_degree(l: usize) -> Result<MeridianGrid> {
    sphere_grid(4 * l + 9)
}

fn log_sectoral(m: usize) -> f64 {
    // ½ ln((2m+1)/2) + ½ Σ_{k≤m} ln((2k-1)/(2k))
    let mut acc = 0.5 * ((2.0 * m as f64 + 1.0) / 2.0).ln();
    for k in 1..=m {
        acc += 0.5 * ((2.0 * k as f64 - 1.0) / (2.0 * k as f64)).ln();
    }
    acc
}

/// Normalized associated Legendre functions `P̃_l^m(x)` for `l = m..=l_max`,
/// with `∫_{-1}^{1} P̃² dx = 1`, computed by the three-term recurrence in `l`
/// with an exponent carried separately to avoid underflow at high order.
pub fn normalized_legendre_column(m: usize, l_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; l_max + 1 - m];
    let s2 = (1.0 - x * x).max(0.0);
    if m > 0 && s2 == 0.0 {
        return out;
    }
    let mut exponent = log_sectoral(m) + if m > 0 { 0.5 * m as f64 * s2.ln() } else { 0.0 };
    let mut prev2 = 0.0;
    let mut prev1 = 1.0;
    out[0] = exponent.exp();
    let mf = m as f64;
    for l in (m + 1)..=l_max {
        let lf = l as f64;
        let next = if l == m + 1 {
            x * (2.0 * mf + 3.0).sqrt() * prev1
        } else {
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0).powi(2) - mf * mf) / (4.0 * (lf - 1.0).powi(2) - 1.0)).sqrt();
            a * (x * prev1 - b * prev2)
        };
        prev2 = prev1;
        prev1 = next;
        if prev1.abs() > RESCALE {
            prev1 /= RESCALE;
            prev2 /= RESCALE;
            exponent += RESCALE.ln();
        }
        out[l - m] = prev1 * exponent.exp();
    }
    out
}

fn check_degree(l: usize, m: i64) -> Result<()> {
    if l > MAX_DEGREE {
        return Err(Error::range("degree", format!("l = {l} exceeds {MAX_DEGREE}")));
    }
    if m.unsigned_abs() as usize > l {
        return Err(Error::range("order", format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    Ok(())
}

/// Meridian profiles `P̃_l^m(cos θ_i) / √(2π)` for all `l = |m|..=l_max`, as
/// Riemannian-normalized harmonics (one vector per degree).
pub fn sphere_profiles(m: i64, l_max: usize, grid: &MeridianGrid) -> Result<Vec<Vec<f64>>> {
    check_degree(l_max, m)?;
    let ma = m.unsigned_abs() as usize;
    let scale = (2.0 * PI).sqrt().recip();
    let columns: Vec<Vec<f64>> = grid
        .coords
        .par_iter()
        .map(|&x| normalized_legendre_column(ma, l_max, x))
        .collect();
    Ok((0..=(l_max - ma))
        .map(|k| columns.iter().map(|c| c[k] * scale).collect())
        .collect())
}

fn harmonic(l: usize, m: i64, grid: Arc<MeridianGrid>, azimuthal: Azimuthal) -> Result<SurfaceField> {
    check_degree(l, m)?;
    let profile = sphere_profiles(m, l, &grid)?.pop().expect("non-empty range");
    let lambda = ((l * (l + 1)) as f64).sqrt();
    SurfaceField::new(
        grid,
        profile.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        azimuthal,
        lambda / 2.0,
    )
}

/// Real spherical harmonic `Y_l^m`, with unit L² norm on the unit sphere.
pub fn sphere_harmonic(l: usize, m: i64, grid: Arc<MeridianGrid>) -> Result<SurfaceField> {
    harmonic(l, m, grid, Azimuthal::Cos(m.abs()))
}

/// Complex spherical harmonic `P̃_l^m(cos θ) e^{imφ} / √(2π)`.
pub fn sphere_harmonic_complex(l: usize, m: i64, grid: Arc<MeridianGrid>) -> Result<SurfaceField> {
    harmonic(l, m, grid, Azimuthal::Exp(m))
}

/// All joint eigenvalues `(l, m)` of `(√Δ, D_φ)` with `l ≤ l_max`.
pub fn sphere_joint_spectrum(l_max: usize) -> Vec<JointEigenvalue> {
    let mut out = Vec::new();
    for l in 0..=l_max {
        for m in -(l as i64)..=(l as i64) {
            out.push(JointEigenvalue::new((l * (l + 1)) as f64, m, (l - m.unsigned_abs() as usize) as i64));
        }
    }
    out
}
