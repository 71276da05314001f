//! Explicit quantum completely integrable surfaces: the flat torus, the round
//! sphere and convex surfaces of revolution, with their joint spectra,
//! separated eigenfunctions and singular leaves.

mod field;
mod profile;
mod radial;
mod sphere;
mod torus;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cutoff::{Cutoff, Profile};
use crate::eliasson::{moment_rank, MomentRank};
use crate::error::{Error, Result};

pub use field::{Azimuthal, MeridianGrid, SurfaceField};
pub use profile::{CubicSpline, RevolutionProfile};
pub use radial::{revolution_joint_spectrum, RadialMode, RadialSolver, DEFAULT_CELLS, MAX_COUNT};
pub use sphere::{
    normalized_legendre_column, sphere_grid, sphere_grid_for_degree, sphere_harmonic, sphere_harmonic_complex,
    sphere_joint_spectrum, sphere_profiles, MAX_DEGREE,
};
pub use torus::{torus_eigenfunction, Lattice};

/// Scale factor of the tube cutoff: the cutoff equals 1 within `ħ^δ` of the
/// leaf and vanishes beyond `2ħ^δ`.
pub const TUBE_EPSILON: f64 = 2.0;
/// Minimum number of meridian samples inside the tube.
pub const TUBE_MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurfaceModel {
    FlatTorus { basis: [[f64; 2]; 2] },
    RoundSphere,
    Revolution(RevolutionProfile),
}

impl SurfaceModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            SurfaceModel::FlatTorus { basis } => Lattice::new(*basis).map(|_| ()),
            SurfaceModel::RoundSphere => Ok(()),
            SurfaceModel::Revolution(p) => p.validate(),
        }
    }

    /// Meridian profile `a(r)`, for the rotationally symmetric models.
    pub fn revolution_profile(&self) -> Option<RevolutionProfile> {
        match self {
            SurfaceModel::FlatTorus { .. } => None,
            SurfaceModel::RoundSphere => Some(RevolutionProfile::Sine),
            SurfaceModel::Revolution(p) => Some(p.clone()),
        }
    }
}

/// A joint eigenvalue of `(√Δ, D_θ)` and its semiclassical rescaling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointEigenvalue {
    /// Laplace eigenvalue `λ²`.
    pub eigenvalue: f64,
    /// `(m, j)`: azimuthal number and radial index.
    pub quantum_numbers: (i64, i64),
    /// `ħ = 1/λ`, absent for `λ = 0`.
    pub hbar: Option<f64>,
    /// `(ħλ, ħm)`.
    pub mu: Option<[f64; 2]>,
}

impl JointEigenvalue {
    pub fn new(eigenvalue: f64, m: i64, j: i64) -> Self {
        let lambda = eigenvalue.max(0.0).sqrt();
        let (hbar, mu) = if lambda > 1e-9 {
            let h = lambda.recip();
            (Some(h), Some([1.0, h * m as f64]))
        } else {
            (None, None)
        };
        JointEigenvalue {
            eigenvalue,
            quantum_numbers: (m, j),
            hbar,
            mu,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.eigenvalue.max(0.0).sqrt()
    }

    pub fn m(&self) -> i64 {
        self.quantum_numbers.0
    }

    pub fn radial_index(&self) -> i64 {
        self.quantum_numbers.1
    }
}

/// The members with `|μ_j − b_j| ≤ C ħ` for both coordinates.
pub fn ladder_select(spectrum: &[JointEigenvalue], b: [f64; 2], c: f64) -> Vec<JointEigenvalue> {
    spectrum
        .iter()
        .filter(|e| match (e.mu, e.hbar) {
            (Some(mu), Some(h)) => mu
                .iter()
                .zip(&b)
                .all(|(m, bj)| (m - bj).abs() <= c * h + 1e-12 * bj.abs().max(1.0)),
            _ => false,
        })
        .cloned()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LeafKind {
    /// The closed geodesic `r = r₀` traversed by the orbit.
    EquatorGeodesic { r0: f64 },
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularLeaf {
    pub description: LeafKind,
    /// Dimension `ℓ` of the orbit.
    pub rank: usize,
    /// `n − ℓ`.
    pub codim: usize,
    /// Samples `(r, θ)` of the projected orbit.
    pub projection: Vec<[f64; 2]>,
}

impl SingularLeaf {
    pub fn equator(&self) -> Option<f64> {
        match self.description {
            LeafKind::EquatorGeodesic { r0 } => Some(r0),
            LeafKind::None => None,
        }
    }
}

/// Gradients of the joint symbol `(|ξ|_g, ξ_θ)` in `(r, θ, ξ_r, ξ_θ)` at a
/// covector, by central differences.
pub fn moment_gradients(profile: &RevolutionProfile, point: [f64; 4]) -> Vec<Vec<f64>> {
    let p1 = |z: &[f64; 4]| {
        let a = profile.eval(z[0]);
        (z[2] * z[2] + z[3] * z[3] / (a * a)).sqrt()
    };
    let p2 = |z: &[f64; 4]| z[3];
    let h = 1e-6;
    let grad = |f: &dyn Fn(&[f64; 4]) -> f64| {
        (0..4)
            .map(|k| {
                let (mut up, mut down) = (point, point);
                up[k] += h;
                down[k] -= h;
                (f(&up) - f(&down)) / (2.0 * h)
            })
            .collect::<Vec<f64>>()
    };
    vec![grad(&p1), grad(&p2)]
}

/// Rank of the moment map at the unit covector tangent to the equator.
pub fn equatorial_moment_rank(profile: &RevolutionProfile) -> Result<MomentRank> {
    let r0 = profile.equator()?;
    let a0 = profile.eval(r0);
    // rank is blurred by the finite-difference error around 1e-10
    let g = moment_gradients(profile, [r0, 0.0, 0.0, a0]);
    let cleaned: Vec<Vec<f64>> = g
        .into_iter()
        .map(|v| v.into_iter().map(|x| if x.abs() < 1e-7 { 0.0 } else { x }).collect())
        .collect();
    moment_rank(&cleaned, 1)
}

pub fn singular_leaf_of(surface: &SurfaceModel) -> Result<SingularLeaf> {
    match surface.revolution_profile() {
        None => Ok(SingularLeaf {
            description: LeafKind::None,
            rank: 2,
            codim: 0,
            projection: Vec::new(),
        }),
        Some(profile) => {
            let r0 = profile.equator()?;
            let rank = equatorial_moment_rank(&profile)?.rank;
            let projection = (0..64).map(|k| [r0, 2.0 * PI * k as f64 / 64.0]).collect();
            Ok(SingularLeaf {
                description: LeafKind::EquatorGeodesic { r0 },
                rank,
                codim: 2 - rank,
                projection,
            })
        }
    }
}

fn tube_cutoff(leaf: &SingularLeaf, delta: f64, hbar: f64) -> Result<(f64, Cutoff)> {
    let r0 = leaf
        .equator()
        .ok_or_else(|| Error::invalid("leaf", "the surface has no singular leaf"))?;
    if !(hbar > 0.0 && hbar < 1.0) {
        return Err(Error::invalid("hbar", format!("must lie in (0, 1), got {hbar}")));
    }
    Ok((r0, Cutoff::new(Profile::Plateau, TUBE_EPSILON, delta, vec![r0])?))
}

fn tube_weights(grid: &MeridianGrid, leaf: &SingularLeaf, delta: f64, hbar: f64) -> Result<Vec<f64>> {
    let (r0, cutoff) = tube_cutoff(leaf, delta, hbar)?;
    let radius = cutoff.radius(hbar);
    let inside = grid.arclength.iter().filter(|&&s| (s - r0).abs() < radius).count();
    if inside < TUBE_MIN_SAMPLES {
        return Err(Error::resolution(format!(
            "tube of radius {radius:.3e} holds {inside} samples, need {TUBE_MIN_SAMPLES}"
        )));
    }
    Ok(grid.arclength.iter().map(|&s| cutoff.eval_x_axis(hbar, 0, s)).collect())
}

/// Fraction of the L² mass of `phi` within the `ħ^δ` tube around the leaf.
pub fn tube_mass(phi: &SurfaceField, leaf: &SingularLeaf, delta: f64, hbar: f64) -> Result<f64> {
    let chi = tube_weights(&phi.grid, leaf, delta, hbar)?;
    let (mut inside, mut total) = (0.0, 0.0);
    for ((v, w), c) in phi.meridian.iter().zip(&phi.grid.weights).zip(&chi) {
        let d = w * v.norm_sqr();
        inside += c * d;
        total += d;
    }
    if !(total > 0.0) {
        return Err(Error::invalid("phi", "has zero norm"));
    }
    Ok(inside / total)
}

/// `∫ χ dvol` of the tube cutoff for the volume-one measure.
pub fn tube_volume(grid: &MeridianGrid, leaf: &SingularLeaf, delta: f64, hbar: f64) -> Result<f64> {
    let chi = tube_weights(grid, leaf, delta, hbar)?;
    Ok(chi.iter().zip(&grid.weights).map(|(c, w)| c * w).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_leaf_is_codimension_one() {
        let leaf = singular_leaf_of(&SurfaceModel::Revolution(RevolutionProfile::Sine)).unwrap();
        assert!((leaf.equator().unwrap() - PI / 2.0).abs() < 1e-12);
        assert_eq!((leaf.rank, leaf.codim), (1, 1));
        let torus = singular_leaf_of(&SurfaceModel::FlatTorus {
            basis: [[1.0, 0.0], [0.0, 1.0]],
        })
        .unwrap();
        assert_eq!(torus.description, LeafKind::None);
    }

    #[test]
    fn generic_covector_has_full_rank() {
        let g = moment_gradients(&RevolutionProfile::Sine, [1.0, 0.3, 0.5, 0.4]);
        assert_eq!(moment_rank(&g, 2).unwrap().rank, 2);
    }

    #[test]
    fn empty_ladder() {
        assert!(ladder_select(&[], [1.0, 1.0], 1.0).is_empty());
    }
}
