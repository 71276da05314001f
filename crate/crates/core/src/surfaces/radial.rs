//! Separated spectrum of a surface of revolution.
//!
//! With `φ = e^{imθ} f(r)` the eigenvalue problem `Δφ = λ²φ` becomes
//! `-(a f')' + (m²/a) f = λ² a f` on `[0, R]`. It is discretized by a
//! cell-centred finite-volume scheme (zero flux through the end faces),
//! symmetrized by `v = √a · f`, and the resulting tridiagonal matrix is solved
//! by Sturm-sequence bisection and inverse iteration. Eigenvalues on the
//! meshes `h`, `h/2`, `h/4` are combined by two levels of Richardson
//! extrapolation after checking the observed convergence ratio.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::field::{Azimuthal, MeridianGrid, SurfaceField};
use super::profile::RevolutionProfile;
use super::JointEigenvalue;
use crate::error::{Error, Result};

pub const MAX_COUNT: usize = 200;
pub const DEFAULT_CELLS: usize = 512;

/// Accepted band for the ratio of successive mesh differences (4 for a
/// second-order scheme).
const RATIO_BAND: (f64, f64) = (3.0, 5.5);

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl Tridiagonal {
    fn len(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - x - if i == 0 { 0.0 } else { e2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based).
    fn eigenvalue(&self, k: usize, bounds: (f64, f64)) -> f64 {
        let (mut lo, mut hi) = bounds;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Solves `(T - σ) x = b` by Gaussian elimination with partial pivoting.
    fn shifted_solve(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        // rows hold (sub, diag, sup, sup2) after pivoting
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - sigma).collect();
        let mut du: Vec<f64> = self.off.clone();
        du.push(0.0);
        let mut dl: Vec<f64> = self.off.clone();
        let mut du2 = vec![0.0; n];
        let mut x = b.to_vec();
        let tiny = f64::EPSILON * self.gershgorin().1.abs().max(1.0);
        for i in 0..n - 1 {
            if dl[i].abs() > d[i].abs() {
                // swap rows i and i+1
                let f = d[i] / dl[i];
                d[i] = dl[i];
                let tmp = d[i + 1];
                d[i + 1] = du[i] - f * tmp;
                du[i] = tmp;
                if i + 1 < n - 1 {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du[i + 1];
                }
                x.swap(i, i + 1);
                x[i + 1] -= f * x[i];
                dl[i] = f;
            } else {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let f = dl[i] / d[i];
                d[i + 1] -= f * du[i];
                x[i + 1] -= f * x[i];
                dl[i] = f;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        x[n - 1] /= d[n - 1];
        if n > 1 {
            x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
        x
    }

    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let scale = self.gershgorin().1.abs().max(1.0);
        let sigma = lambda + 1e-10 * scale.min(lambda.abs().max(1.0));
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..4 {
            v = self.shifted_solve(sigma, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        // fix the sign so that the largest entry is positive
        let big = v.iter().copied().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
        if big < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    }
}

struct Discretization {
    matrix: Tridiagonal,
    centers: Vec<f64>,
    radius: Vec<f64>,
    step: f64,
}

fn discretize(profile: &RevolutionProfile, cells: usize, m: i64) -> Discretization {
    let len = profile.length();
    let h = len / cells as f64;
    let centers: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * h).collect();
    let radius: Vec<f64> = centers.iter().map(|&r| profile.eval(r)).collect();
    let faces: Vec<f64> = (1..cells).map(|i| profile.eval(i as f64 * h)).collect();
    let m2 = (m * m) as f64;
    let h2 = h * h;
    let mut diag = vec![0.0; cells];
    for i in 0..cells {
        let left = if i > 0 { faces[i - 1] } else { 0.0 };
        let right = if i + 1 < cells { faces[i] } else { 0.0 };
        diag[i] = (left + right) / (h2 * radius[i]) + m2 / (radius[i] * radius[i]);
    }
    let off = (0..cells - 1)
        .map(|i| -faces[i] / (h2 * (radius[i] * radius[i + 1]).sqrt()))
        .collect();
    Discretization {
        matrix: Tridiagonal { diag, off },
        centers,
        radius,
        step: h,
    }
}

fn lowest(t: &Tridiagonal, count: usize) -> Vec<f64> {
    let (lo, ceiling) = t.gershgorin();
    let mut hi = 1.0f64;
    while t.count_below(hi) < count && hi < ceiling {
        hi *= 2.0;
    }
    let bounds = (lo.min(0.0) - 1.0, hi.min(ceiling) + 1.0);
    (0..count).into_par_iter().map(|k| t.eigenvalue(k, bounds)).collect()
}

/// One separated eigenfunction `e^{imθ} f_j(r)`.
#[derive(Debug, Clone)]
pub struct RadialMode {
    pub m: i64,
    pub index: usize,
    /// Extrapolated eigenvalue `λ²`.
    pub eigenvalue: f64,
    /// Eigenvalues on the meshes `h`, `h/2`, `h/4`.
    pub mesh_eigenvalues: [f64; 3],
    /// Eigenvalue of the base-mesh matrix matching `profile`.
    pub base_eigenvalue: f64,
    /// `f_j` at the cell centres of the base mesh, unit L² for the volume-one measure.
    pub profile: Vec<f64>,
}

/// Separated spectrum solver with a fixed base mesh.
#[derive(Debug, Clone)]
pub struct RadialSolver {
    profile: RevolutionProfile,
    cells: usize,
    grid: Arc<MeridianGrid>,
}

impl RadialSolver {
    pub fn new(profile: RevolutionProfile, cells: usize) -> Result<Self> {
        profile.validate()?;
        if cells < 16 {
            return Err(Error::invalid("cells", "need at least 16 cells"));
        }
        let d = discretize(&profile, cells, 0);
        let volume_density: Vec<f64> = d.radius.iter().map(|a| a * d.step).collect();
        let volume = 2.0 * PI * volume_density.iter().sum::<f64>();
        let grid = MeridianGrid::new(
            d.centers.clone(),
            d.centers.clone(),
            volume_density,
            (0.0, profile.length()),
            volume,
            profile.length(),
        )?;
        Ok(RadialSolver {
            profile,
            cells,
            grid: Arc::new(grid),
        })
    }

    pub fn profile(&self) -> &RevolutionProfile {
        &self.profile
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Cell-centred base mesh, shared by all mode fields.
    pub fn grid(&self) -> Arc<MeridianGrid> {
        self.grid.clone()
    }

    /// The lowest `count` radial modes for azimuthal number `m`.
    pub fn modes(&self, m: i64, count: usize) -> Result<Vec<RadialMode>> {
        if count == 0 || count > MAX_COUNT {
            return Err(Error::range("count", format!("{count} not in 1..={MAX_COUNT}")));
        }
        if count > self.cells / 4 {
            return Err(Error::resolution(format!("{count} modes need more than {} cells", self.cells)));
        }
        let meshes: Vec<Discretization> = [1, 2, 4]
            .par_iter()
            .map(|&k| discretize(&self.profile, self.cells * k, m))
            .collect();
        let values: Vec<Vec<f64>> = meshes.par_iter().map(|d| lowest(&d.matrix, count)).collect();
        let base = &meshes[0];
        (0..count)
            .into_par_iter()
            .map(|j| {
                let e = [values[0][j], values[1][j], values[2][j]];
                let eigenvalue = extrapolate(e)?;
                let lambda = eigenvalue.max(0.0).sqrt();
                if lambda * base.step > 0.5 {
                    return Err(Error::resolution(format!(
                        "mode (m={m}, j={j}) with λ = {lambda:.3} is under-resolved by {} cells",
                        self.cells
                    )));
                }
                let v = base.matrix.eigenvector(e[0]);
                let mut f: Vec<f64> = v.iter().zip(&base.radius).map(|(x, a)| x / a.sqrt()).collect();
                let norm = f.iter().zip(&self.grid.weights).map(|(x, w)| x * x * w).sum::<f64>().sqrt();
                f.iter_mut().for_each(|x| *x /= norm);
                Ok(RadialMode {
                    m,
                    index: j,
                    eigenvalue,
                    mesh_eigenvalues: e,
                    base_eigenvalue: e[0],
                    profile: f,
                })
            })
            .collect()
    }

    /// Residual `‖A v − λ² v‖ / (λ² ‖v‖)` of a mode on the base mesh.
    pub fn relative_residual(&self, mode: &RadialMode) -> f64 {
        let d = discretize(&self.profile, self.cells, mode.m);
        let v: Vec<f64> = mode.profile.iter().zip(&d.radius).map(|(f, a)| f * a.sqrt()).collect();
        let av = d.matrix.apply(&v);
        let num: f64 = av.iter().zip(&v).map(|(x, y)| (x - mode.base_eigenvalue * y).powi(2)).sum::<f64>().sqrt();
        let den: f64 = v.iter().map(|y| y * y).sum::<f64>().sqrt() * mode.base_eigenvalue.abs().max(1.0);
        num / den
    }

    /// The separated field `f_j(r) e^{imθ}`, with unit L² norm for the
    /// volume-one measure.
    pub fn field(&self, mode: &RadialMode) -> Result<SurfaceField> {
        let wavelengths = mode.eigenvalue.max(0.0).sqrt() * self.profile.length() / (2.0 * PI);
        SurfaceField::new(
            self.grid.clone(),
            mode.profile.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            Azimuthal::Exp(mode.m),
            wavelengths,
        )
    }

    /// Joint eigenvalues `(ħλ, ħm)` with `ħ = 1/λ` of the lowest `count` modes.
    pub fn joint_spectrum(&self, m: i64, count: usize) -> Result<Vec<JointEigenvalue>> {
        Ok(self
            .modes(m, count)?
            .into_iter()
            .map(|md| JointEigenvalue::new(md.eigenvalue, m, md.index as i64))
            .collect())
    }
}

fn extrapolate(e: [f64; 3]) -> Result<f64> {
    let d1 = e[0] - e[1];
    let d2 = e[1] - e[2];
    let scale = e[2].abs().max(1.0);
    if d1.abs().max(d2.abs()) <= 1e-9 * scale {
        return Ok(e[2]);
    }
    let ratio = d1 / d2;
    if !(RATIO_BAND.0..=RATIO_BAND.1).contains(&ratio) {
        return Err(Error::NonConvergence {
            what: "radial mesh refinement",
            achieved: ratio,
        });
    }
    let r1 = (4.0 * e[1] - e[0]) / 3.0;
    let r2 = (4.0 * e[2] - e[1]) / 3.0;
    Ok((16.0 * r2 - r1) / 15.0)
}

/// `revolution_joint_spectrum` with the default base mesh.
pub fn revolution_joint_spectrum(profile: &RevolutionProfile, m: i64, count: usize) -> Result<Vec<JointEigenvalue>> {
    RadialSolver::new(profile.clone(), DEFAULT_CELLS)?.joint_spectrum(m, count)
}
