//! L^p norms on surfaces, the Hölder lower-bound chain, ladder averages and
//! power-law fits of eigenfunction growth.
//!
//! All norms use the surface measure rescaled to total volume 1.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::surfaces::{
    ladder_select, singular_leaf_of, sphere_grid_for_degree, sphere_harmonic_complex, sphere_profiles,
    torus_eigenfunction, tube_mass, tube_volume, JointEigenvalue, Lattice, RadialSolver, SingularLeaf,
    SurfaceField, SurfaceModel, DEFAULT_CELLS,
};

/// Minimum samples per meridian oscillation accepted by [`lp_norm`].
pub const SAMPLES_PER_WAVELENGTH: f64 = 8.0;

/// An L^p exponent in `[2, ∞]`; serialized as a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LpExponent(pub f64);

impl LpExponent {
    pub const INFINITY: LpExponent = LpExponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 2.0 {
            return Err(Error::invalid("p", format!("must lie in [2, ∞], got {p}")));
        }
        Ok(LpExponent(p))
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `(p − 2)/(4p)`, and `1/4` at `p = ∞`.
    pub fn rate(self) -> f64 {
        if self.is_infinite() {
            0.25
        } else {
            (self.0 - 2.0) / (4.0 * self.0)
        }
    }
}

impl fmt::Display for LpExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for LpExponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for LpExponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        let p = match Raw::deserialize(d)? {
            Raw::Number(p) => p,
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "∞") => f64::INFINITY,
            Raw::Text(t) => return Err(serde::de::Error::custom(format!("invalid exponent {t:?}"))),
        };
        LpExponent::new(p).map_err(serde::de::Error::custom)
    }
}

fn check_resolution(phi: &SurfaceField) -> Result<()> {
    let needed = SAMPLES_PER_WAVELENGTH * phi.meridian_wavelengths;
    if (phi.grid.len() as f64) < needed {
        return Err(Error::resolution(format!(
            "{} meridian samples for {:.1} oscillations, need {needed:.0}",
            phi.grid.len(),
            phi.meridian_wavelengths
        )));
    }
    Ok(())
}

/// Maximum of `|f|` along the meridian: the sampled maximum, refined by the
/// parabola of `|f|²` through the argmax and its neighbours.
fn meridian_sup(phi: &SurfaceField) -> f64 {
    let (i, sampled) = phi.sup_sampled();
    let n = phi.grid.len();
    let c = &phi.grid.coords;
    let (lo_idx, hi_idx) = if i == 0 {
        (0, 2)
    } else if i + 1 == n {
        (n - 3, n - 1)
    } else {
        (i - 1, i + 1)
    };
    let xs = [c[lo_idx], c[lo_idx + 1], c[hi_idx]];
    let ys: Vec<f64> = (lo_idx..=hi_idx).map(|k| phi.meridian[k].norm_sqr()).collect();
    // search interval: between the neighbours, or out to the end of the range
    let left = if i == 0 { phi.grid.coord_range.0 } else { xs[0] };
    let right = if i + 1 == n { phi.grid.coord_range.1 } else { xs[2] };
    let quad = |x: f64| {
        (0..3)
            .map(|a| {
                let mut l = ys[a];
                for b in 0..3 {
                    if a != b {
                        l *= (x - xs[b]) / (xs[a] - xs[b]);
                    }
                }
                l
            })
            .sum::<f64>()
    };
    // vertex of the parabola, if inside the interval
    let (x0, x1, x2) = (xs[0], xs[1], xs[2]);
    let d01 = (ys[1] - ys[0]) / (x1 - x0);
    let d12 = (ys[2] - ys[1]) / (x2 - x1);
    let curvature = (d12 - d01) / (x2 - x0);
    let mut best = sampled * sampled;
    let mut candidates = vec![left, right];
    if curvature < 0.0 {
        candidates.push(0.5 * (x0 + x1) - d01 / (2.0 * curvature));
    }
    for x in candidates {
        if x >= left && x <= right {
            best = best.max(quad(x));
        }
    }
    best.sqrt()
}

/// `(∫|φ|^p dμ)^{1/p}` for the volume-one measure; `p = ∞` gives the refined sup.
pub fn lp_norm(phi: &SurfaceField, p: LpExponent) -> Result<f64> {
    check_resolution(phi)?;
    if p.is_infinite() {
        return Ok(meridian_sup(phi) * phi.azimuthal.sup());
    }
    Ok(phi.mean_power(p.0).powf(p.0.recip()))
}

/// `(mass / V^{(p−2)/p})^{1/2}`: the L^p lower bound forced by `mass` in a
/// region of volume `V`.
pub fn holder_lower_bound(mass: f64, tube_volume: f64, p: LpExponent) -> Result<f64> {
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::invalid("mass", format!("must be positive, got {mass}")));
    }
    if !(tube_volume > 0.0) || !tube_volume.is_finite() {
        return Err(Error::invalid("tube_volume", format!("must be positive, got {tube_volume}")));
    }
    if p.0 <= 2.0 {
        return Err(Error::invalid("p", "must exceed 2"));
    }
    let power = if p.is_infinite() { 1.0 } else { (p.0 - 2.0) / p.0 };
    Ok((mass / tube_volume.powf(power)).sqrt())
}

/// Exponent of `λ` in the Hölder bound when the tube volume scales as
/// `ħ^{δ·codim}` with `ħ = 1/λ`.
pub fn holder_rate(codim: usize, p: LpExponent, delta: f64) -> f64 {
    let power = if p.is_infinite() { 1.0 } else { (p.0 - 2.0) / p.0 };
    0.5 * delta * codim as f64 * power
}

/// The limiting rate `codim · (p − 2)/(4p)` reached as `δ → 1/2`.
pub fn ideal_rate(codim: usize, p: LpExponent) -> f64 {
    codim as f64 * p.rate()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    /// RMS of the log residuals.
    pub residual: f64,
    pub sample_count: usize,
    pub window: (f64, f64),
}

/// Least-squares fit of `log value = exponent · log λ + intercept`.
pub fn fit_exponent(samples: &[(f64, f64)]) -> Result<ScalingFit> {
    if samples.len() < 5 {
        return Err(Error::invalid("samples", format!("need at least 5, got {}", samples.len())));
    }
    if samples.iter().any(|&(l, v)| !(l > 0.0 && v > 0.0 && l.is_finite() && v.is_finite())) {
        return Err(Error::invalid("samples", "λ and values must be positive and finite"));
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if hi < 10.0 * lo * (1.0 - 1e-12) {
        return Err(Error::invalid("samples", format!("λ spans [{lo}, {hi}], less than a decade")));
    }
    let n = samples.len() as f64;
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual = (xs.iter().zip(&ys).map(|(x, y)| (y - intercept - exponent * x).powi(2)).sum::<f64>() / n).sqrt();
    Ok(ScalingFit {
        exponent,
        intercept,
        residual,
        sample_count: samples.len(),
        window: (lo, hi),
    })
}

/// Admissible test functions for ladder averages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WeylKernel {
    /// `(sin(x/2)/(x/2))⁴`: non-negative with compactly supported Fourier
    /// transform, truncated to `|x| ≤ 10`.
    #[default]
    Jackson,
}

impl WeylKernel {
    pub const WINDOW: f64 = 10.0;

    pub fn eval(self, x: f64) -> f64 {
        if x.abs() > Self::WINDOW {
            return 0.0;
        }
        let h = 0.5 * x;
        if h.abs() < 1e-8 {
            1.0
        } else {
            (h.sin() / h).powi(4)
        }
    }
}

/// `Σ_j mass_j Π_k f(ħ^{-1}(μ_j,k(ħ) − c_k))` with `μ_j(ħ) = (ħλ_j, ħm_j)`.
pub fn weyl_ladder_average(
    spectrum: &[JointEigenvalue],
    masses: &[f64],
    center: [f64; 2],
    kernel: WeylKernel,
    hbar: f64,
) -> Result<f64> {
    if spectrum.len() != masses.len() {
        return Err(Error::Dimension {
            expected: spectrum.len(),
            got: masses.len(),
        });
    }
    if !(hbar > 0.0) {
        return Err(Error::invalid("hbar", "must be positive"));
    }
    Ok(spectrum
        .iter()
        .zip(masses)
        .map(|(e, m)| {
            let mu = [hbar * e.lambda(), hbar * e.m() as f64];
            m * kernel.eval((mu[0] - center[0]) / hbar) * kernel.eval((mu[1] - center[1]) / hbar)
        })
        .sum())
}

/// One point of the sphere ladder average.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylSample {
    pub degree: usize,
    pub hbar: f64,
    pub value: f64,
    pub modes: usize,
}

/// The ladder average on the round sphere at `ħ = 1/√(l(l+1))`, centred on
/// the equatorial ray `c = (1, 1)`, with tube masses around the equator.
pub fn sphere_weyl_sample(l: usize, delta: f64) -> Result<WeylSample> {
    let lambda = ((l * (l + 1)) as f64).sqrt();
    let hbar = lambda.recip();
    let w = WeylKernel::WINDOW;
    let l_top = (lambda + w).floor() as usize;
    let m_low = (lambda - w).ceil().max(0.0) as i64;
    let grid = Arc::new(sphere_grid_for_degree(l_top)?);
    let leaf = singular_leaf_of(&SurfaceModel::RoundSphere)?;
    let per_m: Vec<Vec<(JointEigenvalue, f64)>> = (m_low..=l_top as i64)
        .into_par_iter()
        .map(|m| -> Result<Vec<(JointEigenvalue, f64)>> {
            let profiles = sphere_profiles(m, l_top, &grid)?;
            let mut out = Vec::new();
            for (k, prof) in profiles.into_iter().enumerate() {
                let deg = m as usize + k;
                let e = JointEigenvalue::new((deg * (deg + 1)) as f64, m, k as i64);
                if (e.lambda() - lambda).abs() > w {
                    continue;
                }
                let field = SurfaceField::new(
                    grid.clone(),
                    prof.into_iter().map(|v| v.into()).collect(),
                    crate::surfaces::Azimuthal::Exp(m),
                    e.lambda() / 2.0,
                )?;
                out.push((e, tube_mass(&field, &leaf, delta, hbar)?));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let (spectrum, masses): (Vec<_>, Vec<_>) = per_m.into_iter().flatten().unzip();
    let value = weyl_ladder_average(&spectrum, &masses, [1.0, 1.0], WeylKernel::Jackson, hbar)?;
    Ok(WeylSample {
        degree: l,
        hbar,
        value,
        modes: spectrum.len(),
    })
}

/// Parameters of a blow-up measurement along a ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BlowupOptions {
    pub p_list: Vec<LpExponent>,
    pub delta: f64,
    pub lambda_window: (f64, f64),
    pub samples: usize,
    /// Ladder direction `b`; defaults to the equatorial ray `(1, a(r₀))`.
    pub ray: Option<[f64; 2]>,
    /// Ladder width `C` in `|μ − b| ≤ Cħ`.
    pub ladder_width: f64,
    pub cells: usize,
}

impl Default for BlowupOptions {
    fn default() -> Self {
        BlowupOptions {
            p_list: vec![LpExponent(4.0), LpExponent(6.0), LpExponent::INFINITY],
            delta: 0.4,
            lambda_window: (20.0, 400.0),
            samples: 12,
            ray: None,
            ladder_width: 1.0,
            cells: DEFAULT_CELLS,
        }
    }
}

impl BlowupOptions {
    pub fn validate(&self) -> Result<()> {
        if self.p_list.is_empty() {
            return Err(Error::invalid("p_list", "must not be empty"));
        }
        for p in &self.p_list {
            LpExponent::new(p.0)?;
        }
        if !(0.0..0.5).contains(&self.delta) {
            return Err(Error::invalid("delta", "must lie in [0, 1/2)"));
        }
        let (lo, hi) = self.lambda_window;
        if !(lo >= 1.0 && hi >= 10.0 * lo && hi.is_finite()) {
            return Err(Error::invalid("lambda_window", "needs 1 ≤ λ_min and λ_max ≥ 10 λ_min"));
        }
        if self.samples < 5 {
            return Err(Error::invalid("samples", "need at least 5"));
        }
        if !(self.ladder_width >= 0.0) {
            return Err(Error::invalid("ladder_width", "must be non-negative"));
        }
        Ok(())
    }

    fn targets(&self) -> Vec<f64> {
        let (lo, hi) = self.lambda_window;
        let n = self.samples;
        (0..n)
            .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormSample {
    pub p: LpExponent,
    pub measured: f64,
    pub holder: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupSample {
    pub lambda: f64,
    pub hbar: f64,
    pub quantum_numbers: (i64, i64),
    pub tube_mass: Option<f64>,
    pub tube_volume: Option<f64>,
    pub norms: Vec<NormSample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub p: LpExponent,
    pub measured: ScalingFit,
    pub holder: Option<ScalingFit>,
    /// `codim · (p − 2)/(4p)`.
    pub ideal_rate: f64,
    /// The Hölder-implied rate at the configured `δ`.
    pub rate_at_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub codim: usize,
    pub samples: Vec<BlowupSample>,
    pub fits: Vec<ExponentFit>,
}

fn measure(
    field: &SurfaceField,
    e: &JointEigenvalue,
    leaf: &SingularLeaf,
    opts: &BlowupOptions,
) -> Result<BlowupSample> {
    let phi = field.normalized();
    let hbar = e.hbar.ok_or_else(|| Error::invalid("eigenvalue", "λ = 0 has no semiclassical scale"))?;
    let (mass, volume) = if leaf.equator().is_some() {
        (
            Some(tube_mass(&phi, leaf, opts.delta, hbar)?),
            Some(tube_volume(&phi.grid, leaf, opts.delta, hbar)?),
        )
    } else {
        (None, None)
    };
    let norms = opts
        .p_list
        .iter()
        .map(|&p| {
            let measured = lp_norm(&phi, p)?;
            let holder = match (mass, volume) {
                (Some(m), Some(v)) if p.0 > 2.0 => Some(holder_lower_bound(m, v, p)?),
                _ => None,
            };
            Ok(NormSample { p, measured, holder })
        })
        .collect::<Result<_>>()?;
    Ok(BlowupSample {
        lambda: e.lambda(),
        hbar,
        quantum_numbers: e.quantum_numbers,
        tube_mass: mass,
        tube_volume: volume,
        norms,
    })
}

/// Picks the ladder member with the largest tube mass.
fn best_member(
    candidates: Vec<(JointEigenvalue, SurfaceField)>,
    leaf: &SingularLeaf,
    opts: &BlowupOptions,
) -> Result<Option<(JointEigenvalue, SurfaceField)>> {
    let mut best: Option<(f64, JointEigenvalue, SurfaceField)> = None;
    for (e, f) in candidates {
        let h = e.hbar.unwrap_or(1.0);
        let mass = tube_mass(&f, leaf, opts.delta, h)?;
        if best.as_ref().is_none_or(|b| mass > b.0) {
            best = Some((mass, e, f));
        }
    }
    Ok(best.map(|(_, e, f)| (e, f)))
}

fn ray_for(surface: &SurfaceModel, opts: &BlowupOptions) -> Result<[f64; 2]> {
    if let Some(b) = opts.ray {
        return Ok(b);
    }
    let profile = surface
        .revolution_profile()
        .ok_or_else(|| Error::invalid("ray", "required for surfaces without an equator"))?;
    Ok([1.0, profile.eval(profile.equator()?)])
}

fn sphere_samples(opts: &BlowupOptions, leaf: &SingularLeaf) -> Result<Vec<BlowupSample>> {
    let b = ray_for(&SurfaceModel::RoundSphere, opts)?;
    let degrees: Vec<usize> = {
        let mut d: Vec<usize> = opts.targets().iter().map(|t| t.round().max(1.0) as usize).collect();
        d.dedup();
        d
    };
    degrees
        .par_iter()
        .map(|&l| {
            let grid = Arc::new(sphere_grid_for_degree(l)?);
            let level: Vec<JointEigenvalue> = (-(l as i64)..=l as i64)
                .map(|m| JointEigenvalue::new((l * (l + 1)) as f64, m, (l - m.unsigned_abs() as usize) as i64))
                .collect();
            let members = ladder_select(&level, b, opts.ladder_width);
            let candidates = members
                .into_iter()
                .map(|e| Ok((e.clone(), sphere_harmonic_complex(l, e.m(), grid.clone())?)))
                .collect::<Result<Vec<_>>>()?;
            let (e, f) = best_member(candidates, leaf, opts)?.ok_or_else(|| Error::EmptyLadder(format!("no ladder member at degree {l}")))?;
            measure(&f, &e, leaf, opts)
        })
        .collect()
}

fn revolution_samples(surface: &SurfaceModel, opts: &BlowupOptions, leaf: &SingularLeaf) -> Result<Vec<BlowupSample>> {
    let profile = surface.revolution_profile().expect("revolution surface");
    let b = ray_for(surface, opts)?;
    let a0 = b[1];
    let len = profile.length();
    opts.targets()
        .par_iter()
        .map(|&target| {
            let cells = opts.cells.max((4.0 * target * len).ceil() as usize);
            let solver = RadialSolver::new(profile.clone(), cells)?;
            let m0 = (a0 * target).round() as i64;
            let mut candidates = Vec::new();
            for m in (m0 - 1).max(0)..=m0 + 1 {
                for mode in solver.modes(m, 4)? {
                    let e = JointEigenvalue::new(mode.eigenvalue, m, mode.index as i64);
                    if !ladder_select(std::slice::from_ref(&e), b, opts.ladder_width).is_empty() {
                        candidates.push((e, solver.field(&mode)?));
                    }
                }
            }
            let (e, f) = best_member(candidates, leaf, opts)?.ok_or_else(|| Error::EmptyLadder(format!("no ladder member near λ = {target:.1}")))?;
            measure(&f, &e, leaf, opts)
        })
        .collect()
}

fn torus_samples(basis: [[f64; 2]; 2], opts: &BlowupOptions, leaf: &SingularLeaf) -> Result<Vec<BlowupSample>> {
    let lattice = Lattice::new(basis)?;
    let unit = lattice.eigenvalue((1, 0)).sqrt();
    opts.targets()
        .par_iter()
        .map(|&target| {
            let k = ((target / unit).round() as i64).max(1);
            let grid = Arc::new(lattice.grid_for((k, 0))?);
            let field = torus_eigenfunction((k, 0), grid)?;
            let mut e = JointEigenvalue::new(lattice.eigenvalue((k, 0)), 0, k);
            e.quantum_numbers = (k, 0);
            measure(&field, &e, leaf, opts)
        })
        .collect()
}

/// Measured and Hölder-implied growth exponents of ladder eigenfunctions.
pub fn blowup_report(surface: &SurfaceModel, opts: &BlowupOptions) -> Result<BlowupReport> {
    opts.validate()?;
    surface.validate()?;
    let leaf = singular_leaf_of(surface)?;
    let samples = match surface {
        SurfaceModel::FlatTorus { basis } => torus_samples(*basis, opts, &leaf)?,
        SurfaceModel::RoundSphere => sphere_samples(opts, &leaf)?,
        SurfaceModel::Revolution(_) => revolution_samples(surface, opts, &leaf)?,
    };
    if samples.is_empty() {
        return Err(Error::EmptyLadder("no samples in the λ window".into()));
    }
    let fits = opts
        .p_list
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let measured = fit_exponent(&samples.iter().map(|s| (s.lambda, s.norms[k].measured)).collect::<Vec<_>>())?;
            let holder_points: Option<Vec<(f64, f64)>> =
                samples.iter().map(|s| s.norms[k].holder.map(|h| (s.lambda, h))).collect();
            let holder = holder_points.map(|pts| fit_exponent(&pts)).transpose()?;
            Ok(ExponentFit {
                p,
                measured,
                holder,
                ideal_rate: ideal_rate(leaf.codim, p),
                rate_at_delta: holder_rate(leaf.codim, p, opts.delta),
            })
        })
        .collect::<Result<_>>()?;
    Ok(BlowupReport {
        codim: leaf.codim,
        samples,
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holder_arithmetic() {
        let v = holder_lower_bound(0.3, 1e-3, LpExponent::INFINITY).unwrap();
        assert!((v - 300f64.sqrt()).abs() < 1e-12);
        for p in [3.0, 6.0, f64::INFINITY] {
            assert!((holder_lower_bound(1.0, 1.0, LpExponent(p)).unwrap() - 1.0).abs() < 1e-15);
        }
        assert!(holder_lower_bound(0.0, 1.0, LpExponent(4.0)).is_err());
        assert!(holder_lower_bound(1.0, -1.0, LpExponent(4.0)).is_err());
    }

    #[test]
    fn holder_rate_tends_to_ideal() {
        for p in [4.0, 6.0, f64::INFINITY] {
            let p = LpExponent(p);
            assert!((holder_rate(1, p, 0.5) - ideal_rate(1, p)).abs() < 1e-15);
        }
        assert!((ideal_rate(1, LpExponent(6.0)) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = (0..7).map(|k| 10f64.powf(1.0 + 0.5 * k as f64)).map(|l| (l, 3.0 * l.powf(0.25))).collect();
        let fit = fit_exponent(&pts).unwrap();
        assert!((fit.exponent - 0.25).abs() < 1e-10);
        assert!(fit.residual < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        let few: Vec<(f64, f64)> = (1..5).map(|k| (10f64.powi(k), 1.0)).collect();
        assert!(fit_exponent(&few).is_err());
        let narrow: Vec<(f64, f64)> = (0..6).map(|k| (10.0 + k as f64, 1.0)).collect();
        assert!(fit_exponent(&narrow).is_err());
    }

    #[test]
    fn exponent_serde() {
        let v: Vec<LpExponent> = serde_json::from_str(r#"[4.0, "inf"]"#).unwrap();
        assert!(v[1].is_infinite());
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"[4.0,"inf"]"#);
        assert!(serde_json::from_str::<LpExponent>("1.5").is_err());
    }

    #[test]
    fn kernel_peak() {
        assert_eq!(WeylKernel::Jackson.eval(0.0), 1.0);
        assert_eq!(WeylKernel::Jackson.eval(10.5), 0.0);
        assert!(WeylKernel::Jackson.eval(2.0 * std::f64::consts::PI).abs() < 1e-15);
    }
}
