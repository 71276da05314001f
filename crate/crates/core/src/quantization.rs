//! Discrete semiclassical Kohn–Nirenberg quantization
//! `(Op_ħ(a)u)(x) = (2πħ)^{-n} ∬ e^{i(x-y)ξ/ħ} a(x, ξ) u(y) dy dξ`
//! on uniform grids.
//!
//! The grid is treated as one period of a box, so the frequency variable runs
//! over `ξ_k = 2πħ k / L`. Separable symbols `b(x) c(ξ)` cost two FFTs; general
//! symbols are summed per output point over the frequencies in their support.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cutoff::{Cutoff, Profile};
use crate::error::{Error, Result};
use crate::grid::{Axis, GridFunction, GridSpec};
use crate::spectral::{fft_all, fft_axis};

/// Radius (before the `ħ^δ` shrinking) of the default small-scale cutoff.
pub const SMALL_SCALE_EPSILON: f64 = 2.0;

pub type FactorFn = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;
pub type SymbolFn = Arc<dyn Fn(&[f64], &[f64]) -> Complex64 + Send + Sync>;

#[derive(Clone)]
pub enum SymbolKind {
    /// `a(x, ξ) = b(x) c(ξ)`.
    Separable { x: FactorFn, xi: FactorFn },
    General(SymbolFn),
}

/// A symbol together with the metadata the discretization needs.
#[derive(Clone)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub dim: usize,
    pub delta: f64,
    pub order: f64,
    /// Box outside of which the symbol vanishes in `x`.
    pub x_support: Option<Vec<(f64, f64)>>,
    /// Box outside of which the symbol vanishes in `ξ`.
    pub xi_support: Option<Vec<(f64, f64)>>,
    /// Length scale of the `x`-dependence, e.g. `ε ħ^δ` for a shrinking cutoff.
    pub x_scale: Option<f64>,
    /// Value of ħ baked into the closures, if any.
    pub hbar: Option<f64>,
}

impl std::fmt::Debug for Symbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Symbol")
            .field("separable", &matches!(self.kind, SymbolKind::Separable { .. }))
            .field("dim", &self.dim)
            .field("delta", &self.delta)
            .field("order", &self.order)
            .field("x_support", &self.x_support)
            .field("xi_support", &self.xi_support)
            .field("x_scale", &self.x_scale)
            .field("hbar", &self.hbar)
            .finish()
    }
}

impl Symbol {
    fn bare(kind: SymbolKind, dim: usize) -> Self {
        Symbol {
            kind,
            dim,
            delta: 0.0,
            order: 0.0,
            x_support: None,
            xi_support: None,
            x_scale: None,
            hbar: None,
        }
    }

    pub fn separable(
        dim: usize,
        x: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
        xi: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Symbol::bare(
            SymbolKind::Separable {
                x: Arc::new(x),
                xi: Arc::new(xi),
            },
            dim,
        )
    }

    pub fn general(
        dim: usize,
        f: impl Fn(&[f64], &[f64]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Symbol::bare(SymbolKind::General(Arc::new(f)), dim)
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Symbol::separable(dim, move |_| c, |_| Complex64::new(1.0, 0.0))
    }

    pub fn of_position(dim: usize, f: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static) -> Self {
        Symbol::separable(dim, f, |_| Complex64::new(1.0, 0.0))
    }

    pub fn of_frequency(dim: usize, f: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static) -> Self {
        Symbol::separable(dim, |_| Complex64::new(1.0, 0.0), f)
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_order(mut self, order: f64) -> Self {
        self.order = order;
        self
    }

    pub fn with_x_support(mut self, bounds: Vec<(f64, f64)>) -> Self {
        self.x_support = Some(bounds);
        self
    }

    pub fn with_xi_support(mut self, bounds: Vec<(f64, f64)>) -> Self {
        self.xi_support = Some(bounds);
        self
    }

    pub fn with_x_scale(mut self, scale: f64) -> Self {
        self.x_scale = Some(scale);
        self
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = Some(hbar);
        self
    }

    pub fn eval(&self, x: &[f64], xi: &[f64]) -> Complex64 {
        match &self.kind {
            SymbolKind::Separable { x: b, xi: c } => b(x) * c(xi),
            SymbolKind::General(f) => f(x, xi),
        }
    }

    /// Pointwise complex conjugate `ā`.
    pub fn conj(&self) -> Symbol {
        let kind = match &self.kind {
            SymbolKind::Separable { x, xi } => {
                let (x, xi) = (x.clone(), xi.clone());
                SymbolKind::Separable {
                    x: Arc::new(move |p: &[f64]| x(p).conj()),
                    xi: Arc::new(move |p: &[f64]| xi(p).conj()),
                }
            }
            SymbolKind::General(f) => {
                let f = f.clone();
                SymbolKind::General(Arc::new(move |p: &[f64], q: &[f64]| f(p, q).conj()))
            }
        };
        Symbol { kind, ..self.clone() }
    }

    /// `c · a`.
    pub fn scaled(&self, c: Complex64) -> Symbol {
        let kind = match &self.kind {
            SymbolKind::Separable { x, xi } => {
                let x = x.clone();
                SymbolKind::Separable {
                    x: Arc::new(move |p: &[f64]| c * x(p)),
                    xi: xi.clone(),
                }
            }
            SymbolKind::General(f) => {
                let f = f.clone();
                SymbolKind::General(Arc::new(move |p: &[f64], q: &[f64]| c * f(p, q)))
            }
        };
        Symbol { kind, ..self.clone() }
    }

    /// `a + b`. Supports are merged into their bounding box.
    pub fn plus(&self, other: &Symbol) -> Result<Symbol> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: other.dim,
            });
        }
        let (a, b) = (self.clone(), other.clone());
        let merge = |p: &Option<Vec<(f64, f64)>>, q: &Option<Vec<(f64, f64)>>| match (p, q) {
            (Some(p), Some(q)) => Some(
                p.iter()
                    .zip(q)
                    .map(|(u, v)| (u.0.min(v.0), u.1.max(v.1)))
                    .collect(),
            ),
            _ => None,
        };
        let x_scale = match (self.x_scale, other.x_scale) {
            (Some(s), Some(t)) => Some(s.min(t)),
            (s, t) => s.or(t),
        };
        Ok(Symbol {
            kind: SymbolKind::General(Arc::new(move |p: &[f64], q: &[f64]| a.eval(p, q) + b.eval(p, q))),
            dim: self.dim,
            delta: self.delta.max(other.delta),
            order: self.order.max(other.order),
            x_support: merge(&self.x_support, &other.x_support),
            xi_support: merge(&self.xi_support, &other.xi_support),
            x_scale,
            hbar: self.hbar.or(other.hbar),
        })
    }

    /// Largest grid spacing that resolves both the `ħ^{1-δ}` oscillation and
    /// the `x`-scale of the symbol; `None` when the symbol imposes no scale.
    pub fn resolution_limit(&self, hbar: f64) -> Option<f64> {
        let mut limit: Option<f64> = None;
        if self.x_scale.is_some() || self.xi_support.is_some() {
            limit = Some(hbar.powf(1.0 - self.delta) / 8.0);
        }
        if let Some(s) = self.x_scale {
            let l = s / 16.0;
            limit = Some(limit.map_or(l, |m| m.min(l)));
        }
        limit
    }

    /// Largest finite-difference first and second derivatives of `|a|` in any
    /// single variable, sampled on a `samples^dim × samples^dim` lattice over
    /// the supports. Used to probe membership in `S^m_δ`.
    pub fn derivative_bounds(&self, samples: usize, step: f64) -> Result<(f64, f64)> {
        let xs = self
            .x_support
            .clone()
            .ok_or_else(|| Error::invalid("x_support", "required for the symbol-class probe"))?;
        let ks = self
            .xi_support
            .clone()
            .ok_or_else(|| Error::invalid("xi_support", "required for the symbol-class probe"))?;
        let lattice = |b: &[(f64, f64)]| -> Vec<Vec<f64>> {
            let mut pts: Vec<Vec<f64>> = vec![vec![]];
            for &(lo, hi) in b {
                let mut next = Vec::new();
                for p in &pts {
                    for i in 0..samples {
                        let t = (i as f64 + 0.5) / samples as f64;
                        let mut q = p.clone();
                        q.push(lo + t * (hi - lo));
                        next.push(q);
                    }
                }
                pts = next;
            }
            pts
        };
        let (xl, kl) = (lattice(&xs), lattice(&ks));
        let d = self.dim;
        let (mut first, mut second) = (0.0f64, 0.0f64);
        for x in &xl {
            for k in &kl {
                let centre = self.eval(x, k);
                for var in 0..(2 * d) {
                    let shifted = |h: f64| {
                        let (mut x2, mut k2) = (x.clone(), k.clone());
                        if var < d {
                            x2[var] += h;
                        } else {
                            k2[var - d] += h;
                        }
                        self.eval(&x2, &k2)
                    };
                    let (p, m) = (shifted(step), shifted(-step));
                    first = first.max((p - m).norm() / (2.0 * step));
                    second = second.max((p - centre * 2.0 + m).norm() / (step * step));
                }
            }
        }
        Ok((first, second))
    }
}

/// The shrinking cutoff `∏ χ(ħ^{-δ}(x_j - c_j)/ε) ∏ χ(ħ^{-δ} ξ_j/ε)` with the
/// default bump and `ε = 2`.
pub fn small_scale_cutoff(delta: f64, hbar: f64, center: &[f64]) -> Result<Symbol> {
    let cutoff = Cutoff::new(Profile::Bump, SMALL_SCALE_EPSILON, delta, center.to_vec())?;
    cutoff_symbol(&cutoff, hbar, center.len())
}

/// Symbol of a [`Cutoff`] applied in both position and frequency.
pub fn cutoff_symbol(cutoff: &Cutoff, hbar: f64, dim: usize) -> Result<Symbol> {
    if !(hbar > 0.0) {
        return Err(Error::invalid("hbar", "must be positive"));
    }
    if dim == 0 || dim > 2 {
        return Err(Error::Dimension { expected: 1, got: dim });
    }
    let r = cutoff.radius(hbar);
    let cx = cutoff.clone();
    let ck = cutoff.clone();
    let center: Vec<f64> = (0..dim).map(|j| cutoff.center.get(j).copied().unwrap_or(0.0)).collect();
    Ok(Symbol::separable(
        dim,
        move |x| Complex64::new(cx.eval_x(hbar, x), 0.0),
        move |k| Complex64::new(ck.eval_xi(hbar, k), 0.0),
    )
    .with_delta(cutoff.delta)
    .with_x_support(center.iter().map(|c| (c - r, c + r)).collect())
    .with_xi_support(vec![(-r, r); dim])
    .with_x_scale(r)
    .with_hbar(hbar))
}

fn check_compatible(symbol: &Symbol, hbar: f64, u: &GridFunction) -> Result<()> {
    if symbol.dim != u.grid.dim() {
        return Err(Error::Dimension {
            expected: symbol.dim,
            got: u.grid.dim(),
        });
    }
    if !(hbar > 0.0) {
        return Err(Error::invalid("hbar", "must be positive"));
    }
    if (u.hbar - hbar).abs() > 1e-12 * hbar {
        return Err(Error::invalid(
            "hbar",
            format!("grid function carries ħ = {}, operator uses {hbar}", u.hbar),
        ));
    }
    if let Some(h) = symbol.hbar {
        if (h - hbar).abs() > 1e-12 * hbar {
            return Err(Error::invalid(
                "hbar",
                format!("symbol was built for ħ = {h}, operator uses {hbar}"),
            ));
        }
    }
    if let Some(limit) = symbol.resolution_limit(hbar) {
        u.grid.require_spacing(limit, "quantization grid")?;
    }
    if let Some(bounds) = &symbol.x_support {
        for (axis, &(lo, hi)) in u.grid.axes.iter().zip(bounds) {
            let (glo, ghi) = axis.bounds();
            if lo < glo - 1e-12 || hi > ghi + 1e-12 {
                return Err(Error::resolution(format!(
                    "symbol support [{lo:.4}, {hi:.4}] exceeds grid box [{glo:.4}, {ghi:.4}]"
                )));
            }
        }
    }
    Ok(())
}

fn in_box(p: &[f64], bounds: &Option<Vec<(f64, f64)>>) -> bool {
    match bounds {
        None => true,
        Some(b) => p.iter().zip(b).all(|(&v, &(lo, hi))| v >= lo && v <= hi),
    }
}

/// `Op_ħ(a) u` sampled on the grid of `u`.
pub fn quantize(symbol: &Symbol, hbar: f64, u: &GridFunction) -> Result<GridFunction> {
    check_compatible(symbol, hbar, u)?;
    let grid = &u.grid;
    let shape = grid.shape();
    let freqs: Vec<Vec<f64>> = grid.axes.iter().map(|a| a.frequencies(hbar)).collect();
    let freq_point = |flat: usize| -> Vec<f64> {
        match shape.as_slice() {
            [_] => vec![freqs[0][flat]],
            [_, n1] => vec![freqs[0][flat / n1], freqs[1][flat % n1]],
            _ => unreachable!(),
        }
    };
    let mut spectrum = u.values.clone();
    fft_all(&mut spectrum, &shape, false);

    let values = match &symbol.kind {
        SymbolKind::Separable { x, xi } => {
            spectrum
                .par_iter_mut()
                .enumerate()
                .for_each(|(k, v)| *v *= xi(&freq_point(k)));
            fft_all(&mut spectrum, &shape, true);
            spectrum
                .par_iter()
                .enumerate()
                .map(|(i, v)| v * x(&grid.point(i)))
                .collect()
        }
        SymbolKind::General(f) => {
            let active: Vec<(usize, Vec<f64>)> = (0..spectrum.len())
                .filter_map(|k| {
                    let p = freq_point(k);
                    in_box(&p, &symbol.xi_support).then_some((k, p))
                })
                .collect();
            let twiddles: Vec<Vec<Complex64>> = shape
                .iter()
                .map(|&n| {
                    (0..n)
                        .map(|j| Complex64::from_polar(1.0 / n as f64, 2.0 * PI * j as f64 / n as f64))
                        .collect()
                })
                .collect();
            (0..grid.len())
                .into_par_iter()
                .map(|i| {
                    let x = grid.point(i);
                    if !in_box(&x, &symbol.x_support) {
                        return Complex64::default();
                    }
                    let idx: Vec<usize> = match shape.as_slice() {
                        [_] => vec![i],
                        [_, n1] => vec![i / n1, i % n1],
                        _ => unreachable!(),
                    };
                    active
                        .iter()
                        .map(|(k, p)| {
                            let kidx: Vec<usize> = match shape.as_slice() {
                                [_] => vec![*k],
                                [_, n1] => vec![k / n1, k % n1],
                                _ => unreachable!(),
                            };
                            let phase: Complex64 = kidx
                                .iter()
                                .zip(&idx)
                                .zip(&shape)
                                .enumerate()
                                .map(|(ax, ((kk, ii), n))| twiddles[ax][(kk * ii) % n])
                                .product();
                            f(&x, p) * spectrum[*k] * phase
                        })
                        .sum()
                })
                .collect()
        }
    };
    GridFunction::new(grid.clone(), values, hbar)
}

/// `⟨Op_ħ(a) u, v⟩`.
pub fn matrix_element(symbol: &Symbol, hbar: f64, u: &GridFunction, v: &GridFunction) -> Result<Complex64> {
    if !u.grid.matches(&v.grid) {
        return Err(Error::GridMismatch("u and v live on different grids".into()));
    }
    quantize(symbol, hbar, u)?.inner(v)
}

/// Unitary semiclassical Fourier transform
/// `(F_ħ u)(ξ) = (2πħ)^{-n/2} ∫ e^{-iyξ/ħ} u(y) dy`, returned on the
/// ascending frequency grid `ξ_k = 2πħ k / L`.
pub fn hbar_fourier(u: &GridFunction) -> Result<GridFunction> {
    let hbar = u.hbar;
    let shape = u.grid.shape();
    let mut spec = u.values.clone();
    fft_all(&mut spec, &shape, false);
    let dim = shape.len();
    let prefactor = u.grid.cell_volume() * (2.0 * PI * hbar).powf(-(dim as f64) / 2.0);

    let mut axes = Vec::with_capacity(dim);
    let mut shifts = Vec::with_capacity(dim);
    for a in &u.grid.axes {
        let n = a.len;
        let step = 2.0 * PI * hbar / a.extent();
        let lowest = -((n / 2) as f64);
        axes.push(Axis::new(lowest * step, step, n)?);
        shifts.push(n / 2);
    }
    let out_grid = GridSpec::new(axes)?;
    let mut values = vec![Complex64::default(); spec.len()];
    for (dst, value) in values.iter_mut().enumerate() {
        let (src, xi): (usize, Vec<f64>) = match shape.as_slice() {
            [n] => {
                let s = (dst + n - shifts[0]) % n;
                (s, vec![out_grid.point(dst)[0]])
            }
            [n0, n1] => {
                let (i, j) = (dst / n1, dst % n1);
                let s = ((i + n0 - shifts[0]) % n0) * n1 + (j + n1 - shifts[1]) % n1;
                (s, out_grid.point(dst))
            }
            _ => unreachable!(),
        };
        let phase: f64 = u
            .grid
            .axes
            .iter()
            .zip(&xi)
            .map(|(a, k)| -a.start * k / hbar)
            .sum();
        *value = spec[src] * Complex64::from_polar(prefactor, phase);
    }
    GridFunction::new(out_grid, values, hbar)
}

/// Applies `χ(x) Op_ħ(χ(ξ)) χ(y)` along one axis of a row-major array, each
/// factor given as a 1D function; used for product-type microlocalizers.
pub(crate) fn apply_axis_multiplier(
    values: &mut [Complex64],
    grid: &GridSpec,
    axis: usize,
    hbar: f64,
    position: &dyn Fn(f64) -> f64,
    frequency: &dyn Fn(f64) -> f64,
) {
    let shape = grid.shape();
    let ax = grid.axes[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    let scale_positions = |values: &mut [Complex64]| {
        let weights: Vec<f64> = (0..ax.len).map(|i| position(ax.point(i))).collect();
        for (flat, v) in values.iter_mut().enumerate() {
            *v *= weights[(flat / stride) % ax.len];
        }
    };
    scale_positions(values);
    fft_axis(values, &shape, axis, false);
    let fw: Vec<f64> = ax.frequencies(hbar).iter().map(|&k| frequency(k)).collect();
    for (flat, v) in values.iter_mut().enumerate() {
        *v *= fw[(flat / stride) % ax.len];
    }
    fft_axis(values, &shape, axis, true);
    scale_positions(values);
}

/// Nested cutoffs `χ₂ ≤ χ₁`: the default bump at scales `ε = 1` and `ε = 2`.
pub fn nested_cutoffs(delta: f64, hbar: f64) -> Result<(Symbol, Symbol)> {
    let outer = cutoff_symbol(&Cutoff::new(Profile::Bump, 2.0, delta, vec![0.0])?, hbar, 1)?;
    let inner = cutoff_symbol(&Cutoff::new(Profile::Bump, 1.0, delta, vec![0.0])?, hbar, 1)?;
    Ok((outer, inner))
}

/// Normalized coherent state `(πħ)^{-1/4} e^{iξ₀x/ħ} e^{-(x-x₀)²/(2ħ)}`.
pub fn coherent_state(grid: GridSpec, hbar: f64, x0: f64, xi0: f64) -> Result<GridFunction> {
    let norm = (PI * hbar).powf(-0.25);
    GridFunction::from_fn(grid, hbar, |x| {
        let d = x[0] - x0;
        Complex64::from_polar(norm * (-d * d / (2.0 * hbar)).exp(), xi0 * x[0] / hbar)
    })
}

/// Largest violation of `Re⟨Op(χ₁)u, u⟩ ≥ Re⟨Op(χ₂)u, u⟩` over coherent
/// states centred at `ħ^δ · (a, b)` for the given `(a, b)` probes.
pub fn garding_deficit(delta: f64, hbar: f64, probes: &[(f64, f64)]) -> Result<f64> {
    let (outer, inner) = nested_cutoffs(delta, hbar)?;
    let scale = hbar.powf(delta);
    let reach = probes.iter().map(|p| p.0.abs()).fold(0.0, f64::max) * scale;
    let half = (4.0 * SMALL_SCALE_EPSILON * scale).max(reach + 8.0 * hbar.sqrt());
    let spacing = outer
        .resolution_limit(hbar)
        .unwrap_or(f64::INFINITY)
        .min(hbar.sqrt() / 8.0);
    let grid = GridSpec::line(Axis::cell_centered(-half, half, spacing)?);
    probes
        .par_iter()
        .map(|&(a, b)| {
            let u = coherent_state(grid.clone(), hbar, a * scale, b * scale)?;
            let big = matrix_element(&outer, hbar, &u, &u)?.re;
            let small = matrix_element(&inner, hbar, &u, &u)?.re;
            Ok((small - big).max(0.0))
        })
        .try_reduce(|| 0.0, |x, y| Ok(x.max(y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Axis;

    fn gaussian(hbar: f64, n: usize, half: f64) -> GridFunction {
        let grid = GridSpec::line(Axis::cell_centered(-half, half, 2.0 * half / n as f64).unwrap());
        GridFunction::from_fn(grid, hbar, |x| Complex64::new((-x[0] * x[0] / (2.0 * hbar)).exp(), 0.0))
            .unwrap()
            .normalized()
    }

    #[test]
    fn identity_symbol() {
        let u = gaussian(1e-2, 256, 2.0);
        let out = quantize(&Symbol::constant(1, Complex64::new(1.0, 0.0)), 1e-2, &u).unwrap();
        let err: f64 = out.values.iter().zip(&u.values).map(|(a, b)| (a - b).norm_sqr()).sum();
        assert!(err.sqrt() < 1e-12);
    }

    #[test]
    fn general_path_agrees_with_separable() {
        let hbar = 1e-2;
        let u = gaussian(hbar, 128, 1.0);
        let sep = Symbol::separable(1, |x| Complex64::new(x[0].cos(), 0.0), |k| Complex64::new(1.0 + k[0] * k[0], 0.0));
        let gen = Symbol::general(1, |x, k| Complex64::new(x[0].cos() * (1.0 + k[0] * k[0]), 0.0));
        let a = quantize(&sep, hbar, &u).unwrap();
        let b = quantize(&gen, hbar, &u).unwrap();
        for (p, q) in a.values.iter().zip(&b.values) {
            assert!((p - q).norm() < 1e-11);
        }
    }

    #[test]
    fn fourier_of_gaussian_is_gaussian() {
        let hbar = 1e-2;
        let u = gaussian(hbar, 512, 2.0);
        let f = hbar_fourier(&u).unwrap();
        assert!((f.norm_l2() - 1.0).abs() < 1e-10);
        for i in (0..f.values.len()).step_by(17) {
            let xi = f.grid.point(i)[0];
            let want = (PI * hbar).powf(-0.25) * (-xi * xi / (2.0 * hbar)).exp();
            assert!((f.values[i].norm() - want).abs() < 1e-9);
        }
    }

    #[test]
    fn symbol_support_outside_grid_is_rejected() {
        let hbar = 1e-2;
        let u = gaussian(hbar, 64, 0.05);
        let a = small_scale_cutoff(0.0, hbar, &[0.0]).unwrap();
        assert!(matches!(quantize(&a, hbar, &u), Err(Error::Resolution { .. })));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let hbar = 1e-3;
        let u = gaussian(hbar, 64, 4.0);
        let a = small_scale_cutoff(0.4, hbar, &[0.0]).unwrap();
        assert!(matches!(quantize(&a, hbar, &u), Err(Error::Resolution { .. })));
    }

    #[test]
    fn small_scale_cutoff_rejects_half() {
        assert!(small_scale_cutoff(0.5, 1e-2, &[0.0]).is_err());
    }
    #[test]
    fn garding_deficit_scales_like_hbar_power() {
        let probes: Vec<(f64, f64)> = (-4..=4)
            .flat_map(|i| (-4..=4).map(move |j| (0.6 * i as f64, 0.6 * j as f64)))
            .collect();
        let delta = 0.4;
        let rate = 1.0 - 2.0 * delta;
        let c = 2.0 * garding_deficit(delta, 1e-2, &probes).unwrap() / 1e-2f64.powf(rate);
        for hbar in [1e-3, 1e-4] {
            let d = garding_deficit(delta, hbar, &probes).unwrap();
            assert!(d <= c * hbar.powf(rate), "hbar {hbar}: {d:.3e}");
        }
    }
}
