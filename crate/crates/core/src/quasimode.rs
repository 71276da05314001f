//! Model eigenfunctions of the four normal-form blocks (elliptic, hyperbolic,
//! complex-hyperbolic, regular), their tensor products, and their
//! microlocalizations `χ(x) Op_ħ(χ(ξ)) χ(y) u`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cutoff::Cutoff;
use crate::error::{Error, Result};
use crate::grid::{Axis, GridFunction, GridSpec};
use crate::quantization::apply_axis_multiplier;
use crate::special::{hermite_function, HERMITE_MAX_DEGREE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Elliptic,
    Hyperbolic,
    ComplexHyperbolic,
    Regular,
}

/// One factor of a model quasimode. Quantum numbers are stored as the
/// ħ-independent ratios `λ/ħ`, `t₁/ħ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockSpec {
    /// `ħ^{-1/4} h_n(y/√ħ)` with `h_n` the Hermite function of index `n`.
    Elliptic { n: usize },
    /// `|log ħ|^{-1/2} (c₊ Y(y) + c₋ Y(-y)) |y|^{-1/2 + is}`.
    Hyperbolic {
        s: f64,
        c_plus: Complex64,
        c_minus: Complex64,
    },
    /// `|log ħ|^{-1/2} r^{-1 + i s₁} e^{ikθ}` in polar coordinates.
    ComplexHyperbolic { s1: f64, k: i32 },
    /// `e^{imθ}`.
    Regular { m: i64 },
}

impl BlockSpec {
    pub fn hyperbolic(s: f64, c_plus: Complex64, c_minus: Complex64) -> Result<Self> {
        let block = BlockSpec::Hyperbolic { s, c_plus, c_minus };
        block.validate()?;
        Ok(block)
    }

    /// Hyperbolic block with equal weight on both half-lines.
    pub fn hyperbolic_even(s: f64) -> Self {
        let c = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        BlockSpec::Hyperbolic {
            s,
            c_plus: c,
            c_minus: c,
        }
    }

    pub fn kind(&self) -> BlockKind {
        match self {
            BlockSpec::Elliptic { .. } => BlockKind::Elliptic,
            BlockSpec::Hyperbolic { .. } => BlockKind::Hyperbolic,
            BlockSpec::ComplexHyperbolic { .. } => BlockKind::ComplexHyperbolic,
            BlockSpec::Regular { .. } => BlockKind::Regular,
        }
    }

    /// Number of configuration coordinates the block consumes.
    pub fn coord_dim(&self) -> usize {
        match self {
            BlockSpec::ComplexHyperbolic { .. } => 2,
            _ => 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            BlockSpec::Elliptic { n } if n > HERMITE_MAX_DEGREE => Err(Error::range(
                "elliptic index",
                format!("n = {n} exceeds {HERMITE_MAX_DEGREE}"),
            )),
            BlockSpec::Hyperbolic { s, c_plus, c_minus } => {
                if !s.is_finite() {
                    return Err(Error::invalid("s", "must be finite"));
                }
                let total = c_plus.norm_sqr() + c_minus.norm_sqr();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::invalid(
                        "coefficients",
                        format!("|c+|^2 + |c-|^2 = {total}, expected 1"),
                    ));
                }
                Ok(())
            }
            BlockSpec::ComplexHyperbolic { s1, .. } if !s1.is_finite() => {
                Err(Error::invalid("s1", "must be finite"))
            }
            _ => Ok(()),
        }
    }
}

/// Counts of each block type together with the total dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dims {
    pub n_total: usize,
    pub regular: usize,
    pub hyperbolic: usize,
    pub complex_hyperbolic: usize,
    pub elliptic: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuasimodeSpec {
    pub blocks: Vec<BlockSpec>,
    pub hbar: f64,
}

impl QuasimodeSpec {
    pub fn new(blocks: Vec<BlockSpec>, hbar: f64) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::invalid("blocks", "at least one block is required"));
        }
        check_hbar(hbar)?;
        for b in &blocks {
            b.validate()?;
        }
        Ok(QuasimodeSpec { blocks, hbar })
    }

    pub fn single(block: BlockSpec, hbar: f64) -> Result<Self> {
        QuasimodeSpec::new(vec![block], hbar)
    }

    pub fn dims(&self) -> Dims {
        let count = |k: BlockKind| self.blocks.iter().filter(|b| b.kind() == k).count();
        let (reg, hyp, ch, ell) = (
            count(BlockKind::Regular),
            count(BlockKind::Hyperbolic),
            count(BlockKind::ComplexHyperbolic),
            count(BlockKind::Elliptic),
        );
        Dims {
            n_total: reg + hyp + 2 * ch + ell,
            regular: reg,
            hyperbolic: hyp,
            complex_hyperbolic: ch,
            elliptic: ell,
        }
    }
}

fn check_hbar(hbar: f64) -> Result<()> {
    if !(hbar > 0.0 && hbar < 1.0) {
        return Err(Error::invalid("hbar", format!("must lie in (0, 1), got {hbar}")));
    }
    Ok(())
}

fn log_prefactor(hbar: f64) -> f64 {
    hbar.ln().abs().powf(-0.5)
}

/// Raw value of one block at `point` (`(r, θ)` for a complex-hyperbolic block).
/// The singular points `y = 0` and `r = 0` evaluate to 0.
pub fn eval_block(block: &BlockSpec, hbar: f64, point: &[f64]) -> Result<Complex64> {
    check_hbar(hbar)?;
    if point.len() != block.coord_dim() {
        return Err(Error::Dimension {
            expected: block.coord_dim(),
            got: point.len(),
        });
    }
    block.validate()?;
    Ok(match *block {
        BlockSpec::Elliptic { n } => {
            let y = point[0];
            Complex64::new(hbar.powf(-0.25) * hermite_function(n, y / hbar.sqrt()), 0.0)
        }
        BlockSpec::Hyperbolic { s, c_plus, c_minus } => {
            let y = point[0];
            if y == 0.0 {
                return Ok(Complex64::default());
            }
            let coeff = if y > 0.0 { c_plus } else { c_minus };
            let a = y.abs();
            coeff * Complex64::from_polar(log_prefactor(hbar) / a.sqrt(), s * a.ln())
        }
        BlockSpec::ComplexHyperbolic { s1, k } => {
            let (r, theta) = (point[0], point[1]);
            if r < 0.0 {
                return Err(Error::invalid("r", "radial coordinate must be non-negative"));
            }
            if r == 0.0 {
                return Ok(Complex64::default());
            }
            Complex64::from_polar(log_prefactor(hbar) / r, s1 * r.ln() + k as f64 * theta)
        }
        BlockSpec::Regular { m } => Complex64::from_polar(1.0, m as f64 * point[0]),
    })
}

/// Complex-hyperbolic block evaluated at Cartesian `(y₁, y₂)`.
pub fn eval_block_cartesian(block: &BlockSpec, hbar: f64, y1: f64, y2: f64) -> Result<Complex64> {
    eval_block(block, hbar, &[y1.hypot(y2), y2.atan2(y1)])
}

/// Product of the block values, consuming coordinates in block order.
pub fn eval_product(spec: &QuasimodeSpec, point: &[f64]) -> Result<Complex64> {
    let n = spec.dims().n_total;
    if point.len() != n {
        return Err(Error::Dimension {
            expected: n,
            got: point.len(),
        });
    }
    let mut offset = 0;
    let mut acc = Complex64::new(1.0, 0.0);
    for b in &spec.blocks {
        let d = b.coord_dim();
        acc *= eval_block(b, spec.hbar, &point[offset..offset + d])?;
        offset += d;
    }
    Ok(acc)
}

/// Cell-centred grid on `[c - 2r, c + 2r]` per axis with spacing `ħ/(4r)`,
/// where `r` is the cutoff radius.
pub fn microlocalization_grid(spec: &QuasimodeSpec, cutoff: &Cutoff) -> Result<GridSpec> {
    let dim = spec.dims().n_total;
    if dim > 2 {
        return Err(Error::Dimension { expected: 2, got: dim });
    }
    let r = cutoff.radius(spec.hbar);
    let spacing = spec.hbar / (4.0 * r);
    let axes = (0..dim)
        .map(|j| {
            let c = cutoff.center.get(j).copied().unwrap_or(0.0);
            Axis::cell_centered(c - 2.0 * r, c + 2.0 * r, spacing)
        })
        .collect::<Result<Vec<_>>>()?;
    GridSpec::new(axes)
}

/// `ψ = Op_ħ(χ(x) χ(y) χ(ξ)) u` sampled on `grid` (unnormalized; see
/// [`GridFunction::normalized`]). Complex-hyperbolic blocks are sampled in
/// Cartesian coordinates.
pub fn microlocalize(spec: &QuasimodeSpec, cutoff: &Cutoff, grid: &GridSpec) -> Result<GridFunction> {
    let dims = spec.dims();
    if dims.n_total != grid.dim() {
        return Err(Error::Dimension {
            expected: dims.n_total,
            got: grid.dim(),
        });
    }
    let hbar = spec.hbar;
    let r = cutoff.radius(hbar);
    grid.require_spacing(hbar / (4.0 * r), "microlocalization grid")?;
    for (j, axis) in grid.axes.iter().enumerate() {
        let c = cutoff.center.get(j).copied().unwrap_or(0.0);
        let (lo, hi) = axis.bounds();
        if lo > c - r || hi < c + r {
            return Err(Error::resolution(format!(
                "grid box [{lo:.4}, {hi:.4}] does not contain the cutoff support on axis {j}"
            )));
        }
    }

    let mut psi = GridFunction::try_from_fn(grid.clone(), hbar, |p| {
        let mut offset = 0;
        let mut acc = Complex64::new(1.0, 0.0);
        for b in &spec.blocks {
            acc *= match b {
                BlockSpec::ComplexHyperbolic { .. } => eval_block_cartesian(b, hbar, p[offset], p[offset + 1])?,
                _ => eval_block(b, hbar, &p[offset..offset + 1])?,
            };
            offset += b.coord_dim();
        }
        Ok(acc)
    })?;

    for axis in 0..grid.dim() {
        let c = cutoff.clone();
        let position = move |x: f64| c.eval_x_axis(hbar, axis, x);
        let frequency = |k: f64| cutoff.eval_xi_axis(hbar, k);
        apply_axis_multiplier(&mut psi.values, grid, axis, hbar, &position, &frequency);
    }
    Ok(psi)
}

/// Closed-form unit-L² elliptic block, `π^{-1/4}` times [`eval_block`].
pub fn elliptic_normalized(n: usize, hbar: f64, y: f64) -> f64 {
    PI.powf(-0.25) * hbar.powf(-0.25) * hermite_function(n, y / hbar.sqrt())
}
