//! Run configuration, parsed from TOML and validated field by field.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mass::MassQuery;
use crate::scaling::BlowupOptions;
use crate::surfaces::{Lattice, RevolutionProfile, SurfaceModel, MAX_COUNT, MAX_DEGREE};

/// Environment variable that overrides the output directory of a config.
pub const OUT_DIR_ENV: &str = "QCI_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    MassSweep,
    SurfaceSpectrum,
    Blowup,
    Classify,
    Weyl,
}

impl ExperimentKind {
    pub fn section(self) -> &'static str {
        match self {
            ExperimentKind::MassSweep => "mass_sweep",
            ExperimentKind::SurfaceSpectrum => "surface_spectrum",
            ExperimentKind::Blowup => "blowup",
            ExperimentKind::Classify => "classify",
            ExperimentKind::Weyl => "weyl",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassSweepConfig {
    pub block: MassQuery,
    pub hbars: Vec<f64>,
    pub deltas: Vec<f64>,
}

/// Surface description as written in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceSpec {
    FlatTorus {
        #[serde(default = "unit_basis")]
        basis: [[f64; 2]; 2],
    },
    RoundSphere,
    Sine,
    Deformed {
        kappa: f64,
    },
    /// Two-column `r a(r)` table, relative paths resolved against the config file.
    Table {
        path: PathBuf,
    },
}

fn unit_basis() -> [[f64; 2]; 2] {
    [[1.0, 0.0], [0.0, 1.0]]
}

impl SurfaceSpec {
    pub fn resolve(&self, base: &Path) -> Result<SurfaceModel> {
        let model = match self {
            SurfaceSpec::FlatTorus { basis } => SurfaceModel::FlatTorus { basis: *basis },
            SurfaceSpec::RoundSphere => SurfaceModel::RoundSphere,
            SurfaceSpec::Sine => SurfaceModel::Revolution(RevolutionProfile::Sine),
            SurfaceSpec::Deformed { kappa } => SurfaceModel::Revolution(RevolutionProfile::Deformed { kappa: *kappa }),
            SurfaceSpec::Table { path } => {
                let full = if path.is_absolute() { path.clone() } else { base.join(path) };
                SurfaceModel::Revolution(RevolutionProfile::from_table_file(&full)?)
            }
        };
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub surface: SurfaceSpec,
    /// Largest `|m|` (torus: largest `|k₁|, |k₂|`).
    pub m_max: usize,
    /// Radial modes per azimuthal number.
    pub count: usize,
    #[serde(default = "default_cells")]
    pub cells: usize,
}

fn default_cells() -> usize {
    crate::surfaces::DEFAULT_CELLS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupConfig {
    pub surface: SurfaceSpec,
    #[serde(default)]
    pub options: BlowupOptions,
}

/// Numbers of hyperbolic, loxodromic and elliptic blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockCounts {
    #[serde(default)]
    pub hyperbolic: usize,
    #[serde(default)]
    pub complex_hyperbolic: usize,
    #[serde(default)]
    pub elliptic: usize,
}

impl BlockCounts {
    pub fn dim(&self) -> usize {
        self.hyperbolic + 2 * self.complex_hyperbolic + self.elliptic
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyConfig {
    pub seed: u64,
    pub conjugations: usize,
    /// Entry size of the random symmetric generator of each conjugation.
    #[serde(default = "default_scale")]
    pub scale: f64,
    pub blocks: Vec<BlockCounts>,
}

fn default_scale() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeylConfig {
    pub degrees: Vec<usize>,
    pub delta: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass_sweep: Option<MassSweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surface_spectrum: Option<SpectrumConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup: Option<BlowupConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classify: Option<ClassifyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl: Option<WeylConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn config_err(field: impl Into<String>, constraint: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        constraint: constraint.into(),
    }
}

fn wrap(field: &str, e: Error) -> Error {
    match e {
        Error::Config { .. } => e,
        other => config_err(field, other.to_string()),
    }
}

fn check_hbar(field: String, h: f64) -> Result<()> {
    if !(h > 0.0 && h < 1.0) {
        return Err(config_err(field, format!("must lie in (0, 1), got {h}")));
    }
    Ok(())
}

fn check_delta(field: String, d: f64) -> Result<()> {
    if !(0.0..0.5).contains(&d) {
        return Err(config_err(field, format!("must lie in [0, 1/2), got {d}")));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| config_err("<document>", e.message().to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// Checks the section for the selected experiment against the
    /// preconditions of the module that will consume it.
    pub fn validate(&self, base: &Path) -> Result<()> {
        let section = self.experiment.section();
        let missing = || config_err(section, "section is required for this experiment");
        match self.experiment {
            ExperimentKind::MassSweep => {
                let c = self.mass_sweep.as_ref().ok_or_else(missing)?;
                if c.hbars.is_empty() {
                    return Err(config_err("mass_sweep.hbars", "must not be empty"));
                }
                if c.deltas.is_empty() {
                    return Err(config_err("mass_sweep.deltas", "must not be empty"));
                }
                for (i, &h) in c.hbars.iter().enumerate() {
                    check_hbar(format!("mass_sweep.hbars[{i}]"), h)?;
                }
                for (i, &d) in c.deltas.iter().enumerate() {
                    check_delta(format!("mass_sweep.deltas[{i}]"), d)?;
                }
                match c.block {
                    MassQuery::Elliptic { .. } | MassQuery::Regular { .. } => {}
                    MassQuery::Hyperbolic { s } => {
                        if !s.is_finite() {
                            return Err(config_err("mass_sweep.block.s", "must be finite"));
                        }
                    }
                    MassQuery::ComplexHyperbolic { k, t } => {
                        crate::mass::BesselMellin::new(k, t).map_err(|e| wrap("mass_sweep.block", e))?;
                    }
                }
            }
            ExperimentKind::SurfaceSpectrum => {
                let c = self.surface_spectrum.as_ref().ok_or_else(missing)?;
                c.surface.resolve(base).map_err(|e| wrap("surface_spectrum.surface", e))?;
                if c.count == 0 || c.count > MAX_COUNT {
                    return Err(config_err("surface_spectrum.count", format!("must lie in 1..={MAX_COUNT}")));
                }
                if c.m_max > MAX_DEGREE {
                    return Err(config_err("surface_spectrum.m_max", format!("must not exceed {MAX_DEGREE}")));
                }
                if c.cells < 16 {
                    return Err(config_err("surface_spectrum.cells", "need at least 16"));
                }
            }
            ExperimentKind::Blowup => {
                let c = self.blowup.as_ref().ok_or_else(missing)?;
                c.surface.resolve(base).map_err(|e| wrap("blowup.surface", e))?;
                c.options.validate().map_err(|e| match e {
                    Error::Invalid { name, constraint } => config_err(format!("blowup.options.{name}"), constraint),
                    other => wrap("blowup.options", other),
                })?;
            }
            ExperimentKind::Classify => {
                let c = self.classify.as_ref().ok_or_else(missing)?;
                if c.conjugations == 0 {
                    return Err(config_err("classify.conjugations", "must be positive"));
                }
                if !(c.scale > 0.0 && c.scale.is_finite()) {
                    return Err(config_err("classify.scale", "must be positive and finite"));
                }
                if c.blocks.is_empty() {
                    return Err(config_err("classify.blocks", "must not be empty"));
                }
                for (i, b) in c.blocks.iter().enumerate() {
                    if b.dim() == 0 || b.dim() > 12 {
                        return Err(config_err(format!("classify.blocks[{i}]"), "dimension must lie in 1..=12"));
                    }
                }
            }
            ExperimentKind::Weyl => {
                let c = self.weyl.as_ref().ok_or_else(missing)?;
                if c.degrees.is_empty() {
                    return Err(config_err("weyl.degrees", "must not be empty"));
                }
                check_delta("weyl.delta".into(), c.delta)?;
                for (i, &l) in c.degrees.iter().enumerate() {
                    if !(20..=MAX_DEGREE - 20).contains(&l) {
                        return Err(config_err(format!("weyl.degrees[{i}]"), format!("must lie in 20..={}", MAX_DEGREE - 20)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Output directory: the explicit override, then the environment, then the config.
    pub fn output_dir(&self, explicit: Option<&Path>) -> Result<PathBuf> {
        if let Some(p) = explicit {
            return Ok(p.to_path_buf());
        }
        if let Some(p) = std::env::var_os(OUT_DIR_ENV) {
            return Ok(PathBuf::from(p));
        }
        self.output
            .dir
            .clone()
            .ok_or_else(|| config_err("output.dir", "no output directory given"))
    }
}

/// The lattice of a torus surface, for spectra.
pub(crate) fn torus_lattice(model: &SurfaceModel) -> Option<Lattice> {
    match model {
        SurfaceModel::FlatTorus { basis } => Lattice::new(*basis).ok(),
        _ => None,
    }
}
