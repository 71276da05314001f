//! Configuration, orchestration and deterministic serialization of experiments.
//!
//! A run parses and validates a [`RunConfig`], evaluates the selected
//! experiment inside a dedicated thread pool, collects every table in memory
//! and hands them to a single writer that also records a manifest.

mod config;
mod output;
mod verify;

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use config::{
    BlockCounts, BlowupConfig, ClassifyConfig, ExperimentKind, MassSweepConfig, OutputConfig, RunConfig,
    SpectrumConfig, SurfaceSpec, WeylConfig, OUT_DIR_ENV,
};
pub use output::{
    format_float, read_manifest, sha256_hex, write_artifacts, Artifacts, Cell, FileEntry, Manifest, PlotData, Table,
    MANIFEST_FILE,
};
pub use verify::{run_checks, OracleCheck};

use crate::eliasson::{classify, is_cartan, model_family, random_symplectic, QuadraticHamiltonian};
use crate::error::{Error, Result};
use crate::mass::mass_sweep;
use crate::scaling::{blowup_report, sphere_weyl_sample};
use crate::surfaces::{sphere_joint_spectrum, JointEigenvalue, RadialSolver, SurfaceModel};

/// Result of a successful run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub manifest: Manifest,
    pub artifacts: Artifacts,
}

/// Options that come from the command line rather than the config file.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    /// Directory that relative paths in the config are resolved against.
    pub base_dir: Option<PathBuf>,
}

/// Validates, computes and writes. Nothing is written if validation or
/// computation fails, and partial output is removed if writing fails.
pub fn run(config: &RunConfig, opts: &RunOptions) -> Result<RunOutcome> {
    let base = opts.base_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    config.validate(&base)?;
    let out_dir = config.output_dir(opts.out_dir.as_deref())?;
    let artifacts = compute(config, &base, opts.threads)?;
    let manifest = write_artifacts(&out_dir, config, &artifacts)?;
    Ok(RunOutcome {
        out_dir,
        manifest,
        artifacts,
    })
}

/// Evaluates the experiment without touching the filesystem.
pub fn compute(config: &RunConfig, base: &Path, threads: Option<usize>) -> Result<Artifacts> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config {
                field: "threads".into(),
                constraint: "must be positive".into(),
            });
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config {
        field: "threads".into(),
        constraint: e.to_string(),
    })?;
    pool.install(|| match config.experiment {
        ExperimentKind::MassSweep => mass_artifacts(section(&config.mass_sweep, "mass_sweep")?),
        ExperimentKind::SurfaceSpectrum => spectrum_artifacts(section(&config.surface_spectrum, "surface_spectrum")?, base),
        ExperimentKind::Blowup => blowup_artifacts(section(&config.blowup, "blowup")?, base),
        ExperimentKind::Classify => classify_artifacts(section(&config.classify, "classify")?),
        ExperimentKind::Weyl => weyl_artifacts(section(&config.weyl, "weyl")?),
    })
}

fn section<'a, T>(s: &'a Option<T>, name: &str) -> Result<&'a T> {
    s.as_ref().ok_or_else(|| Error::Config {
        field: name.into(),
        constraint: "section is required for this experiment".into(),
    })
}

fn mass_artifacts(c: &MassSweepConfig) -> Result<Artifacts> {
    let reports = mass_sweep(&c.block, &c.hbars, &c.deltas)?;
    let mut table = Table::new("mass", &["hbar", "delta", "value", "asymptote", "deficit"]);
    for r in &reports {
        table.push(vec![r.hbar.into(), r.delta.into(), r.value.into(), r.asymptote.into(), r.log_deficit.into()]);
    }
    let plots = c
        .deltas
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let pts = reports.iter().filter(|r| r.delta == d).map(|r| (r.hbar, r.value)).collect();
            PlotData::new(&format!("plot_mass_d{i}"), "hbar", "value", pts)
        })
        .collect();
    Ok(Artifacts {
        tables: vec![table],
        plots,
    })
}

fn surface_spectrum(model: &SurfaceModel, c: &SpectrumConfig) -> Result<Vec<JointEigenvalue>> {
    let m_max = c.m_max as i64;
    let mut out = match model {
        SurfaceModel::FlatTorus { .. } => {
            let lattice = config::torus_lattice(model).expect("validated torus");
            let mut v = Vec::new();
            for k1 in -m_max..=m_max {
                for k2 in -m_max..=m_max {
                    v.push(JointEigenvalue::new(lattice.eigenvalue((k1, k2)), k2, k1));
                }
            }
            v
        }
        SurfaceModel::RoundSphere => sphere_joint_spectrum(c.m_max + c.count - 1)
            .into_iter()
            .filter(|e| e.m().abs() <= m_max && e.radial_index() < c.count as i64)
            .collect(),
        SurfaceModel::Revolution(profile) => {
            let solver = RadialSolver::new(profile.clone(), c.cells)?;
            let per_m: Vec<Vec<JointEigenvalue>> = (0..=m_max)
                .into_par_iter()
                .map(|m| solver.joint_spectrum(m, c.count))
                .collect::<Result<_>>()?;
            let mut v = Vec::new();
            for list in per_m {
                for e in list {
                    if e.m() != 0 {
                        v.push(JointEigenvalue::new(e.eigenvalue, -e.m(), e.radial_index()));
                    }
                    v.push(e);
                }
            }
            v
        }
    };
    out.sort_by(|a, b| {
        a.eigenvalue
            .total_cmp(&b.eigenvalue)
            .then(a.quantum_numbers.cmp(&b.quantum_numbers))
    });
    Ok(out)
}

fn spectrum_artifacts(c: &SpectrumConfig, base: &Path) -> Result<Artifacts> {
    let model = c.surface.resolve(base)?;
    let spectrum = surface_spectrum(&model, c)?;
    let mut table = Table::new("spectrum", &["m", "j", "eigenvalue", "lambda", "mu_1", "mu_2"]);
    for e in &spectrum {
        let mu = e.mu.map(|m| (Some(m[0]), Some(m[1]))).unwrap_or((None, None));
        table.push(vec![
            e.m().into(),
            e.radial_index().into(),
            e.eigenvalue.into(),
            e.lambda().into(),
            mu.0.into(),
            mu.1.into(),
        ]);
    }
    let counting = spectrum
        .iter()
        .enumerate()
        .map(|(i, e)| (e.eigenvalue, (i + 1) as f64))
        .collect();
    Ok(Artifacts {
        tables: vec![table],
        plots: vec![PlotData::new("plot_spectrum", "eigenvalue", "count", counting)],
    })
}

fn blowup_artifacts(c: &BlowupConfig, base: &Path) -> Result<Artifacts> {
    let model = c.surface.resolve(base)?;
    let report = blowup_report(&model, &c.options)?;
    let mut samples = Table::new(
        "blowup_samples",
        &["lambda", "hbar", "m", "j", "tube_mass", "tube_volume", "p", "norm", "holder_bound"],
    );
    for s in &report.samples {
        for n in &s.norms {
            samples.push(vec![
                s.lambda.into(),
                s.hbar.into(),
                s.quantum_numbers.0.into(),
                s.quantum_numbers.1.into(),
                s.tube_mass.into(),
                s.tube_volume.into(),
                n.p.to_string().into(),
                n.measured.into(),
                n.holder.into(),
            ]);
        }
    }
    let mut fits = Table::new(
        "blowup_fits",
        &["p", "codim", "exponent", "intercept", "residual", "holder_exponent", "ideal_rate", "rate_at_delta"],
    );
    let mut plots = Vec::new();
    for f in &report.fits {
        fits.push(vec![
            f.p.to_string().into(),
            report.codim.into(),
            f.measured.exponent.into(),
            f.measured.intercept.into(),
            f.measured.residual.into(),
            f.holder.as_ref().map(|h| h.exponent).into(),
            f.ideal_rate.into(),
            f.rate_at_delta.into(),
        ]);
        let pts = report
            .samples
            .iter()
            .filter_map(|s| s.norms.iter().find(|n| n.p == f.p).map(|n| (s.lambda, n.measured)))
            .collect();
        plots.push(PlotData::new(&format!("plot_blowup_p{}", f.p), "lambda", "norm", pts));
    }
    Ok(Artifacts {
        tables: vec![samples, fits],
        plots,
    })
}

/// A generic member of the model family: distinct positive weights on each generator.
pub fn generic_element(family: &[QuadraticHamiltonian]) -> Result<QuadraticHamiltonian> {
    let mut acc = family[0].clone();
    for (i, q) in family.iter().enumerate().skip(1) {
        acc = acc.add(&q.scaled(1.0 + 0.37 * i as f64))?;
    }
    Ok(acc)
}

fn classify_artifacts(c: &ClassifyConfig) -> Result<Artifacts> {
    let mut table = Table::new(
        "classify",
        &[
            "case",
            "trial",
            "expected_hyperbolic",
            "expected_complex_hyperbolic",
            "expected_elliptic",
            "hyperbolic",
            "complex_hyperbolic",
            "elliptic",
            "correct",
            "is_cartan",
        ],
    );
    let mut success = Vec::new();
    for (case, b) in c.blocks.iter().enumerate() {
        let family = model_family(b.hyperbolic, b.complex_hyperbolic, b.elliptic)?;
        let generic = generic_element(&family)?;
        let mut rng = ChaCha8Rng::seed_from_u64(c.seed.wrapping_add(case as u64));
        let conjugators: Vec<_> = (0..c.conjugations)
            .map(|_| random_symplectic(b.dim(), c.scale, &mut rng))
            .collect();
        let rows: Vec<(Option<(usize, usize, usize)>, bool)> = conjugators
            .par_iter()
            .map(|s| {
                let got = classify(&generic.conjugated(s)?).ok().map(|d| d.counts());
                let moved: Vec<QuadraticHamiltonian> =
                    family.iter().map(|q| q.conjugated(s)).collect::<Result<_>>()?;
                Ok((got, is_cartan(&moved).is_cartan))
            })
            .collect::<Result<_>>()?;
        let expected = (b.hyperbolic, b.complex_hyperbolic, b.elliptic);
        let mut hits = 0;
        for (trial, (got, cartan)) in rows.into_iter().enumerate() {
            let correct = got == Some(expected);
            hits += usize::from(correct);
            let g = got.map_or((-1, -1, -1), |(h, l, e)| (h as i64, l as i64, e as i64));
            table.push(vec![
                case.into(),
                trial.into(),
                expected.0.into(),
                expected.1.into(),
                expected.2.into(),
                g.0.into(),
                g.1.into(),
                g.2.into(),
                correct.into(),
                cartan.into(),
            ]);
        }
        success.push((case as f64, hits as f64 / c.conjugations as f64));
    }
    Ok(Artifacts {
        tables: vec![table],
        plots: vec![PlotData::new("plot_classify", "case", "success_rate", success)],
    })
}

fn weyl_artifacts(c: &WeylConfig) -> Result<Artifacts> {
    let samples = c
        .degrees
        .par_iter()
        .map(|&l| sphere_weyl_sample(l, c.delta))
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new("weyl", &["degree", "hbar", "value", "modes"]);
    for s in &samples {
        table.push(vec![s.degree.into(), s.hbar.into(), s.value.into(), s.modes.into()]);
    }
    let pts = samples.iter().map(|s| (s.hbar, s.value)).collect();
    Ok(Artifacts {
        tables: vec![table],
        plots: vec![PlotData::new("plot_weyl", "hbar", "value", pts)],
    })
}
