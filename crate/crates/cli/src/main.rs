use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qci_core::runner::{run, run_checks, ExperimentKind, RunConfig, RunOptions};

#[derive(Parser)]
#[command(name = "qci", version, about = "Quasimode mass and L^p blow-up experiments on integrable surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Small-scale masses of a model block over a grid of (ħ, δ).
    Mass(RunArgs),
    /// Joint spectrum of a torus, sphere or surface of revolution.
    Spectrum(RunArgs),
    /// L^p norms, tube masses and fitted exponents along a ladder.
    Blowup(RunArgs),
    /// Block classification of randomly conjugated normal forms.
    Classify(RunArgs),
    /// Ladder averages of tube masses on the sphere.
    Weyl(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config and the QCI_OUT_DIR variable).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// Run the embedded oracle checks and fail if any of them fails.
    #[arg(long)]
    verify: bool,
}

impl Command {
    fn parts(&self) -> (ExperimentKind, &RunArgs) {
        match self {
            Command::Mass(a) => (ExperimentKind::MassSweep, a),
            Command::Spectrum(a) => (ExperimentKind::SurfaceSpectrum, a),
            Command::Blowup(a) => (ExperimentKind::Blowup, a),
            Command::Classify(a) => (ExperimentKind::Classify, a),
            Command::Weyl(a) => (ExperimentKind::Weyl, a),
        }
    }
}

fn verify() -> bool {
    let mut ok = true;
    for c in run_checks() {
        eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        ok &= c.passed;
    }
    ok
}

fn execute(kind: ExperimentKind, args: &RunArgs) -> Result<(), String> {
    let config = RunConfig::from_path(&args.config).map_err(|e| format!("{}: {e}", args.config.display()))?;
    if config.experiment != kind {
        return Err(format!(
            "config selects experiment `{}`, but the subcommand runs `{}`",
            config.experiment.section(),
            kind.section()
        ));
    }
    let opts = RunOptions {
        out_dir: args.out.clone(),
        threads: args.threads,
        base_dir: Some(args.config.parent().unwrap_or(Path::new(".")).to_path_buf()),
    };
    let outcome = run(&config, &opts).map_err(|e| e.to_string())?;
    for t in &outcome.manifest.tables {
        println!("{} ({} rows) sha256 {}", outcome.out_dir.join(&t.file).display(), t.rows, t.sha256);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.parts();
    if args.verify && !verify() {
        eprintln!("oracle checks failed");
        return ExitCode::FAILURE;
    }
    match execute(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
