//! Command-line front end: `vectorize`, `reconstruct`, `evaluate` and
//! `synth`. Each command is also callable as a function returning the
//! manifest it wrote, so the pipeline can be driven from tests.

mod commands;
mod manifest;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use planvec::PipelineConfig;
use thiserror::Error;

pub use commands::{cmd_evaluate, cmd_reconstruct, cmd_synth, cmd_vectorize};
pub use manifest::RunManifest;

/// Config file picked up from the working directory when `--config` is absent.
pub const DEFAULT_CONFIG_FILE: &str = "planvec.json";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "planvec", version, about = "Floor-plan wall vectorization and 3D reconstruction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit wall boxes to a binary wall mask.
    Vectorize(VectorizeArgs),
    /// Build a 3D model from a vectorized plan.
    Reconstruct(ReconstructArgs),
    /// Score a predicted mask or plan against a ground-truth mask.
    Evaluate(EvaluateArgs),
    /// Generate synthetic plans with exact ground truth.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, clap::Args)]
pub struct VectorizeArgs {
    /// Wall mask, PGM (P5) or PNG.
    #[arg(long)]
    pub mask: PathBuf,
    /// Door and window boxes as a JSON list.
    #[arg(long)]
    pub symbols: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, clap::Args)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub plan: PathBuf,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, clap::Args)]
#[command(group(clap::ArgGroup::new("prediction").required(true).multiple(true).args(["pred_mask", "plan"])))]
pub struct EvaluateArgs {
    #[arg(long)]
    pub pred_mask: Option<PathBuf>,
    #[arg(long)]
    pub plan: Option<PathBuf>,
    #[arg(long)]
    pub gt_mask: PathBuf,
    /// Crop both sides to the ground-truth extent first.
    #[arg(long)]
    pub crop: bool,
}

#[derive(Debug, Clone, clap::Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub count: usize,
    /// SynthSpec JSON; its seed is replaced by `--seed + index`.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Plans generated in parallel.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// `--config`, else `planvec.json` in the working directory, else defaults.
/// Returns the config and the file it came from.
pub fn resolve_config(flag: Option<&Path>) -> CliResult<(PipelineConfig, Option<PathBuf>)> {
    let path = match flag {
        Some(p) => p.to_path_buf(),
        None => {
            let p = PathBuf::from(DEFAULT_CONFIG_FILE);
            if !p.is_file() {
                return Ok((PipelineConfig::default(), None));
            }
            p
        }
    };
    let bytes = read(&path)?;
    let cfg = PipelineConfig::from_json(&bytes)
        .map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok((cfg, Some(path)))
}

pub(crate) fn read(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn write(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| input(format!("cannot write {}: {e}", path.display())))
}

pub(crate) fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| input(format!("cannot create {}: {e}", dir.display())))
}

/// Runs a parsed command line and returns the process exit code. Panics
/// inside the pipeline are reported as internal errors.
pub fn run(cli: Cli) -> i32 {
    let outcome = std::panic::catch_unwind(move || match cli.command {
        Command::Vectorize(a) => cmd_vectorize(&a).map(|_| ()),
        Command::Reconstruct(a) => cmd_reconstruct(&a).map(|_| ()),
        Command::Evaluate(a) => cmd_evaluate(&a).map(|report| {
            println!("{}", serde_json::to_string(&report).expect("report serializes"));
        }),
        Command::Synth(a) => cmd_synth(&a).map(|_| ()),
    });
    match outcome {
        Ok(Ok(())) => 0,
        Ok(Err(e)) => {
            eprintln!("planvec: {e}");
            e.exit_code()
        }
        Err(_) => 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(input("x").exit_code(), 2);
        assert_eq!(CliError::Internal("x".into()).exit_code(), 3);
    }

    #[test]
    fn explicit_config_wins_and_bad_config_is_input_error() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("c.json");
        std::fs::write(&good, br#"{"tilt_tol_deg": 4.0}"#).unwrap();
        let (cfg, from) = resolve_config(Some(&good)).unwrap();
        assert_eq!(cfg.tilt_tol_deg, 4.0);
        assert_eq!(from.as_deref(), Some(good.as_path()));

        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, br#"{"tilt": 4.0}"#).unwrap();
        assert_eq!(resolve_config(Some(&bad)).unwrap_err().exit_code(), 2);
        let missing = dir.path().join("missing.json");
        assert_eq!(resolve_config(Some(&missing)).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from(["planvec", "evaluate", "--gt-mask", "g.pgm", "--plan", "p.json", "--crop"]).unwrap();
        let Command::Evaluate(a) = cli.command else { panic!() };
        assert!(a.crop && a.pred_mask.is_none());
        assert!(Cli::try_parse_from(["planvec", "evaluate", "--gt-mask", "g.pgm"]).is_err());
        let cli = Cli::try_parse_from(["planvec", "synth", "--seed", "7", "--count", "2", "--out", "d"]).unwrap();
        let Command::Synth(a) = cli.command else { panic!() };
        assert_eq!((a.seed, a.count, a.jobs), (7, 2, 1));
    }
}
