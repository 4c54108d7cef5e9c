use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Preparation information and optimal decompositions of mixed states.
#[derive(Debug, Parser)]
#[command(name = "decompq", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report both worked decompositions of the two-level fixture.
    ExampleQubit,
    /// Tradeoff curve of the uniform ball-mixture model.
    CurveRandsphere(CurveRandsphereArgs),
    /// Tradeoff curve of spin coherent-state caps.
    CurveCoherent(CurveCoherentArgs),
    /// Minimal-information grouping of an ensemble file.
    Decompose(DecomposeArgs),
    /// Run the spectral self-check suite.
    Verify(VerifyArgs),
}

/// Accepts a plain number, `pi`, `pi/<x>` or `<x>*pi`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase().replace('π', "pi");
    let bad = || format!("not an angle: {s:?}");
    if t == "pi" {
        return Ok(PI);
    }
    if let Some(rest) = t.strip_prefix("pi/") {
        return rest.parse::<f64>().map(|d| PI / d).map_err(|_| bad());
    }
    if let Some(rest) = t.strip_suffix("*pi") {
        return rest.parse::<f64>().map(|m| m * PI).map_err(|_| bad());
    }
    t.parse().map_err(|_| bad())
}

#[derive(Debug, Args)]
pub struct CurveRandsphereArgs {
    /// Hilbert-space dimension D.
    #[arg(long)]
    pub dim: usize,
    /// Smallest ball radius.
    #[arg(long, default_value = "0.3", value_parser = parse_angle)]
    pub phi_min: f64,
    /// Largest ball radius, at most pi/2.
    #[arg(long, default_value = "pi/2", value_parser = parse_angle)]
    pub phi_max: f64,
    /// Grid points, from phi-max down to phi-min.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CurveCoherentArgs {
    /// Spin j, a multiple of 1/2 (e.g. 50 or 0.5).
    #[arg(long)]
    pub j: f64,
    /// Smallest cap half-angle.
    #[arg(long, default_value = "0.1", value_parser = parse_angle)]
    pub theta_min: f64,
    /// Largest cap half-angle, at most pi.
    #[arg(long, default_value = "pi", value_parser = parse_angle)]
    pub theta_max: f64,
    /// Grid points, from theta-max down to theta-min.
    #[arg(long, default_value_t = 200)]
    pub steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Greedy,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// JSON ensemble file.
    pub input: PathBuf,
    /// Required average entropy reduction in bits.
    #[arg(long)]
    pub delta_h: f64,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    pub mode: Mode,
    /// Seed of the heuristic's random restarts.
    #[arg(long, env = "DECOMPQ_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Width in bits within which exhaustive minima are tied.
    #[arg(long, default_value_t = 1e-6)]
    pub epsilon: f64,
    /// Smallest number of groups the heuristic tries.
    #[arg(long, default_value_t = 1)]
    pub target_groups: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest spin checked, at most 60.
    #[arg(long, visible_alias = "j", default_value_t = 10)]
    pub j_max: u32,
}
