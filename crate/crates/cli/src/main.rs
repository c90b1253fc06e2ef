//! Command-line driver: builds and verifies conditional-displacement pulse
//! sequences, runs the cat-state and kicked-top protocols with their
//! classical counterpart, and emits deterministic CSV/JSON artifacts.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;
mod seqconfig;

/// Exit code for invalid configuration or inputs.
pub const EXIT_VALIDATION: u8 = 2;
/// Exit code for verification subcommands whose tolerance check failed.
pub const EXIT_TOLERANCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "spintop",
    version,
    about = "Trapped-ion collective-spin simulator: conditional-displacement pulse loops, \
             cat states, the kicked top, readout records, and two-qubit gates",
    after_help = "Relative output paths are resolved against $SPINTOP_OUT_DIR when set. \
                  Exit codes: 0 success, 2 invalid configuration, 3 verification tolerance failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compose the four-pulse loop on the joint space and verify it factors
    /// into the one-axis twist exp(-i kx*kp Jz^2)
    VerifyTop(VerifyTopArgs),
    /// Residuals of the closed and unclosed loop orderings side by side
    TypoDemo(TypoDemoArgs),
    /// Cat-state preparation report: x-basis populations and phases
    Cat(CatArgs),
    /// Kicked-top trajectory with optional Husimi snapshots
    KickedTop(KickedTopArgs),
    /// Classical kicked-top trajectory or Lyapunov map
    Classical(ClassicalArgs),
    /// Two-qubit gate truth table with a distance report
    Gate(GateArgs),
    /// Binary measurement record of the monitored kicked top
    Record(RecordArgs),
    /// Compose a pulse sequence described in a JSON file and factor it
    Sequence(SequenceArgs),
}

#[derive(Args)]
struct VerifyTopArgs {
    /// Number of ions
    #[arg(long)]
    n: usize,
    /// X-quadrature pulse strength
    #[arg(long)]
    kx: f64,
    /// P-quadrature pulse strength
    #[arg(long)]
    kp: f64,
    /// Fock-space cutoff
    #[arg(long, default_value_t = 32)]
    cutoff: usize,
    /// Use the unclosed pulse ordering (final displacement not negated);
    /// the loop then fails to factor and this command exits with code 3
    #[arg(long)]
    paper_literal: bool,
    /// Also write the JSON report to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TypoDemoArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 0.3)]
    kx: f64,
    #[arg(long, default_value_t = 0.3)]
    kp: f64,
    #[arg(long, default_value_t = 32)]
    cutoff: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CatArgs {
    /// Number of ions
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KickedTopArgs {
    /// Spin size (half-integer, 2j+1 basis states)
    #[arg(long)]
    j: f64,
    /// Twist strength
    #[arg(long, default_value_t = 3.0)]
    kappa: f64,
    /// Kick angle in radians
    #[arg(long, default_value_t = FRAC_PI_2)]
    p: f64,
    /// Number of Floquet periods
    #[arg(long)]
    steps: usize,
    /// Initial coherent-state rotation angle theta (the state's spin
    /// expectation points along the antipode of these label angles)
    #[arg(long, default_value_t = 0.0)]
    theta0: f64,
    /// Initial coherent-state rotation angle phi
    #[arg(long, default_value_t = 0.0)]
    phi0: f64,
    /// Trajectory CSV output path (columns step,jx,jy,jz,norm)
    #[arg(long)]
    out: PathBuf,
    /// Write a Husimi snapshot every K steps
    #[arg(long)]
    husimi_every: Option<usize>,
    /// Husimi polar resolution
    #[arg(long, default_value_t = 64)]
    n_theta: usize,
    /// Husimi azimuthal resolution
    #[arg(long, default_value_t = 128)]
    n_phi: usize,
    /// Husimi snapshot path prefix; files are <prefix><step>.csv
    #[arg(long)]
    husimi_prefix: Option<PathBuf>,
    /// RNG seed recorded in outputs (the trajectory itself is deterministic)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ClassicalArgs {
    /// Emit a trajectory CSV (columns step,x,y,z)
    #[arg(long, conflicts_with = "lyapunov_map")]
    traj: bool,
    /// Emit a Lyapunov map CSV (columns theta,phi,lambda)
    #[arg(long)]
    lyapunov_map: bool,
    #[arg(long, default_value_t = 3.0)]
    kappa: f64,
    #[arg(long, default_value_t = FRAC_PI_2)]
    p: f64,
    /// Steps per trajectory or per map point
    #[arg(long)]
    steps: usize,
    /// Seed point x component (trajectory mode)
    #[arg(long, default_value_t = 0.0)]
    x: f64,
    #[arg(long, default_value_t = 0.0)]
    y: f64,
    #[arg(long, default_value_t = 1.0)]
    z: f64,
    /// Map rows in theta (map mode)
    #[arg(long, default_value_t = 24)]
    n_theta: usize,
    /// Map columns in phi (map mode)
    #[arg(long, default_value_t = 48)]
    n_phi: usize,
    /// Run the twist before the kick inside each period
    #[arg(long)]
    twist_first: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GateKind {
    Ising,
    Cphase,
}

#[derive(Args)]
struct GateArgs {
    /// Which gate to build
    #[arg(long = "type", value_enum)]
    gate_type: GateKind,
    /// Ising phase chi (ignored for cphase, which fixes chi = pi)
    #[arg(long, default_value_t = std::f64::consts::PI)]
    chi: f64,
    /// Build the Ising factor through the joint-space pulse sequence
    #[arg(long)]
    via_pulses: bool,
    #[arg(long, default_value_t = 32)]
    cutoff: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RecordArgs {
    /// Total number of ions (system ions plus one readout ion)
    #[arg(long)]
    n: usize,
    /// Index of the readout ion
    #[arg(long, default_value_t = 0)]
    readout_ion: usize,
    #[arg(long, default_value_t = 3.0)]
    kappa: f64,
    #[arg(long, default_value_t = FRAC_PI_2)]
    p: f64,
    /// Readout coupling strength
    #[arg(long)]
    mu: f64,
    /// Readout preparation polar angle
    #[arg(long)]
    theta_r: f64,
    /// Readout preparation azimuth
    #[arg(long, default_value_t = 0.0)]
    phi_r: f64,
    #[arg(long)]
    steps: usize,
    #[arg(long)]
    seed: u64,
    /// System preparation rotation angle theta
    #[arg(long, default_value_t = 0.0)]
    theta0: f64,
    /// System preparation rotation angle phi
    #[arg(long, default_value_t = 0.0)]
    phi0: f64,
    /// Bit-string output path; the JSON sidecar lands at <out>.json
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SequenceArgs {
    /// JSON sequence description
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests are successful exits; everything
            // else is a usage error.
            use clap::error::ErrorKind;
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_VALIDATION),
            };
        }
    };
    let outcome = match cli.command {
        Command::VerifyTop(args) => commands::verify_top(args),
        Command::TypoDemo(args) => commands::typo_demo(args),
        Command::Cat(args) => commands::cat(args),
        Command::KickedTop(args) => commands::kicked_top(args),
        Command::Classical(args) => commands::classical(args),
        Command::Gate(args) => commands::gate(args),
        Command::Record(args) => commands::record(args),
        Command::Sequence(args) => commands::sequence(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}
