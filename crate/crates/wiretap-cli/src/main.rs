//! `wiretap`: command-line front end for rate-region evaluation, the
//! elimination-chain replay, Gaussian checks and the Fisher-information lab.
//!
//! Exit codes: 0 when every checked property holds, 1 when a property is
//! violated (the invariant is named on stderr), 2 on input errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Parser, Debug)]
#[command(name = "wiretap", version, about = "Rate regions of the two-user wiretap channel with public and confidential messages")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Discrete memoryless channels.
    #[command(subcommand)]
    Region(RegionCmd),
    /// Symbolic Fourier–Motzkin engine.
    #[command(subcommand)]
    Fm(FmCmd),
    /// Gaussian MIMO channels.
    #[command(subcommand)]
    Gauss(GaussCmd),
    /// Fisher-information checks.
    #[command(subcommand)]
    Fisher(FisherCmd),
}

#[derive(Subcommand, Debug)]
enum RegionCmd {
    /// Degraded inner region for one (U, X) auxiliary.
    EvalInner(DiscreteEval),
    /// Degraded outer region for one (U, X) auxiliary.
    EvalOuter(DiscreteEval),
    /// General inner region for one (Q, U, V1, V2, X) auxiliary (a (U, X)
    /// auxiliary is embedded with Q constant, V2 = U, V1 = X).
    EvalGeneral(DiscreteEval),
    /// Seeded sweep over auxiliaries; CSV of per-sample bounds and hull.
    Sweep(DiscreteSweep),
}

#[derive(Subcommand, Debug)]
enum FmCmd {
    /// Replays the bundled elimination chain of the general inner region.
    VerifyAppendix(OutputArgs),
}

#[derive(Subcommand, Debug)]
enum GaussCmd {
    /// Region for one covariance split.
    Eval(GaussEval),
    /// Seeded sweep over covariance splits.
    Sweep(GaussSweep),
    /// Dirty-paper identity on a given split or on seeded random splits.
    DpcCheck(DpcCheck),
    /// Degradedness of a covariance-ordered or gain-matrix channel.
    DegradedCheck(DegradedCheck),
}

#[derive(Subcommand, Debug)]
enum FisherCmd {
    /// de Bruijn identity on seeded Gaussian instances and scalar mixtures.
    Debruijn(DebruijnArgs),
    /// Fisher-information inequalities on seeded instances.
    Lemmas(LemmaArgs),
    /// Scalar mixtures against the Gaussian envelope (evidence, not proof).
    Evidence(EvidenceArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegionKind {
    Inner,
    Outer,
    General,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct SamplingArgs {
    /// Seed of every random stream.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of samples or instances.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Tolerance of the checked property.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Args, Debug)]
pub struct DiscreteEval {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub aux: PathBuf,
    /// Specialize to a corollary (cor1, cor2, cor3, cor3_alt).
    #[arg(long)]
    pub corollary: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DiscreteSweep {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long, value_enum, default_value_t = RegionKind::Inner)]
    pub region: RegionKind,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GaussEval {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long)]
    pub split: PathBuf,
    #[arg(long, value_enum, default_value_t = RegionKind::Inner)]
    pub region: RegionKind,
    /// Encoding order of the general region (21 or 12).
    #[arg(long, default_value = "21")]
    pub order: String,
    /// Specialize to a corollary (cor4, cor5, cor6, cor6_alt).
    #[arg(long)]
    pub corollary: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct GaussSweep {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long, value_enum, default_value_t = RegionKind::Inner)]
    pub region: RegionKind,
    /// Sweep caps with trace P instead of the channel's fixed S.
    #[arg(long)]
    pub trace: Option<f64>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DpcCheck {
    #[arg(long)]
    pub channel: PathBuf,
    /// A three-layer split; seeded random splits when absent.
    #[arg(long)]
    pub split: Option<PathBuf>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DegradedCheck {
    #[arg(long)]
    pub channel: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DebruijnArgs {
    /// Relative finite-difference step.
    #[arg(long, default_value_t = 1e-4)]
    pub step: f64,
    /// Residual tolerance on scalar mixtures.
    #[arg(long, default_value_t = wiretap_core::fisher::DEBRUIJN_MIXTURE_TOL)]
    pub mixture_tol: f64,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct LemmaArgs {
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct EvidenceArgs {
    /// Points of the Gaussian K grid.
    #[arg(long, default_value_t = 401)]
    pub grid: usize,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
