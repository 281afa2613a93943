//! Command-line surface. Every `*Args` struct doubles as the `config` object
//! of its report; paths that only steer IO are left out of it.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::dto::Exponent;
use crate::report::Format;

#[derive(Debug, Parser)]
#[command(name = "fracpow", version, about = "Hölder estimates for fractional powers on Schatten classes: experiments and certificates")]
pub struct Cli {
    /// Report path; defaults to `$FRACPOW_OUTPUT_DIR/<command>.<ext>`, then stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ando-type ratio search over a (p, θ) grid, or evaluation of a stored pair.
    VerifyAndo(VerifyAndoArgs),
    /// Witnessed lower bound for the Hölder constant, with checkpoints.
    EstimateConstant(EstimateConstantArgs),
    /// Constant-one inequality for positive operators.
    Bks(BksArgs),
    /// Random lower bound against the certified upper bound of a catalog kernel.
    MultiplierBound(MultiplierBoundArgs),
    /// Rank-one Fourier factorization of a catalog kernel.
    Factorize(FactorizeArgs),
    /// Eigenvalues of the kernel e^{-|x-y|} on [0,1].
    KernelSpectrum(KernelSpectrumArgs),
    /// K-functional of a rearrangement profile.
    Kfunctional(KfunctionalArgs),
    /// Weak-type Lorentz ratio sweep.
    WeakLp(WeakLpArgs),
    /// Commutator and anticommutator ratios.
    Commutator(CommutatorArgs),
    /// Mazur-map ratios on general matrices.
    Mazur(MazurArgs),
    /// Writes a JSON schema per report type.
    #[command(hide = true)]
    Schema(SchemaArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyAndo(_) => "verify-ando",
            Command::EstimateConstant(_) => "estimate-constant",
            Command::Bks(_) => "bks",
            Command::MultiplierBound(_) => "multiplier-bound",
            Command::Factorize(_) => "factorize",
            Command::KernelSpectrum(_) => "kernel-spectrum",
            Command::Kfunctional(_) => "kfunctional",
            Command::WeakLp(_) => "weak-lp",
            Command::Commutator(_) => "commutator",
            Command::Mazur(_) => "mazur",
            Command::Schema(_) => "schema",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, JsonSchema)]
pub struct VerifyAndoArgs {
    /// Schatten exponents to sweep.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub p: Vec<Exponent>,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    pub theta: Vec<f64>,
    /// Use sgn(x)|x|^θ instead of |x|^θ.
    #[arg(long)]
    pub signed: bool,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Evaluate this pair (a `{x, y}` document or any report holding one) instead of searching.
    #[arg(long)]
    #[serde(skip)]
    pub pair: Option<PathBuf>,
    /// Violation if any ratio exceeds this.
    #[arg(long)]
    pub assert_max: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, JsonSchema)]
pub struct EstimateConstantArgs {
    #[arg(long)]
    pub p: Exponent,
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub signed: bool,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6,7,8")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Violation if max/min of the per-dimension maxima exceeds this.
    #[arg(long)]
    pub max_growth: Option<f64>,
    /// Write progress here after every block.
    #[arg(long)]
    #[serde(skip)]
    pub checkpoint: Option<PathBuf>,
    /// Continue from a checkpoint written with the same parameters.
    #[arg(long)]
    #[serde(skip)]
    pub resume: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    #[serde(skip)]
    pub checkpoint_every: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, JsonSchema)]
pub struct BksArgs {
    #[arg(long)]
    pub p: Exponent,
    #[arg(long)]
    pub theta: f64,
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Catalog kernel selection; parameters unused by a kernel are ignored.
#[derive(Debug, Clone, Args, Serialize, Deserialize, JsonSchema)]
pub struct KernelArgs {
    /// One of constant, plane-wave, cos-cos, rational, theta2-near, theta2-far, theta-plus.
    #[arg(long)]
    pub kernel: String,
    #[arg(long = "kernel-theta", default_value_t = 0.5)]
    pub kernel_theta: f64,
    #[arg(long, default_value_t = 0)]
    pub shift: u32,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long = "wave-k", default_value_t = 1, allow_hyphen_values = true)]
    pub wave_k: i64,
    #[arg(long = "wave-l", default_value_t = 1, allow_hyphen_values = true)]
    pub wave_l: i64,
    #[arg(long, default_value_t = 3.0)]
    pub c: f64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, JsonSchema)]
pub struct MultiplierBoundArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub kernel: KernelArgs,
    #[arg(long)]
    pub p: Exponent,
    /// Sobolev order; defaults to ⌈1/p⌉+1.
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
    /// Sample points per axis for each random matrix.
    #[arg(long, default_value_t = 5)]
    pub points: usize,
    /// Number of random point sets.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Random inputs per point set in the lower-bound search.
    #[arg(long, default_value_t = 2)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Measure this symbol (`{rows, cols, values}`) instead of sampling the kernel.
    #[arg(long)]
    #[serde(skip)]
    pub symbol: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, JsonSchema)]
pub struct FactorizeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, default_value = "1")]
    pub p: Exponent,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long, default_value_t = 256)]
    pub cutoff: usize,
    #[arg(long, default_value_t = 512)]
    pub grid: usize,
    /// Points at which each f_l is tabulated.
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, JsonSchema)]
pub struct KernelSpectrumArgs {
    #[arg(long, default_value_t = 10)]
    pub kmax: u64,
    /// Nyström matrix size; 0 skips the comparison.
    #[arg(long, default_value_t = 0)]
    pub nystrom: usize,
    /// Quadrature points for eigenfunction residuals; 0 skips them.
    #[arg(long, default_value_t = 0)]
    pub residual_points: usize,
    /// Exponents for partial sums Σ λ_k^p.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1")]
    pub sums_p: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "100,10000,1000000")]
    pub sums_k: Vec<u64>,
    /// Violation if a Nyström relative error or a residual exceeds this.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, JsonSchema)]
pub struct KfunctionalArgs {
    /// Singular values of the profile.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub values: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub weight: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.1,1,10")]
    pub t: Vec<f64>,
    #[arg(long, default_value = "1")]
    pub p0: Exponent,
    #[arg(long, default_value = "inf")]
    pub p1: Exponent,
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    /// Treat `values` as eigenvalues of a Hermitian operand and check the selfadjoint gap.
    #[arg(long)]
    pub hermitian: bool,
    /// Also sweep kfonc ratios at this θ over random Hermitian pairs.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub pairs: usize,
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
    #[arg(long)]
    pub signed: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, JsonSchema)]
pub struct WeakLpArgs {
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,inf")]
    pub q: Vec<Exponent>,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long)]
    pub signed: bool,
    #[arg(long, default_value_t = 5)]
    pub dim: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "lowercase")]
pub enum AntiSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, JsonSchema)]
pub struct CommutatorArgs {
    #[arg(long, default_value = "1")]
    pub p: Exponent,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    #[arg(long)]
    pub signed: bool,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Anticommutator `b x^θ ± y^θ b` with positive x, y instead of `[f(x), b]`.
    #[arg(long, value_enum)]
    pub anti: Option<AntiSign>,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize, JsonSchema)]
pub struct MazurArgs {
    #[arg(long, default_value = "1")]
    pub p: Exponent,
    #[arg(long, default_value = "2")]
    pub q: Exponent,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct SchemaArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
}
