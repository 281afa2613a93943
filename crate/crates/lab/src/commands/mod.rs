//! One function per subcommand. Each returns typed results, a CSV table and
//! the list of violated invariants.

mod interpolation;
mod multipliers;
mod ratios;
mod spectrum;

use anyhow::Context;
use fracpow_core::verifier::RatioSample;
use fracpow_core::CMatrix;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::cli::Command;
use crate::dto::{MatrixDto, Precise, SampleDto};
use crate::exec::Exec;
use crate::report::Table;

pub use interpolation::{KfoncSweep, KfunctionalResults, KfunctionalRow, WeakLpResults, WeakLpRow};
pub use multipliers::{FactorizeResults, MultiplierBoundResults, PointSet, SobolevDto};
pub use ratios::{AndoCell, BksResults, CommutatorResults, EstimateConstantResults, MazurResults, VerifyAndoResults};
pub use spectrum::{KernelSpectrumResults, PartialSumSeries, SpectrumRow};

pub struct Outcome {
    pub config: serde_json::Value,
    pub seed: u64,
    pub results: serde_json::Value,
    pub table: Table,
    pub violations: Vec<String>,
}

impl Outcome {
    fn new<C: Serialize, R: Serialize>(config: &C, seed: u64, results: &R, table: Table, violations: Vec<String>) -> anyhow::Result<Self> {
        Ok(Self { config: serde_json::to_value(config)?, seed, results: serde_json::to_value(results)?, table, violations })
    }
}

pub fn dispatch(command: &Command, exec: &Exec) -> anyhow::Result<Outcome> {
    match command {
        Command::VerifyAndo(a) => ratios::verify_ando(a, exec),
        Command::EstimateConstant(a) => ratios::estimate_constant(a, exec),
        Command::Bks(a) => ratios::bks(a, exec),
        Command::Commutator(a) => ratios::commutator(a, exec),
        Command::Mazur(a) => ratios::mazur(a, exec),
        Command::MultiplierBound(a) => multipliers::multiplier_bound(a, exec),
        Command::Factorize(a) => multipliers::factorize(a),
        Command::KernelSpectrum(a) => spectrum::kernel_spectrum(a, exec),
        Command::Kfunctional(a) => interpolation::kfunctional(a, exec),
        Command::WeakLp(a) => interpolation::weak_lp(a, exec),
        Command::Schema(_) => anyhow::bail!("schema is not a report command"),
    }
}

/// Maximum of a batch of ratio samples, overall and per dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SweepSummary {
    pub samples: u64,
    /// Samples whose denominator vanished; excluded from the maxima.
    pub degenerate: u64,
    pub max_ratio: Precise,
    pub argmax_trial: Option<u64>,
    pub best_sample: Option<SampleDto>,
    /// Operands of the best sample, in the order named by `witness_labels`.
    pub witness: Vec<MatrixDto>,
    pub witness_labels: Vec<String>,
    pub per_dim: Vec<DimSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct DimSummary {
    pub dim: usize,
    pub samples: u64,
    pub degenerate: u64,
    pub max_ratio: Precise,
}

pub(crate) struct TrialSample {
    pub sample: RatioSample,
    pub operands: Vec<CMatrix>,
}

pub(crate) fn summarize(dims: &[usize], labels: &[&str], trials: Vec<TrialSample>) -> SweepSummary {
    let mut per_dim: Vec<DimSummary> = Vec::new();
    for &d in dims {
        if !per_dim.iter().any(|s| s.dim == d) {
            per_dim.push(DimSummary { dim: d, samples: 0, degenerate: 0, max_ratio: Precise(0.0) });
        }
    }
    let mut best: Option<(u64, &TrialSample)> = None;
    let mut degenerate = 0;
    for (t, ts) in trials.iter().enumerate() {
        let s = &ts.sample;
        let slot = per_dim.iter_mut().find(|d| d.dim == s.parameters.dim);
        if s.ratio.is_none() {
            degenerate += 1;
        }
        if let Some(slot) = slot {
            slot.samples += 1;
            slot.degenerate += u64::from(s.ratio.is_none());
            slot.max_ratio = Precise(slot.max_ratio.0.max(s.value()));
        }
        if s.ratio.is_some() && best.is_none_or(|(_, b)| s.value() > b.sample.value()) {
            best = Some((t as u64, ts));
        }
    }
    SweepSummary {
        samples: trials.len() as u64,
        degenerate,
        max_ratio: Precise(best.map_or(0.0, |(_, b)| b.sample.value())),
        argmax_trial: best.map(|(t, _)| t),
        best_sample: best.map(|(_, b)| (&b.sample).into()),
        witness: best.map_or_else(Vec::new, |(_, b)| b.operands.iter().map(MatrixDto::from).collect()),
        witness_labels: labels.iter().map(|s| s.to_string()).collect(),
        per_dim,
    }
}

pub(crate) fn summary_table(s: &SweepSummary) -> Table {
    let mut t = Table::new(&["dim", "samples", "degenerate", "max_ratio"]);
    for d in &s.per_dim {
        t.push(vec![d.dim.to_string(), d.samples.to_string(), d.degenerate.to_string(), d.max_ratio.to_string()]);
    }
    t
}

pub(crate) fn check_dims(dims: &[usize]) -> anyhow::Result<()> {
    anyhow::ensure!(!dims.is_empty(), "--dims must list at least one dimension");
    anyhow::ensure!(dims.iter().all(|&d| (1..=64).contains(&d)), "dimensions must lie in 1..=64");
    Ok(())
}

pub(crate) fn dim_for(dims: &[usize], t: u64) -> usize {
    dims[(t % dims.len() as u64) as usize]
}

pub(crate) fn read_json(path: &std::path::Path) -> anyhow::Result<serde_json::Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))
}

/// Operator-norm-one rescaling of a nonzero matrix.
pub(crate) fn normalize(b: CMatrix) -> CMatrix {
    let s = fracpow_core::matcore::operator_norm(&b);
    b.unscale(s)
}
