use anyhow::{bail, ensure, Context};
use fracpow_core::matcore::spectral_decompose;
use fracpow_core::random::{gaussian_hermitian, gaussian_matrix, log_uniform, random_projection, random_psd, rng_for};
use fracpow_core::verifier::{anticommutator_ratio, ando_ratio, bks_check, commutator_ratio, mazur_ratio, SearchConfig, SearchReport};
use rand::Rng;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::{check_dims, dim_for, normalize, read_json, summarize, summary_table, Outcome, SweepSummary, TrialSample};
use crate::cli::{AntiSign, BksArgs, CommutatorArgs, EstimateConstantArgs, MazurArgs, VerifyAndoArgs};
use crate::dto::{Exponent, PairDto, Precise, SampleDto, SearchDto};
use crate::exec::Exec;
use crate::report::{write_atomically, Table};

/// Ratios above this count as a violation of the constant-one inequality.
pub const BKS_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct AndoCell {
    pub p: Exponent,
    pub theta: f64,
    pub best_ratio: Precise,
    /// Present in search mode.
    pub search: Option<SearchDto>,
    /// Present when a stored pair was evaluated.
    pub sample: Option<SampleDto>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct VerifyAndoResults {
    /// `search` or `pair`.
    pub mode: String,
    pub pair: Option<PairDto>,
    pub cells: Vec<AndoCell>,
    pub max_ratio: Precise,
}

/// First object anywhere in `v` that reads as a `{x, y}` pair.
fn find_pair(v: &serde_json::Value) -> Option<PairDto> {
    if let Ok(p) = serde_json::from_value::<PairDto>(v.clone()) {
        return Some(p);
    }
    match v {
        serde_json::Value::Object(m) => m.values().find_map(find_pair),
        serde_json::Value::Array(a) => a.iter().find_map(find_pair),
        _ => None,
    }
}

pub fn verify_ando(a: &VerifyAndoArgs, exec: &Exec) -> anyhow::Result<Outcome> {
    ensure!(!a.p.is_empty() && !a.theta.is_empty(), "--p and --theta need at least one value each");
    let pair = match &a.pair {
        Some(path) => {
            let doc = read_json(path)?;
            Some(find_pair(&doc).with_context(|| format!("{} holds no {{x, y}} pair", path.display()))?)
        }
        None => {
            check_dims(&a.dims)?;
            ensure!(a.trials >= 1, "--trials must be at least 1");
            None
        }
    };
    let mut cells = Vec::new();
    let mut table = Table::new(&["p", "theta", "signed", "best_ratio", "trials"]);
    for &p in &a.p {
        for &theta in &a.theta {
            let cell = match &pair {
                Some(pd) => {
                    let x = spectral_decompose(&pd.x.to_matrix()?).context("x")?;
                    let y = spectral_decompose(&pd.y.to_matrix()?).context("y")?;
                    let s = ando_ratio(&x, &y, p.index(), theta, a.signed)?;
                    AndoCell { p, theta, best_ratio: Precise(s.value()), search: None, sample: Some((&s).into()) }
                }
                None => {
                    let cfg = SearchConfig { p: p.index(), theta, signed: a.signed };
                    let r = exec.search(&cfg, &a.dims, a.seed, 0, a.trials)?;
                    AndoCell { p, theta, best_ratio: Precise(r.best_ratio()), search: Some((&r).into()), sample: None }
                }
            };
            let trials = if pair.is_some() { 1 } else { a.trials };
            table.push(vec![p.to_string(), theta.to_string(), a.signed.to_string(), cell.best_ratio.to_string(), trials.to_string()]);
            cells.push(cell);
        }
    }
    let max_ratio = cells.iter().map(|c| c.best_ratio.0).fold(0.0, f64::max);
    let mut violations = Vec::new();
    if let Some(m) = a.assert_max {
        for c in cells.iter().filter(|c| c.best_ratio.0 > m) {
            violations.push(format!("ratio {} at p={} θ={} exceeds --assert-max {m}", c.best_ratio, c.p, c.theta));
        }
    }
    let results = VerifyAndoResults { mode: if pair.is_some() { "pair" } else { "search" }.into(), pair, cells, max_ratio: Precise(max_ratio) };
    Outcome::new(a, a.seed, &results, table, violations)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct EstimateConstantResults {
    #[serde(flatten)]
    pub search: SearchDto,
    /// Largest over smallest per-dimension maximum.
    pub growth_across_dims: Precise,
}

fn load_checkpoint(path: &std::path::Path, a: &EstimateConstantArgs) -> anyhow::Result<SearchReport> {
    let dto: SearchDto = serde_json::from_value(read_json(path)?).with_context(|| format!("{} is not a search checkpoint", path.display()))?;
    let par = &dto.parameters;
    ensure!(
        par.p == a.p && par.theta == a.theta && par.signed == a.signed && par.dims == a.dims && dto.seed == a.seed,
        "checkpoint {} was written for different parameters",
        path.display()
    );
    ensure!(dto.start == 0, "checkpoint must start at trial 0");
    ensure!(dto.end <= a.trials, "checkpoint covers {} trials, more than --trials {}", dto.end, a.trials);
    dto.to_report()
}

pub fn estimate_constant(a: &EstimateConstantArgs, exec: &Exec) -> anyhow::Result<Outcome> {
    check_dims(&a.dims)?;
    ensure!(a.trials >= 1, "--trials must be at least 1");
    ensure!(a.checkpoint_every >= 1, "--checkpoint-every must be at least 1");
    let cfg = SearchConfig { p: a.p.index(), theta: a.theta, signed: a.signed };
    let mut report = match &a.resume {
        Some(path) => Some(load_checkpoint(path, a)?),
        None => None,
    };
    let mut next = report.as_ref().map_or(0, |r| r.end);
    while next < a.trials {
        let end = (next + a.checkpoint_every).min(a.trials);
        let piece = exec.search(&cfg, &a.dims, a.seed, next, end)?;
        report = Some(match report {
            None => piece,
            Some(r) => r.merge(piece)?,
        });
        if let (Some(path), Some(r)) = (&a.checkpoint, &report) {
            write_atomically(path, &serde_json::to_string_pretty(&SearchDto::from(r))?)?;
        }
        next = end;
    }
    let Some(report) = report else { bail!("no trials were run") };
    let maxima: Vec<f64> = report.best_per_dim.iter().map(|d| d.1).collect();
    let hi = maxima.iter().copied().fold(0.0, f64::max);
    let lo = maxima.iter().copied().fold(f64::INFINITY, f64::min);
    let growth = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    let mut violations = Vec::new();
    if let Some(g) = a.max_growth {
        if !(growth <= g) {
            violations.push(format!("growth across dims {growth} exceeds --max-growth {g}"));
        }
    }
    let mut table = Table::new(&["dim", "best_ratio"]);
    for (d, v) in &report.best_per_dim {
        table.push(vec![d.to_string(), Precise(*v).to_string()]);
    }
    let results = EstimateConstantResults { search: (&report).into(), growth_across_dims: Precise(growth) };
    Outcome::new(a, a.seed, &results, table, violations)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct BksResults {
    #[serde(flatten)]
    pub summary: SweepSummary,
    pub bound: Precise,
}

pub fn bks(a: &BksArgs, exec: &Exec) -> anyhow::Result<Outcome> {
    check_dims(&a.dims)?;
    ensure!(a.trials >= 1, "--trials must be at least 1");
    let samples = exec.map(a.trials, |t| {
        let n = dim_for(&a.dims, t);
        let mut rng = rng_for(a.seed, t);
        let x = random_psd(n, rng.gen_range(1..=n), &mut rng);
        // Odd trials perturb x by a positive multiple of a projection.
        let y = if t % 2 == 0 {
            random_psd(n, rng.gen_range(1..=n), &mut rng)
        } else {
            let s = log_uniform(1e-3, 10.0, &mut rng);
            &x + random_projection(n, rng.gen_range(1..=n), &mut rng).scale(s)
        };
        let sample = bks_check(&spectral_decompose(&x)?, &spectral_decompose(&y)?, a.p.index(), a.theta)?;
        Ok(TrialSample { sample, operands: vec![x, y] })
    })?;
    let summary = summarize(&a.dims, &["x", "y"], samples);
    let mut violations = Vec::new();
    if summary.max_ratio.0 > 1.0 + BKS_SLACK {
        violations.push(format!("ratio {} exceeds 1 + {BKS_SLACK:e} at trial {:?}", summary.max_ratio, summary.argmax_trial));
    }
    let table = summary_table(&summary);
    Outcome::new(a, a.seed, &BksResults { summary, bound: Precise(1.0 + BKS_SLACK) }, table, violations)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct CommutatorResults {
    /// `commutator`, `anticommutator-plus` or `anticommutator-minus`.
    pub form: String,
    #[serde(flatten)]
    pub summary: SweepSummary,
}

pub fn commutator(a: &CommutatorArgs, exec: &Exec) -> anyhow::Result<Outcome> {
    check_dims(&a.dims)?;
    ensure!(a.trials >= 1, "--trials must be at least 1");
    let samples = exec.map(a.trials, |t| {
        let n = dim_for(&a.dims, t);
        let mut rng = rng_for(a.seed, t);
        Ok(match a.anti {
            None => {
                let x = gaussian_hermitian(n, &mut rng);
                let b = normalize(gaussian_matrix(n, n, &mut rng));
                let sample = commutator_ratio(&spectral_decompose(&x)?, &b, a.p.index(), a.theta, a.signed)?;
                TrialSample { sample, operands: vec![x, b] }
            }
            Some(sign) => {
                let x = random_psd(n, n, &mut rng);
                let y = random_psd(n, rng.gen_range(1..=n), &mut rng);
                let b = normalize(gaussian_matrix(n, n, &mut rng));
                let plus = sign == AntiSign::Plus;
                let sample = anticommutator_ratio(&spectral_decompose(&x)?, &spectral_decompose(&y)?, &b, a.p.index(), a.theta, plus)?;
                TrialSample { sample, operands: vec![x, y, b] }
            }
        })
    })?;
    let (form, labels): (&str, &[&str]) = match a.anti {
        None => ("commutator", &["x", "b"]),
        Some(AntiSign::Plus) => ("anticommutator-plus", &["x", "y", "b"]),
        Some(AntiSign::Minus) => ("anticommutator-minus", &["x", "y", "b"]),
    };
    let summary = summarize(&a.dims, labels, samples);
    let table = summary_table(&summary);
    Outcome::new(a, a.seed, &CommutatorResults { form: form.into(), summary }, table, Vec::new())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MazurResults {
    #[serde(flatten)]
    pub summary: SweepSummary,
}

pub fn mazur(a: &MazurArgs, exec: &Exec) -> anyhow::Result<Outcome> {
    check_dims(&a.dims)?;
    ensure!(a.trials >= 1, "--trials must be at least 1");
    let samples = exec.map(a.trials, |t| {
        let n = dim_for(&a.dims, t);
        let mut rng = rng_for(a.seed, t);
        let x = gaussian_matrix(n, n, &mut rng);
        let y = gaussian_matrix(n, n, &mut rng);
        let sample = mazur_ratio(&x, &y, a.p.index(), a.q.index())?;
        Ok(TrialSample { sample, operands: vec![x, y] })
    })?;
    let summary = summarize(&a.dims, &["x", "y"], samples);
    let table = summary_table(&summary);
    Outcome::new(a, a.seed, &MazurResults { summary }, table, Vec::new())
}
