use anyhow::ensure;
use fracpow_core::lorentz::{k_functional_profile, kfonc_check, selfadjoint_k_gap, weak_lp_check, KFunctionalQuery, RearrangementProfile};
use fracpow_core::matcore::{spectral_decompose, HermitianOperand};
use fracpow_core::random::{gaussian_hermitian, rng_for};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::Outcome;
use crate::cli::{KfunctionalArgs, WeakLpArgs};
use crate::dto::{Exponent, Precise};
use crate::exec::Exec;
use crate::report::Table;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct KfunctionalRow {
    pub t: f64,
    pub k_value: Precise,
    /// Optimal `x0` profile on the grid.
    pub split: Vec<Precise>,
    pub grid: usize,
    /// With `--hermitian`: K over selfadjoint splittings, and whether it stays within the factor.
    pub k_selfadjoint: Option<Precise>,
    pub factor: Option<f64>,
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct KfoncSweep {
    pub theta: f64,
    pub t: f64,
    pub pairs: usize,
    pub degenerate: usize,
    pub max_ratio: Precise,
    pub min_ratio: Precise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct KfunctionalResults {
    pub rows: Vec<KfunctionalRow>,
    pub kfonc: Vec<KfoncSweep>,
}

pub fn kfunctional(a: &KfunctionalArgs, exec: &Exec) -> anyhow::Result<Outcome> {
    ensure!(!a.values.is_empty(), "--values must list at least one value");
    ensure!(!a.t.is_empty(), "--t must list at least one value");
    let operand = if a.hermitian { Some(HermitianOperand::diagonal(&a.values)?.with_trace_weight(a.weight)?) } else { None };
    let mu = RearrangementProfile::new(a.values.iter().map(|v| v.abs()).collect(), a.weight)?;
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut table = Table::new(&["t", "k_value", "k_selfadjoint", "factor", "holds"]);
    for &t in &a.t {
        let q = KFunctionalQuery::new(t, a.p0.index(), a.p1.index())?;
        let kv = k_functional_profile(&mu, &q, a.grid)?;
        let gap = match &operand {
            Some(x) => Some(selfadjoint_k_gap(x, &q, a.grid)?),
            None => None,
        };
        if let Some(g) = gap.as_ref().filter(|g| !g.holds) {
            violations.push(format!("t={t}: K_t = {} exceeds {} times the selfadjoint K = {}", g.k_t, g.factor, g.k_sa));
        }
        table.push(vec![
            t.to_string(),
            Precise(kv.value).to_string(),
            gap.as_ref().map_or(String::new(), |g| Precise(g.k_sa).to_string()),
            gap.as_ref().map_or(String::new(), |g| g.factor.to_string()),
            gap.as_ref().map_or(String::new(), |g| g.holds.to_string()),
        ]);
        rows.push(KfunctionalRow {
            t,
            k_value: Precise(kv.value),
            split: kv.split.iter().copied().map(Precise).collect(),
            grid: kv.grid,
            k_selfadjoint: gap.as_ref().map(|g| Precise(g.k_sa)),
            factor: gap.as_ref().map(|g| g.factor),
            holds: gap.as_ref().map(|g| g.holds),
        });
    }
    let mut kfonc = Vec::new();
    if let Some(theta) = a.theta {
        ensure!(a.dim >= 1 && a.pairs >= 1, "--dim and --pairs must be at least 1");
        for &t in &a.t {
            let samples = exec.map(a.pairs as u64, |i| {
                let mut rng = rng_for(a.seed, i);
                let x = spectral_decompose(&gaussian_hermitian(a.dim, &mut rng))?;
                let y = spectral_decompose(&gaussian_hermitian(a.dim, &mut rng))?;
                Ok(kfonc_check(&x, &y, a.p0.index(), a.p1.index(), theta, a.signed, t, a.grid)?)
            })?;
            let finite: Vec<f64> = samples.iter().filter_map(|s| s.ratio).collect();
            if let Some(bad) = finite.iter().find(|r| !r.is_finite()) {
                violations.push(format!("kfonc ratio {bad} at t={t} is not finite"));
            }
            kfonc.push(KfoncSweep {
                theta,
                t,
                pairs: a.pairs,
                degenerate: samples.len() - finite.len(),
                max_ratio: Precise(finite.iter().copied().fold(0.0, f64::max)),
                min_ratio: Precise(finite.iter().copied().fold(f64::INFINITY, f64::min)),
            });
        }
    }
    Outcome::new(a, a.seed, &KfunctionalResults { rows, kfonc }, table, violations)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct WeakLpRow {
    pub q: Exponent,
    pub samples: u64,
    pub degenerate: u64,
    pub max_ratio: Precise,
    pub mean_ratio: Precise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct WeakLpResults {
    pub rows: Vec<WeakLpRow>,
}

pub fn weak_lp(a: &WeakLpArgs, exec: &Exec) -> anyhow::Result<Outcome> {
    ensure!(!a.q.is_empty(), "--q must list at least one exponent");
    ensure!(a.dim >= 1 && a.trials >= 1, "--dim and --trials must be at least 1");
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut table = Table::new(&["q", "samples", "degenerate", "max_ratio", "mean_ratio"]);
    for &q in &a.q {
        // Pair t is the same for every q.
        let samples = exec.map(a.trials, |t| {
            let mut rng = rng_for(a.seed, t);
            let x = spectral_decompose(&gaussian_hermitian(a.dim, &mut rng))?;
            let y = spectral_decompose(&gaussian_hermitian(a.dim, &mut rng))?;
            Ok(weak_lp_check(&x, &y, a.p, q.index(), a.theta, a.signed)?)
        })?;
        let ratios: Vec<f64> = samples.iter().filter_map(|s| s.ratio).collect();
        if let Some(bad) = ratios.iter().find(|r| !r.is_finite()) {
            violations.push(format!("weak-type ratio {bad} at q={q} is not finite"));
        }
        let n = ratios.len().max(1) as f64;
        let row = WeakLpRow {
            q,
            samples: a.trials,
            degenerate: a.trials - ratios.len() as u64,
            max_ratio: Precise(ratios.iter().copied().fold(0.0, f64::max)),
            mean_ratio: Precise(ratios.iter().sum::<f64>() / n),
        };
        table.push(vec![q.to_string(), row.samples.to_string(), row.degenerate.to_string(), row.max_ratio.to_string(), row.mean_ratio.to_string()]);
        rows.push(row);
    }
    Outcome::new(a, a.seed, &WeakLpResults { rows }, table, violations)
}
