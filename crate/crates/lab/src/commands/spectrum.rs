use anyhow::ensure;
use fracpow_core::kernelspec::{analytic_eigenvalues, eigenfunction_residual, fit_log_growth, nystrom_spectrum, schatten_partial_sums};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::Outcome;
use crate::cli::KernelSpectrumArgs;
use crate::dto::Precise;
use crate::exec::Exec;
use crate::report::Table;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SpectrumRow {
    pub k: u64,
    pub theta_k: Precise,
    pub alpha_k: Precise,
    pub lambda_k: Precise,
    pub nystrom_lambda_k: Option<Precise>,
    pub rel_err: Option<Precise>,
    pub residual: Option<Precise>,
}

/// `Σ_{k ≤ K} λ_k^p` at each requested `K`, with the fit `c ln K + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PartialSumSeries {
    pub p: f64,
    pub k: Vec<u64>,
    pub sums: Vec<Precise>,
    pub log_slope: Option<Precise>,
    pub log_intercept: Option<Precise>,
    pub fit_residual: Option<Precise>,
    /// Last sum minus the one before it.
    pub last_increment: Option<Precise>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct KernelSpectrumResults {
    pub rows: Vec<SpectrumRow>,
    pub nystrom_trace: Option<Precise>,
    pub partial_sums: Vec<PartialSumSeries>,
}

pub fn kernel_spectrum(a: &KernelSpectrumArgs, exec: &Exec) -> anyhow::Result<Outcome> {
    ensure!(a.kmax >= 1, "--kmax must be at least 1");
    ensure!(a.nystrom == 0 || a.nystrom as u64 >= a.kmax, "--nystrom must be at least --kmax");
    let spec = analytic_eigenvalues(a.kmax)?;
    let nys = if a.nystrom > 0 { Some(nystrom_spectrum(a.nystrom)?) } else { None };
    let residuals = if a.residual_points > 0 {
        Some(exec.map(a.kmax, |i| Ok(eigenfunction_residual(i + 1, a.residual_points)?))?)
    } else {
        None
    };
    let mut rows = Vec::new();
    let mut table = Table::new(&["k", "theta_k", "lambda_k", "nystrom_lambda_k", "rel_err", "residual"]);
    let mut violations = Vec::new();
    for i in 0..a.kmax as usize {
        let lambda = spec.lambdas[i];
        let nl = nys.as_ref().map(|v| v[i]);
        let rel = nl.map(|v| (v - lambda).abs() / lambda);
        let res = residuals.as_ref().map(|r| r[i]);
        if let Some(tol) = a.tolerance {
            for (what, v) in [("Nyström relative error", rel), ("eigenfunction residual", res)] {
                if let Some(v) = v.filter(|v| !(*v <= tol)) {
                    violations.push(format!("k={}: {what} {v:e} exceeds {tol:e}", i + 1));
                }
            }
        }
        let cell = |v: Option<f64>| v.map_or(String::new(), |v| Precise(v).to_string());
        table.push(vec![(i + 1).to_string(), Precise(spec.thetas[i]).to_string(), Precise(lambda).to_string(), cell(nl), cell(rel), cell(res)]);
        rows.push(SpectrumRow {
            k: i as u64 + 1,
            theta_k: Precise(spec.thetas[i]),
            alpha_k: Precise(spec.alphas[i]),
            lambda_k: Precise(lambda),
            nystrom_lambda_k: nl.map(Precise),
            rel_err: rel.map(Precise),
            residual: res.map(Precise),
        });
    }
    let mut partial_sums = Vec::new();
    if !a.sums_k.is_empty() {
        ensure!(a.sums_k.windows(2).all(|w| w[0] < w[1]), "--sums-k must increase");
        for &p in &a.sums_p {
            ensure!(p > 0.0 && p.is_finite(), "--sums-p entries must be positive");
            let sums = schatten_partial_sums(p, &a.sums_k)?;
            let fit = if sums.len() >= 2 { Some(fit_log_growth(&a.sums_k, &sums)?) } else { None };
            let n = sums.len();
            partial_sums.push(PartialSumSeries {
                p,
                k: a.sums_k.clone(),
                sums: sums.iter().copied().map(Precise).collect(),
                log_slope: fit.map(|f| Precise(f.0)),
                log_intercept: fit.map(|f| Precise(f.1)),
                fit_residual: fit.map(|f| Precise(f.2)),
                last_increment: (n >= 2).then(|| Precise(sums[n - 1] - sums[n - 2])),
            });
        }
    }
    let results = KernelSpectrumResults { rows, nystrom_trace: nys.map(|v| Precise(v.iter().sum())), partial_sums };
    Outcome::new(a, 0, &results, table, violations)
}
