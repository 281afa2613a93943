use std::f64::consts::PI;

use anyhow::{ensure, Context};
use fracpow_core::factorizer::{build_factorization, catalog_kernel, certified_pcb_bound, default_order, KernelParams, SmoothKernel};
use fracpow_core::random::{rng_for, uniform};
use fracpow_core::schur::{hadamard_norm_lower, LOWER_BOUND_SCOPE};
use fracpow_core::{CMatrix, SchattenIndex};
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::{read_json, Outcome};
use crate::cli::{FactorizeArgs, KernelArgs, MultiplierBoundArgs};
use crate::dto::{Exponent, MatrixDto, Precise, SymbolDto};
use crate::exec::Exec;
use crate::report::Table;

fn params(k: &KernelArgs) -> KernelParams {
    KernelParams { theta: k.kernel_theta, shift: k.shift, a: k.a, k: k.wave_k, l: k.wave_l, c: k.c }
}

fn kernel(k: &KernelArgs, grid: usize) -> anyhow::Result<SmoothKernel> {
    ensure!(grid.is_power_of_two() && grid >= 16, "--grid must be a power of two, at least 16");
    catalog_kernel(&k.kernel, &params(k), grid).with_context(|| format!("kernel `{}`", k.kernel))
}

fn order(d: Option<u32>, p: SchattenIndex) -> u32 {
    d.unwrap_or_else(|| default_order(p))
}

/// Windows where the cut-off kernels are not identically zero.
fn window(name: &str) -> ((f64, f64), (f64, f64)) {
    match name {
        "theta2-near" => ((-0.6, 0.8), (0.7, 3.1)),
        "theta2-far" => ((0.2, 3.1), (0.2, 3.1)),
        "theta-plus" => ((-0.3, 1.3), (-0.3, 1.3)),
        _ => ((0.0, 2.0 * PI), (0.0, 2.0 * PI)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct PointSet {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct MultiplierBoundResults {
    pub kernel: String,
    pub p: Exponent,
    pub d: u32,
    pub certified_upper: Precise,
    pub empirical_lower: Precise,
    pub sandwiched: bool,
    pub scope: String,
    /// Lower bound for each sampled point set.
    pub lowers: Vec<Precise>,
    pub best_points: Option<PointSet>,
    pub witness: MatrixDto,
}

pub fn multiplier_bound(a: &MultiplierBoundArgs, exec: &Exec) -> anyhow::Result<Outcome> {
    let k = kernel(&a.kernel, a.grid)?;
    let p = a.p.index();
    let d = order(a.d, p);
    let upper = certified_pcb_bound(&k, d, p)?;
    let (lowers, points, witnesses): (Vec<f64>, Vec<Option<PointSet>>, Vec<CMatrix>) = match &a.symbol {
        Some(path) => {
            let dto: SymbolDto = serde_json::from_value(read_json(path)?).context("symbol file")?;
            let m = dto.to_symbol()?.to_complex();
            let est = hadamard_norm_lower(&m, p, a.trials, a.seed, &[])?;
            (vec![est.lower], vec![None], vec![est.witness])
        }
        None => {
            ensure!(a.points >= 1 && a.samples >= 1, "--points and --samples must be at least 1");
            let (xr, yr) = window(&a.kernel.kernel);
            let runs = exec.map(a.samples as u64, |s| {
                let mut rng = rng_for(a.seed, s);
                let xs: Vec<f64> = (0..a.points).map(|_| uniform(xr.0, xr.1, &mut rng)).collect();
                let ys: Vec<f64> = (0..a.points).map(|_| uniform(yr.0, yr.1, &mut rng)).collect();
                let m = CMatrix::from_fn(a.points, a.points, |i, j| k.eval(xs[i], ys[j]));
                let est = hadamard_norm_lower(&m, p, a.trials, a.seed ^ s, &[])?;
                Ok((est.lower, Some(PointSet { xs, ys }), est.witness))
            })?;
            let mut out = (Vec::new(), Vec::new(), Vec::new());
            for (l, pts, w) in runs {
                out.0.push(l);
                out.1.push(pts);
                out.2.push(w);
            }
            out
        }
    };
    let best = (0..lowers.len()).fold(0, |b, i| if lowers[i] > lowers[b] { i } else { b });
    let lower = lowers[best];
    let sandwiched = lower <= upper * (1.0 + 1e-12);
    let mut violations = Vec::new();
    if !sandwiched {
        violations.push(format!("empirical lower bound {lower} exceeds certified upper bound {upper}"));
    }
    let mut table = Table::new(&["sample", "lower", "upper"]);
    for (i, l) in lowers.iter().enumerate() {
        table.push(vec![i.to_string(), Precise(*l).to_string(), Precise(upper).to_string()]);
    }
    let results = MultiplierBoundResults {
        kernel: k.name(),
        p: a.p,
        d,
        certified_upper: Precise(upper),
        empirical_lower: Precise(lower),
        sandwiched,
        scope: LOWER_BOUND_SCOPE.into(),
        lowers: lowers.iter().copied().map(Precise).collect(),
        best_points: points[best].clone(),
        witness: MatrixDto::from(&witnesses[best]),
    };
    Outcome::new(a, a.seed, &results, table, violations)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SobolevDto {
    pub mixed: Precise,
    pub y_derivative: Precise,
    pub x_derivative: Precise,
    pub value: Precise,
    pub total: Precise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct FactorizeResults {
    pub kernel: String,
    pub d: u32,
    pub terms: usize,
    pub certified_bound: Precise,
    pub truncation_error: Precise,
    /// Max over the kernel grid of the reconstruction error.
    pub reconstruction_error: Precise,
    pub sobolev: SobolevDto,
    pub g_labels: Vec<i64>,
    pub alphas: Vec<Precise>,
    pub f_sups: Vec<Precise>,
    pub sample_points: Vec<f64>,
    /// `f_samples[l][i] = [re, im]` of term `l` at `sample_points[i]`.
    pub f_samples: Vec<Vec<[f64; 2]>>,
}

fn grid_points(n: usize) -> Vec<f64> {
    (0..n).map(|a| 2.0 * PI * a as f64 / n as f64).collect()
}

pub fn factorize(a: &FactorizeArgs) -> anyhow::Result<Outcome> {
    let k = kernel(&a.kernel, a.grid)?;
    let p = a.p.index();
    let d = order(a.d, p);
    let f = build_factorization(&k, d, p, a.cutoff)?;
    let xs = grid_points(a.grid);
    let exact = CMatrix::from_fn(a.grid, a.grid, |i, j| k.eval(xs[i], xs[j]));
    let recon = (f.eval_grid(&xs, &xs) - exact).iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let sample_points = grid_points(a.samples.max(1));
    let f_samples = (0..f.alphas.len()).map(|t| f.f_values(t, &sample_points).iter().map(|z| [z.re, z.im]).collect()).collect();
    let mut violations = Vec::new();
    if !(recon <= f.truncation_error) {
        violations.push(format!("reconstruction error {recon:e} exceeds the truncation bound {:e}", f.truncation_error));
    }
    let mut table = Table::new(&["l", "alpha", "f_sup"]);
    for t in 0..f.alphas.len() {
        table.push(vec![f.g_labels[t].to_string(), Precise(f.alphas[t]).to_string(), Precise(f.f_sups[t]).to_string()]);
    }
    let s = &f.sobolev;
    let results = FactorizeResults {
        kernel: k.name(),
        d,
        terms: f.alphas.len(),
        certified_bound: Precise(f.certified_bound),
        truncation_error: Precise(f.truncation_error),
        reconstruction_error: Precise(recon),
        sobolev: SobolevDto {
            mixed: Precise(s.mixed),
            y_derivative: Precise(s.y_derivative),
            x_derivative: Precise(s.x_derivative),
            value: Precise(s.value),
            total: Precise(s.total()),
        },
        g_labels: f.g_labels.clone(),
        alphas: f.alphas.iter().copied().map(Precise).collect(),
        f_sups: f.f_sups.iter().copied().map(Precise).collect(),
        sample_points,
        f_samples,
    };
    Outcome::new(a, 0, &results, table, violations)
}
