//! Decreasing rearrangements, Lorentz quasi-norms and K-functionals of
//! finite matrices, and the interpolation forms of the Hölder estimate.
//!
//! A matrix is read through its singular values as the step function
//! `μ_t = s_i` on `[(i-1)w, iw)`, where `w` is the trace weight.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::matcore::{apply_calculus, schatten_from_singular_values, singular_values, CMatrix, HermitianOperand, SchattenIndex, SignedPowerFunction};
use crate::verifier::{digest, RatioParameters, RatioSample};

/// Singular values `s_1 ≥ … ≥ s_n ≥ 0` with step width `weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangementProfile {
    values: Vec<f64>,
    weight: f64,
}

impl RearrangementProfile {
    pub fn new(mut values: Vec<f64>, weight: f64) -> Result<Self> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(invalid("weight", "must be positive and finite"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if values.iter().any(|&v| v < 0.0) {
            return Err(invalid("values", "must be nonnegative"));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values, weight })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// `μ_t`, zero past the last step.
    pub fn at(&self, t: f64) -> f64 {
        if t < 0.0 {
            return self.values.first().copied().unwrap_or(0.0);
        }
        self.values.get((t / self.weight).floor() as usize).copied().unwrap_or(0.0)
    }
}

/// Sorted singular values of `a` with unit step.
pub fn rearrangement(a: &CMatrix) -> Result<RearrangementProfile> {
    rearrangement_weighted(a, 1.0)
}

pub fn rearrangement_weighted(a: &CMatrix, weight: f64) -> Result<RearrangementProfile> {
    if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite);
    }
    RearrangementProfile::new(singular_values(a), weight)
}

/// `‖t^{1/p} μ_t‖_{L_q(dt/t)}`, integrated exactly over the steps.
///
/// For `q = ∞` the supremum over each step is approached at its right end.
pub fn lorentz_norm(mu: &RearrangementProfile, p: f64, q: SchattenIndex) -> Result<f64> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(invalid("p", "must be positive and finite"));
    }
    if mu.values.is_empty() {
        return Err(Error::Empty("profile"));
    }
    let w = mu.weight;
    let steps = mu.values.iter().enumerate().filter(|(_, &s)| s > 0.0).map(|(i, &s)| ((i + 1) as f64, s));
    Ok(match q {
        SchattenIndex::Infinity => steps.map(|(i, s)| (i * w).powf(1.0 / p) * s).fold(0.0, f64::max),
        SchattenIndex::Finite(q) => {
            let r = q / p;
            let sum: f64 = steps.map(|(i, s)| s.powf(q) * (p / q) * ((i * w).powf(r) - ((i - 1.0) * w).powf(r))).sum();
            sum.powf(1.0 / q)
        }
    })
}

/// `t`, the couple `(ℓ_{p0}, ℓ_{p1})` and whether splittings must be selfadjoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KFunctionalQuery {
    pub t: f64,
    pub p0: SchattenIndex,
    pub p1: SchattenIndex,
    pub selfadjoint_constraint: bool,
}

impl KFunctionalQuery {
    pub fn new(t: f64, p0: SchattenIndex, p1: SchattenIndex) -> Result<Self> {
        let q = Self { t, p0, p1, selfadjoint_constraint: false };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(invalid("t", "must be positive and finite"));
        }
        if !(self.p0.value() < self.p1.value()) {
            return Err(invalid("p0", "need p0 < p1"));
        }
        Ok(())
    }
}

pub const MIN_K_GRID: usize = 16;
pub const DEFAULT_K_GRID: usize = 256;
const REFINEMENTS: u32 = 3;
const MAX_SWEEPS: usize = 64;

/// A K-functional value: an upper bound attained by an explicit splitting.
#[derive(Debug, Clone, PartialEq)]
pub struct KValue {
    pub value: f64,
    /// `σ_i`, the part of `s_i` assigned to the first space.
    pub split: Vec<f64>,
    pub grid: usize,
}

fn objective(s: &[f64], sigma: &[f64], q: &KFunctionalQuery, w: f64) -> f64 {
    let rest: Vec<f64> = s.iter().zip(sigma).map(|(a, b)| (a - b).max(0.0)).collect();
    schatten_from_singular_values(sigma, q.p0, w) + q.t * schatten_from_singular_values(&rest, q.p1, w)
}

fn descend(s: &[f64], start: Vec<f64>, q: &KFunctionalQuery, w: f64, grid: usize) -> (f64, Vec<f64>) {
    let mut sigma = start;
    let mut best = objective(s, &sigma, q, w);
    let try_value = |sigma: &mut Vec<f64>, best: &mut f64, i: usize, v: f64| -> bool {
        let old = sigma[i];
        sigma[i] = v;
        let val = objective(s, sigma, q, w);
        if val < *best {
            *best = val;
            true
        } else {
            sigma[i] = old;
            false
        }
    };
    for _ in 0..MAX_SWEEPS {
        let mut moved = false;
        for i in 0..s.len() {
            for j in 0..=grid {
                moved |= try_value(&mut sigma, &mut best, i, s[i] * j as f64 / grid as f64);
            }
        }
        if !moved {
            break;
        }
    }
    // Local refinement below the grid spacing.
    for r in 1..=REFINEMENTS {
        let scale = (grid as f64).powi(r as i32 + 1) / 8f64.powi(r as i32 - 1);
        for _ in 0..MAX_SWEEPS {
            let mut moved = false;
            for i in 0..s.len() {
                let step = s[i] / scale;
                for m in -8i32..=8 {
                    let v = (sigma[i] + m as f64 * step).clamp(0.0, s[i]);
                    moved |= try_value(&mut sigma, &mut best, i, v);
                }
            }
            if !moved {
                break;
            }
        }
    }
    (best, sigma)
}

fn search_level(s: &[f64], q: &KFunctionalQuery, w: f64, grid: usize) -> (f64, Vec<f64>) {
    let mut starts: Vec<Vec<f64>> = alloc::vec![s.to_vec(), alloc::vec![0.0; s.len()]];
    let mut levels: Vec<f64> = s.to_vec();
    levels.dedup();
    for lambda in levels {
        starts.push(s.iter().map(|&v| (v - lambda).max(0.0)).collect());
    }
    starts
        .into_iter()
        .map(|st| descend(s, st, q, w, grid))
        .fold((f64::INFINITY, Vec::new()), |acc, cand| if cand.0 < acc.0 { cand } else { acc })
}

/// `K_t(μ, ℓ_{p0}, ℓ_{p1}) = inf ‖σ‖_{p0} + t ‖μ - σ‖_{p1}` over `0 ≤ σ ≤ μ`.
///
/// Multi-start coordinate descent on the grids `grid, grid/2, …` (down to 16)
/// with local refinement; the minimum over levels is kept, so the value
/// never increases when `grid` doubles.
pub fn k_functional_profile(mu: &RearrangementProfile, query: &KFunctionalQuery, grid: usize) -> Result<KValue> {
    query.validate()?;
    if grid < MIN_K_GRID {
        return Err(invalid("grid", "need at least 16 points"));
    }
    let s = mu.values();
    if s.is_empty() {
        return Err(Error::Empty("profile"));
    }
    let mut best = (f64::INFINITY, Vec::new());
    let mut g = grid;
    while g >= MIN_K_GRID {
        let cand = search_level(s, query, mu.weight, g);
        if cand.0 < best.0 {
            best = cand;
        }
        g /= 2;
    }
    Ok(KValue { value: best.0, split: best.1, grid })
}

/// [`k_functional_profile`] of the rearrangement of `x`.
pub fn k_functional(x: &CMatrix, query: &KFunctionalQuery, grid: usize) -> Result<KValue> {
    k_functional_profile(&rearrangement(x)?, query, grid)
}

/// `2^{max(1/p0, 1) - 1}`: the cost of passing to selfadjoint parts.
pub fn selfadjoint_factor(p0: SchattenIndex) -> f64 {
    2f64.powf((1.0 / p0.value()).max(1.0) - 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KGap {
    pub k_t: f64,
    /// Upper bound for the selfadjoint-constrained value.
    pub k_sa: f64,
    pub factor: f64,
    /// `k_sa ≥ k_t ≥ k_sa / factor`, up to the grid tolerance.
    pub holds: bool,
}

/// Grid tolerance for comparisons between two K-functional searches.
pub const K_TOLERANCE: f64 = 1e-9;

/// Compares `K_t` with the value over selfadjoint splittings.
///
/// The selfadjoint search splits each eigenvalue `λ_i` into `σ_i + (λ_i - σ_i)`
/// with `σ_i` between 0 and `λ_i`, which are commuting Hermitian pieces.
pub fn selfadjoint_k_gap(x: &HermitianOperand, query: &KFunctionalQuery, grid: usize) -> Result<KGap> {
    let w = x.trace_weight();
    let k_t = k_functional_profile(&rearrangement_weighted(x.entries(), w)?, query, grid)?.value;
    let abs: Vec<f64> = x.eigenvalues().iter().map(|v| v.abs()).collect();
    let sa = KFunctionalQuery { selfadjoint_constraint: true, ..*query };
    let k_sa = k_functional_profile(&RearrangementProfile::new(abs, w)?, &sa, grid)?.value;
    let factor = selfadjoint_factor(query.p0);
    let tol = K_TOLERANCE * (1.0 + k_sa);
    let holds = k_sa + tol >= k_t && k_t + tol >= k_sa / factor;
    Ok(KGap { k_t, k_sa, factor, holds })
}

/// Cost `‖x0‖_{p0} + t ‖x1‖_{p1}` of an explicit splitting.
pub fn splitting_cost(x0: &CMatrix, x1: &CMatrix, query: &KFunctionalQuery, weight: f64) -> f64 {
    schatten_from_singular_values(&singular_values(x0), query.p0, weight)
        + query.t * schatten_from_singular_values(&singular_values(x1), query.p1, weight)
}

/// For `x = x0 + (x - x0)` with `x` Hermitian: the cost of the splitting and of its
/// Hermitian parts. The second is at most `selfadjoint_factor` times the first.
pub fn hermitian_part_costs(x: &HermitianOperand, x0: &CMatrix, query: &KFunctionalQuery) -> Result<(f64, f64)> {
    query.validate()?;
    let n = x.dim();
    if x0.shape() != (n, n) {
        return Err(Error::ShapeMismatch { expected: (n, n), found: x0.shape() });
    }
    let x1 = x.entries() - x0;
    let re = |m: &CMatrix| (m + m.adjoint()).scale(0.5);
    let w = x.trace_weight();
    Ok((splitting_cost(x0, &x1, query, w), splitting_cost(&re(x0), &re(&x1), query, w)))
}

fn difference_of_powers(x: &HermitianOperand, y: &HermitianOperand, theta: f64, signed: bool) -> Result<CMatrix> {
    if x.dim() != y.dim() {
        return Err(Error::ShapeMismatch { expected: (x.dim(), x.dim()), found: (y.dim(), y.dim()) });
    }
    let f = SignedPowerFunction::new(theta, signed)?;
    Ok(apply_calculus(y, &f).entries() - apply_calculus(x, &f).entries())
}

/// `K_{t^θ}(f(y) - f(x); p0/θ, p1/θ)` over `K_t(y - x; p0, p1)^θ`.
#[allow(clippy::too_many_arguments)]
pub fn kfonc_check(
    x: &HermitianOperand,
    y: &HermitianOperand,
    p0: SchattenIndex,
    p1: SchattenIndex,
    theta: f64,
    signed: bool,
    t: f64,
    grid: usize,
) -> Result<RatioSample> {
    let w = x.trace_weight();
    let inner = KFunctionalQuery::new(t, p0, p1)?;
    let outer = KFunctionalQuery::new(t.powf(theta), p0.divided_by(theta), p1.divided_by(theta))?;
    let fd = difference_of_powers(x, y, theta, signed)?;
    let d = y.entries() - x.entries();
    let num = k_functional_profile(&rearrangement_weighted(&fd, w)?, &outer, grid)?.value;
    let den = k_functional_profile(&rearrangement_weighted(&d, w)?, &inner, grid)?.value.powf(theta);
    Ok(ratio_sample(num, den, x, y, p0, theta, signed))
}

fn ratio_sample(num: f64, den: f64, x: &HermitianOperand, y: &HermitianOperand, p: SchattenIndex, theta: f64, signed: bool) -> RatioSample {
    let degenerate = !(den > crate::verifier::DEGENERATE_DENOMINATOR);
    RatioSample {
        numerator: num,
        denominator: den,
        ratio: (!degenerate).then(|| num / den),
        degenerate,
        inputs_digest: digest(&[x.entries(), y.entries()]),
        parameters: RatioParameters { p, theta, signed, dim: x.dim() },
    }
}

/// `‖f(y) - f(x)‖_{L_{p/θ,q}}` over `‖y - x‖_{L_{p,qθ}}^θ`.
pub fn weak_lp_check(x: &HermitianOperand, y: &HermitianOperand, p: f64, q: SchattenIndex, theta: f64, signed: bool) -> Result<RatioSample> {
    let w = x.trace_weight();
    let fd = difference_of_powers(x, y, theta, signed)?;
    let d = y.entries() - x.entries();
    let q_theta = match q {
        SchattenIndex::Finite(v) => SchattenIndex::Finite(v * theta),
        SchattenIndex::Infinity => SchattenIndex::Infinity,
    };
    let num = lorentz_norm(&rearrangement_weighted(&fd, w)?, p / theta, q)?;
    let den = lorentz_norm(&rearrangement_weighted(&d, w)?, p, q_theta)?.powf(theta);
    Ok(ratio_sample(num, den, x, y, SchattenIndex::new(p)?, theta, signed))
}

/// Embeds a profile as a diagonal matrix.
pub fn profile_matrix(mu: &RearrangementProfile) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(mu.values.len(), mu.values.iter().map(|&v| Complex64::new(v, 0.0))))
}
