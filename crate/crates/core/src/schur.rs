//! Schur multipliers in spectral coordinates.
//!
//! For Hermitian `x = Σ x_i p_i` and `y = Σ y_j q_j`, a symbol `M = (m_ij)`
//! acts by `T_M(z) = Σ m_ij p_i z q_j`. With `m_ij` the divided differences
//! of `f`, `T_M(x - y) = f(x) - f(y)` exactly.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::factorizer::dyadic::{level_of, CaseOneCell};
use crate::matcore::{schatten_norm, CMatrix, HermitianOperand, SchattenIndex, SignedPowerFunction};
use crate::quadrature::{gauss_legendre, integrate};
use crate::random::{complex_normal, gaussian_matrix, gaussian_vector, rng_for};

/// Refinement steps applied to every random witness.
pub const REFINEMENT_STEPS: usize = 50;

/// What a [`MultiplierNormEstimate`] actually covers.
pub const LOWER_BOUND_SCOPE: &str =
    "lower bound witnessed on matrix algebras M_n only; upper bound certified for the full pcb norm";

/// Multiplier symbol indexed by the spectra of two operands.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolMatrix {
    rows: Vec<f64>,
    cols: Vec<f64>,
    values: DMatrix<f64>,
}

impl SymbolMatrix {
    pub fn new(rows: Vec<f64>, cols: Vec<f64>, values: DMatrix<f64>) -> Result<Self> {
        if values.shape() != (rows.len(), cols.len()) {
            return Err(Error::ShapeMismatch { expected: (rows.len(), cols.len()), found: values.shape() });
        }
        if values.iter().chain(&rows).chain(&cols).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_fn(rows: Vec<f64>, cols: Vec<f64>, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = DMatrix::from_fn(rows.len(), cols.len(), |i, j| f(rows[i], cols[j]));
        Self::new(rows, cols, values)
    }

    /// Symbol with placeholder spectra `0, 1, 2, …`, for pure Hadamard use.
    pub fn from_values(values: DMatrix<f64>) -> Result<Self> {
        let rows = (0..values.nrows()).map(|i| i as f64).collect();
        let cols = (0..values.ncols()).map(|j| j as f64).collect();
        Self::new(rows, cols, values)
    }

    pub fn rows(&self) -> &[f64] {
        &self.rows
    }

    pub fn cols(&self) -> &[f64] {
        &self.cols
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values.shape()
    }

    pub fn transpose(&self) -> Self {
        Self { rows: self.cols.clone(), cols: self.rows.clone(), values: self.values.transpose() }
    }

    pub fn to_complex(&self) -> CMatrix {
        self.values.map(|v| Complex64::new(v, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// `m_ij = (f(x_i) - f(y_j)) / (x_i - y_j)`, with 0 on coincidences.
pub fn divided_difference_symbol(spec_x: &[f64], spec_y: &[f64], f: &SignedPowerFunction) -> SymbolMatrix {
    SymbolMatrix::from_fn(spec_x.to_vec(), spec_y.to_vec(), |a, b| f.divided_difference(a, b))
        .expect("divided differences of finite spectra are finite")
}

/// `∫_0^1 θ (t x + (1 - t) y)^{θ-1} dt` by Gauss–Legendre quadrature.
pub fn divided_difference_integral(x: f64, y: f64, theta: f64, quadrature_points: usize) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(invalid("x, y", "the integrand is singular unless both endpoints are positive"));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(invalid("theta", "exponent must lie strictly inside (0, 1)"));
    }
    if quadrature_points == 0 {
        return Err(invalid("quadrature_points", "need at least one node"));
    }
    let rule = gauss_legendre(quadrature_points);
    Ok(integrate(|t| theta * (t * x + (1.0 - t) * y).powf(theta - 1.0), 0.0, 1.0, &rule))
}

fn check_spectrum(symbol_side: &[f64], op: &HermitianOperand, axis: &'static str) -> Result<()> {
    let groups = op.groups();
    let tol = 1e-10 * (1.0 + op.spectral_radius());
    if groups.len() != symbol_side.len() || groups.iter().zip(symbol_side).any(|(g, &s)| (g.value - s).abs() > tol) {
        return Err(Error::SpectrumMismatch { axis });
    }
    Ok(())
}

/// Entry `(r, c)` of `z` in eigen-coordinates is scaled by `weight(group(r), group(c))`.
fn apply_in_eigenbasis(
    x: &HermitianOperand,
    y: &HermitianOperand,
    z: &CMatrix,
    weight: impl Fn(usize, usize) -> Complex64,
) -> CMatrix {
    let ux = x.eigenvectors();
    let uy = y.eigenvectors();
    let gx = x.group_of_column();
    let gy = y.group_of_column();
    let mut w = ux.adjoint() * z * uy;
    for c in 0..w.ncols() {
        for r in 0..w.nrows() {
            w[(r, c)] *= weight(gx[r], gy[c]);
        }
    }
    ux * w * uy.adjoint()
}

/// `T_M(z) = Σ m_ij p_i z q_j`.
pub fn schur_apply(m: &SymbolMatrix, x: &HermitianOperand, y: &HermitianOperand, z: &CMatrix) -> Result<CMatrix> {
    check_spectrum(&m.rows, x, "rows")?;
    check_spectrum(&m.cols, y, "cols")?;
    if z.shape() != (x.dim(), y.dim()) {
        return Err(Error::ShapeMismatch { expected: (x.dim(), y.dim()), found: z.shape() });
    }
    Ok(apply_in_eigenbasis(x, y, z, |i, j| Complex64::new(m.values[(i, j)], 0.0)))
}

/// Divided-difference symbol on the grouped spectra of `x` and `y`.
pub fn operand_symbol(x: &HermitianOperand, y: &HermitianOperand, f: &SignedPowerFunction) -> SymbolMatrix {
    divided_difference_symbol(&x.distinct_eigenvalues(), &y.distinct_eigenvalues(), f)
}

/// Sub-symbol on the given row and column index sets.
pub fn restrict_symbol(m: &SymbolMatrix, row_subset: &[usize], col_subset: &[usize]) -> Result<SymbolMatrix> {
    if row_subset.is_empty() {
        return Err(Error::Empty("row_subset"));
    }
    if col_subset.is_empty() {
        return Err(Error::Empty("col_subset"));
    }
    let (nr, nc) = m.shape();
    if row_subset.iter().any(|&i| i >= nr) || col_subset.iter().any(|&j| j >= nc) {
        return Err(invalid("subset", "index out of range"));
    }
    let values = DMatrix::from_fn(row_subset.len(), col_subset.len(), |i, j| m.values[(row_subset[i], col_subset[j])]);
    SymbolMatrix::new(
        row_subset.iter().map(|&i| m.rows[i]).collect(),
        col_subset.iter().map(|&j| m.cols[j]).collect(),
        values,
    )
}

/// Zero-pads a witness for a restricted symbol back to the parent's shape.
pub fn embed_witness(witness: &CMatrix, row_subset: &[usize], col_subset: &[usize], shape: (usize, usize)) -> CMatrix {
    let mut out = CMatrix::zeros(shape.0, shape.1);
    for (i, &r) in row_subset.iter().enumerate() {
        for (j, &c) in col_subset.iter().enumerate() {
            out[(r, c)] = witness[(i, j)];
        }
    }
    out
}

/// `(Σ |α_k|^p)^{1/p} · max_k f_k g_k`, the rank-one sum bound.
pub fn rank_one_sum_bound(alphas: &[f64], f_sups: &[f64], g_sups: &[f64], p: SchattenIndex) -> Result<f64> {
    let pv = match p {
        SchattenIndex::Finite(v) if v <= 1.0 => v,
        _ => return Err(invalid("p", "rank-one sums certify only p ≤ 1")),
    };
    if f_sups.len() != alphas.len() || g_sups.len() != alphas.len() {
        return Err(Error::ShapeMismatch { expected: (alphas.len(), 1), found: (f_sups.len(), g_sups.len()) });
    }
    let sum: f64 = alphas.iter().map(|a| a.abs().powf(pv)).sum();
    let sup = f_sups.iter().zip(g_sups).fold(0.0f64, |m, (f, g)| m.max(f * g));
    Ok(sum.powf(1.0 / pv) * sup)
}

/// Witnessed lower bound for a Hadamard multiplier, with an optional certified upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierNormEstimate {
    pub lower: f64,
    pub upper: Option<f64>,
    pub p: SchattenIndex,
    pub witness: CMatrix,
    pub trials: usize,
    pub seed: u64,
    pub scope: &'static str,
}

impl MultiplierNormEstimate {
    pub fn with_upper(mut self, upper: f64) -> Self {
        self.upper = Some(self.upper.map_or(upper, |u| u.min(upper)));
        self
    }

    /// `lower ≤ upper + 1e-9` whenever an upper bound is known.
    pub fn is_sandwiched(&self) -> bool {
        self.upper.is_none_or(|u| self.lower <= u + 1e-9)
    }
}

/// `‖m ∘ a‖_p / ‖a‖_p`, or `None` for a zero test matrix.
pub fn hadamard_ratio(m: &CMatrix, a: &CMatrix, p: SchattenIndex) -> Option<f64> {
    let den = schatten_norm(a, p, 1.0).ok()?;
    if !(den > 1e-300) {
        return None;
    }
    let num = schatten_norm(&m.component_mul(a), p, 1.0).ok()?;
    Some(num / den)
}

fn refine(m: &CMatrix, start: CMatrix, p: SchattenIndex, rng: &mut impl Rng) -> (f64, CMatrix) {
    let (nr, nc) = m.shape();
    let mut best = start;
    let mut best_ratio = hadamard_ratio(m, &best, p).unwrap_or(0.0);
    let scale = best.iter().fold(0.0f64, |s, z| s.max(z.norm())).max(1e-300);
    let mut step = 0.5 * scale;
    for _ in 0..REFINEMENT_STEPS {
        let i = rng.gen_range(0..nr);
        let j = rng.gen_range(0..nc);
        let delta = complex_normal(rng) * step;
        let mut cand = best.clone();
        cand[(i, j)] += delta;
        match hadamard_ratio(m, &cand, p) {
            Some(r) if r > best_ratio => {
                best_ratio = r;
                best = cand;
            }
            _ => step *= 0.5,
        }
    }
    (best_ratio, best)
}

/// Lower bound on the `S^p` norm of `a ↦ m ∘ a` for a complex symbol.
///
/// Single-entry witnesses are exact (`|m_ij|`). Trial `t` draws a Gaussian
/// (even `t`) or rank-one `a b*` (odd `t`) start from `seed ^ t` and refines it.
/// `extra` witnesses are evaluated as given. The result is a maximum over a set
/// that only grows with `trials`.
pub fn hadamard_norm_lower(m: &CMatrix, p: SchattenIndex, trials: usize, seed: u64, extra: &[CMatrix]) -> Result<MultiplierNormEstimate> {
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    let (nr, nc) = m.shape();
    if nr == 0 || nc == 0 {
        return Err(Error::Empty("symbol"));
    }
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite);
    }
    let mut lower = 0.0;
    let mut arg = (0, 0);
    for j in 0..nc {
        for i in 0..nr {
            let v = m[(i, j)].norm();
            if v > lower {
                lower = v;
                arg = (i, j);
            }
        }
    }
    let mut witness = CMatrix::zeros(nr, nc);
    witness[arg] = Complex64::new(1.0, 0.0);

    for w in extra {
        if w.shape() != (nr, nc) {
            return Err(Error::ShapeMismatch { expected: (nr, nc), found: w.shape() });
        }
        if let Some(r) = hadamard_ratio(m, w, p) {
            if r > lower {
                lower = r;
                witness = w.clone();
            }
        }
    }
    for t in 0..trials {
        let mut rng = rng_for(seed, t as u64);
        let start = if t % 2 == 0 {
            gaussian_matrix(nr, nc, &mut rng)
        } else {
            let a = gaussian_vector(nr, &mut rng);
            let b = gaussian_vector(nc, &mut rng);
            &a * b.adjoint()
        };
        let (r, w) = refine(m, start, p, &mut rng);
        if r > lower {
            lower = r;
            witness = w;
        }
    }
    let upper = (nr == 1 && nc == 1).then(|| m[(0, 0)].norm());
    Ok(MultiplierNormEstimate { lower, upper, p, witness, trials, seed, scope: LOWER_BOUND_SCOPE })
}

/// [`hadamard_norm_lower`] for a real symbol.
pub fn multiplier_norm_lower(m: &SymbolMatrix, p: SchattenIndex, trials: usize, seed: u64) -> Result<MultiplierNormEstimate> {
    hadamard_norm_lower(&m.to_complex(), p, trials, seed, &[])
}

/// One term `T^j_k(z)` of the dyadic decomposition of `P_+ (|x|^θ - |y|^θ) Q_+`.
#[derive(Debug, Clone)]
pub struct CaseOneTerm {
    pub k: i32,
    pub cell: CaseOneCell,
    /// Block of `x - y` seen by the term (`r_k (x-y) v_k` or `u_k (x-y) s_k`).
    pub input: CMatrix,
    /// `T^j_k` applied to that block.
    pub output: CMatrix,
    /// Largest divided difference in the block.
    pub symbol_sup: f64,
}

/// Splits `P_+(f(x) - f(y))Q_+` by the level of `max(x_i, y_j)` over the cells
/// `I_k × J_{k-1}` and `J_k × I_k`, `k ≥ -1`, for the unsigned power `f`.
pub fn case_one_terms(x: &HermitianOperand, y: &HermitianOperand, theta: f64) -> Result<Vec<CaseOneTerm>> {
    if x.dim() != y.dim() {
        return Err(Error::ShapeMismatch { expected: (x.dim(), x.dim()), found: (y.dim(), y.dim()) });
    }
    let f = SignedPowerFunction::new(theta, false)?;
    let xs = x.distinct_eigenvalues();
    let ys = y.distinct_eigenvalues();
    let mut keys: Vec<(i32, CaseOneCell)> = Vec::new();
    let cell_of = |i: usize, j: usize| -> Option<(i32, CaseOneCell)> {
        let (a, b) = (xs[i], ys[j]);
        if a <= 0.0 || b <= 0.0 {
            return None;
        }
        let k = level_of(a.max(b));
        Some((k, if level_of(a) == k { CaseOneCell::XDominant } else { CaseOneCell::YDominant }))
    };
    for i in 0..xs.len() {
        for j in 0..ys.len() {
            if let Some(key) = cell_of(i, j) {
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
    }
    keys.sort_by_key(|&(k, c)| (k, c as u8));
    let diff = x.entries() - y.entries();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Ok(keys
        .into_iter()
        .map(|key| {
            let mask = |i: usize, j: usize| cell_of(i, j) == Some(key);
            let input = apply_in_eigenbasis(x, y, &diff, |i, j| if mask(i, j) { one } else { zero });
            let output = apply_in_eigenbasis(x, y, &diff, |i, j| {
                if mask(i, j) {
                    Complex64::new(f.divided_difference(xs[i], ys[j]), 0.0)
                } else {
                    zero
                }
            });
            let mut symbol_sup = 0.0f64;
            for i in 0..xs.len() {
                for j in 0..ys.len() {
                    if mask(i, j) {
                        symbol_sup = symbol_sup.max(f.divided_difference(xs[i], ys[j]).abs());
                    }
                }
            }
            CaseOneTerm { k: key.0, cell: key.1, input, output, symbol_sup }
        })
        .collect())
}

/// `1_{(0,∞)}(x) (|x|^θ - |y|^θ) 1_{(0,∞)}(y)`, computed directly.
pub fn positive_corner(x: &HermitianOperand, y: &HermitianOperand, theta: f64) -> Result<CMatrix> {
    let f = SignedPowerFunction::new(theta, false)?;
    let fx = crate::matcore::apply_calculus(x, &f);
    let fy = crate::matcore::apply_calculus(y, &f);
    let px = x.projection_where(|v| v > 0.0);
    let qy = y.projection_where(|v| v > 0.0);
    Ok(px * (fx.entries() - fy.entries()) * qy)
}
