//! Spectral functional calculus and Schatten quasi-norms on finite matrices.
//!
//! A [`HermitianOperand`] is the finite model of a selfadjoint element of a
//! tracial algebra: it carries its eigenvalues, an orthonormal eigenbasis and
//! the grouping of eigenvalues into spectral projections. The trace is
//! `τ = trace_weight · Tr`.

use alloc::vec::Vec;
use core::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
// Float supplies libm-backed math without std; the lint cannot see that use.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Error, Result};

/// Dense complex matrix used throughout the crate.
pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues closer than this fraction of the spectral radius share a projection.
pub const GROUPING_RELATIVE_GAP: f64 = 1e-8;

const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Schatten exponent `p ∈ (0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchattenIndex {
    Finite(f64),
    Infinity,
}

impl SchattenIndex {
    /// Accepts any `p > 0`; `f64::INFINITY` maps to [`SchattenIndex::Infinity`].
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p <= 0.0 {
            return Err(invalid("p", "Schatten exponent must be positive"));
        }
        Ok(if p.is_infinite() { SchattenIndex::Infinity } else { SchattenIndex::Finite(p) })
    }

    pub fn value(self) -> f64 {
        match self {
            SchattenIndex::Finite(p) => p,
            SchattenIndex::Infinity => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, SchattenIndex::Finite(_))
    }

    /// True for the quasi-normed range `p < 1`.
    pub fn is_quasi(self) -> bool {
        matches!(self, SchattenIndex::Finite(p) if p < 1.0)
    }

    /// Constant `C` in `‖a+b‖ ≤ C(‖a‖+‖b‖)`: `2^{1/p-1}` below one, else 1.
    pub fn triangle_constant(self) -> f64 {
        match self {
            SchattenIndex::Finite(p) if p < 1.0 => (2.0f64).powf(1.0 / p - 1.0),
            _ => 1.0,
        }
    }

    /// The exponent `p/θ`.
    pub fn divided_by(self, theta: f64) -> Self {
        match self {
            SchattenIndex::Finite(p) => SchattenIndex::Finite(p / theta),
            SchattenIndex::Infinity => SchattenIndex::Infinity,
        }
    }
}

/// `t ↦ |t|^θ` or `t ↦ sgn(t)|t|^θ` with `0 < θ < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedPowerFunction {
    theta: f64,
    signed: bool,
}

impl SignedPowerFunction {
    pub fn new(theta: f64, signed: bool) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(invalid("theta", "exponent must lie strictly inside (0, 1)"));
        }
        Ok(Self { theta, signed })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn signed(&self) -> bool {
        self.signed
    }

    pub fn eval(&self, t: f64) -> f64 {
        let m = t.abs().powf(self.theta);
        if self.signed && t < 0.0 {
            -m
        } else {
            m
        }
    }

    /// `(f(a) - f(b)) / (a - b)`, and 0 when `a == b`.
    ///
    /// Same-sign arguments go through `expm1`/`ln_1p` so that nearly equal
    /// eigenvalues do not lose every significant digit.
    pub fn divided_difference(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        if a != 0.0 && b != 0.0 && (a > 0.0) == (b > 0.0) {
            let (ua, ub) = (a.abs(), b.abs());
            // |a|^θ - |b|^θ = |b|^θ · expm1(θ · ln(|a|/|b|))
            let log_ratio = ((ua - ub) / ub).ln_1p();
            let diff_abs = ub.powf(self.theta) * (self.theta * log_ratio).exp_m1();
            // For negative pairs: unsigned f(a)-f(b) = |a|^θ-|b|^θ and a-b = -(|a|-|b|).
            let diff = if a < 0.0 && self.signed { -diff_abs } else { diff_abs };
            return diff / (a - b);
        }
        (self.eval(a) - self.eval(b)) / (a - b)
    }
}

/// A contiguous run of (descending) eigenvalues sharing one spectral projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenGroup {
    pub value: f64,
    pub start: usize,
    pub len: usize,
}

/// Hermitian matrix with a cached spectral decomposition.
#[derive(Debug, Clone)]
pub struct HermitianOperand {
    entries: CMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
    groups: Vec<EigenGroup>,
    trace_weight: f64,
}

impl HermitianOperand {
    /// Builds an operand from an eigen-pair list; eigenvalues need not be sorted.
    pub fn from_spectrum(eigenvalues: &[f64], eigenvectors: &CMatrix, trace_weight: f64) -> Result<Self> {
        let n = eigenvalues.len();
        if eigenvectors.nrows() != n || eigenvectors.ncols() != n {
            return Err(Error::ShapeMismatch { expected: (n, n), found: eigenvectors.shape() });
        }
        if eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(trace_weight > 0.0 && trace_weight.is_finite()) {
            return Err(invalid("trace_weight", "must be positive and finite"));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eigenvalues[b].partial_cmp(&eigenvalues[a]).unwrap_or(Ordering::Equal));
        let sorted: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(n, n, |r, c| eigenvectors[(r, order[c])]);
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            sorted.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        let entries = &vectors * diag * vectors.adjoint();
        let groups = group_eigenvalues(&sorted);
        Ok(Self { entries, eigenvalues: sorted, eigenvectors: vectors, groups, trace_weight })
    }

    /// Diagonal operand with coordinate eigenvectors.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::from_spectrum(values, &CMatrix::identity(n, n), 1.0)
    }

    pub fn with_trace_weight(mut self, weight: f64) -> Result<Self> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(invalid("trace_weight", "must be positive and finite"));
        }
        self.trace_weight = weight;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn groups(&self) -> &[EigenGroup] {
        &self.groups
    }

    pub fn trace_weight(&self) -> f64 {
        self.trace_weight
    }

    /// Distinct eigenvalues, one per spectral projection, descending.
    pub fn distinct_eigenvalues(&self) -> Vec<f64> {
        self.groups.iter().map(|g| g.value).collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Index of the spectral group that owns eigenvector column `col`.
    pub fn group_of_column(&self) -> Vec<usize> {
        let mut out = alloc::vec![0; self.dim()];
        for (g, grp) in self.groups.iter().enumerate() {
            for slot in &mut out[grp.start..grp.start + grp.len] {
                *slot = g;
            }
        }
        out
    }

    /// Spectral projection onto the `group`-th distinct eigenvalue.
    pub fn projection(&self, group: usize) -> CMatrix {
        let grp = self.groups[group];
        let cols = self.eigenvectors.columns(grp.start, grp.len);
        cols * cols.adjoint()
    }

    /// Spectral projection `1_S(x)` for the eigenvalues accepted by `keep`.
    pub fn projection_where(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        let n = self.dim();
        let mut p = CMatrix::zeros(n, n);
        for (g, grp) in self.groups.iter().enumerate() {
            if keep(grp.value) {
                p += self.projection(g);
            }
        }
        p
    }

    pub fn is_positive(&self, tolerance: f64) -> bool {
        self.eigenvalues.last().is_none_or(|&v| v >= -tolerance)
    }
}

fn group_eigenvalues(sorted_desc: &[f64]) -> Vec<EigenGroup> {
    let radius = sorted_desc.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gap = GROUPING_RELATIVE_GAP * radius;
    let mut groups: Vec<EigenGroup> = Vec::new();
    let mut sum = 0.0;
    for (i, &v) in sorted_desc.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if sorted_desc[i - 1] - v <= gap => {
                g.len += 1;
                sum += v;
                g.value = sum / g.len as f64;
            }
            _ => {
                sum = v;
                groups.push(EigenGroup { value: v, start: i, len: 1 });
            }
        }
    }
    groups
}

fn check_finite(a: &CMatrix) -> Result<()> {
    if a.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Largest `|a_ij - conj(a_ji)|`.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Diagonalizes a Hermitian matrix.
pub fn spectral_decompose(matrix: &CMatrix) -> Result<HermitianOperand> {
    let (r, c) = matrix.shape();
    if r != c {
        return Err(Error::NotSquare { rows: r, cols: c });
    }
    check_finite(matrix)?;
    let scale = matrix.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let asymmetry = hermitian_defect(matrix);
    if asymmetry > HERMITIAN_TOLERANCE * scale {
        return Err(Error::NotHermitian { asymmetry });
    }
    if r == 0 {
        return HermitianOperand::from_spectrum(&[], &CMatrix::zeros(0, 0), 1.0);
    }
    let sym = (matrix + matrix.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    HermitianOperand::from_spectrum(&values, &eig.eigenvectors, 1.0)
}

/// Wraps a real symmetric matrix given row-major.
pub fn hermitian_from_real(n: usize, row_major: &[f64]) -> Result<HermitianOperand> {
    if row_major.len() != n * n {
        return Err(Error::ShapeMismatch { expected: (n, n), found: (row_major.len(), 1) });
    }
    spectral_decompose(&CMatrix::from_fn(n, n, |i, j| Complex64::new(row_major[i * n + j], 0.0)))
}

/// `f(x) = U diag(f(x_i)) U*`; the trace weight is inherited.
pub fn apply_calculus(x: &HermitianOperand, f: &SignedPowerFunction) -> HermitianOperand {
    let values: Vec<f64> = x.eigenvalues().iter().map(|&v| f.eval(v)).collect();
    HermitianOperand::from_spectrum(&values, x.eigenvectors(), x.trace_weight())
        .expect("eigenvectors of a valid operand form a square basis")
}

/// Singular values sorted descending; values below the numerical rank
/// threshold `max(m,n)·ε·s_max` are reported as exact zeros.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(Ordering::Equal));
    let cutoff = s[0] * f64::EPSILON * a.nrows().max(a.ncols()) as f64;
    for v in &mut s {
        if *v <= cutoff {
            *v = 0.0;
        }
    }
    s
}

/// `(weight · Σ s_i^p)^{1/p}` over descending singular values `s`.
pub fn schatten_from_singular_values(s: &[f64], p: SchattenIndex, weight: f64) -> f64 {
    match p {
        SchattenIndex::Infinity => s.iter().fold(0.0, |m, &v| m.max(v)),
        SchattenIndex::Finite(p) => {
            let sum: f64 = s.iter().filter(|&&v| v > 0.0).map(|&v| v.powf(p)).sum();
            (weight * sum).powf(1.0 / p)
        }
    }
}

/// Schatten quasi-norm `‖a‖_p = (τ(|a|^p))^{1/p}` with `τ = weight·Tr`.
pub fn schatten_norm(a: &CMatrix, p: SchattenIndex, trace_weight: f64) -> Result<f64> {
    check_finite(a)?;
    if !(trace_weight > 0.0 && trace_weight.is_finite()) {
        return Err(invalid("trace_weight", "must be positive and finite"));
    }
    Ok(schatten_from_singular_values(&singular_values(a), p, trace_weight))
}

/// `Σ‖a_k‖_p^p − ‖Σ a_k‖_p^p`, nonnegative for `p ≤ 1` up to rounding.
pub fn p_triangle_defect(parts: &[CMatrix], p: SchattenIndex) -> Result<f64> {
    let pv = match p {
        SchattenIndex::Finite(v) if v <= 1.0 => v,
        _ => return Err(invalid("p", "the p-triangle inequality needs p ≤ 1")),
    };
    let first = parts.first().ok_or(Error::Empty("parts"))?;
    let shape = first.shape();
    let mut total = CMatrix::zeros(shape.0, shape.1);
    let mut separate = 0.0;
    for part in parts {
        if part.shape() != shape {
            return Err(Error::ShapeMismatch { expected: shape, found: part.shape() });
        }
        separate += schatten_norm(part, p, 1.0)?.powf(pv);
        total += part;
    }
    Ok(separate - schatten_norm(&total, p, 1.0)?.powf(pv))
}

/// Operator norm of a matrix.
pub fn operator_norm(a: &CMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{gaussian_hermitian, random_unitary, rng_for};
    use alloc::vec;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn diagonal_input_is_already_decomposed() {
        let x = hermitian_from_real(3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        assert_eq!(x.eigenvalues(), &[3.0, 2.0, 1.0]);
        let p0 = x.projection(0);
        assert!((p0[(0, 0)] - c(1.0)).norm() < 1e-14);
        assert!(p0[(1, 1)].norm() < 1e-14);
        let p1 = x.projection(1);
        assert!((p1[(2, 2)] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn swap_matrix_has_eigenvalues_plus_minus_one() {
        let x = hermitian_from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!((x.eigenvalues()[0] - 1.0).abs() < 1e-14);
        assert!((x.eigenvalues()[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_and_non_finite() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(0.0), c(1.0)]);
        match spectral_decompose(&a) {
            Err(Error::NotHermitian { asymmetry }) => assert!((asymmetry - 2.0).abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        let b = CMatrix::from_row_slice(1, 1, &[c(f64::NAN)]);
        assert_eq!(spectral_decompose(&b).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn decomposition_invariants_hold() {
        let mut rng = rng_for(11, 0);
        for n in 1..8 {
            let a = gaussian_hermitian(n, &mut rng);
            let x = spectral_decompose(&a).unwrap();
            let rho = x.spectral_radius();
            assert!((x.entries() - &a).norm() <= 1e-10 * rho.max(1.0));
            let u = x.eigenvectors();
            assert!((u.adjoint() * u - CMatrix::identity(n, n)).norm() < 1e-10);
            assert!(x.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn close_eigenvalues_share_a_projection() {
        let x = HermitianOperand::diagonal(&[1.0, 1.0 + 1e-12, 0.5]).unwrap();
        assert_eq!(x.groups().len(), 2);
        assert_eq!(x.groups()[0].len, 2);
        let y = HermitianOperand::diagonal(&[1.0, 1.0 + 1e-6, 0.5]).unwrap();
        assert_eq!(y.groups().len(), 3);
    }

    #[test]
    fn calculus_on_diagonals() {
        let x = HermitianOperand::diagonal(&[4.0, -1.0]).unwrap();
        let signed = apply_calculus(&x, &SignedPowerFunction::new(0.5, true).unwrap());
        let unsigned = apply_calculus(&x, &SignedPowerFunction::new(0.5, false).unwrap());
        assert!((signed.entries()[(0, 0)] - c(2.0)).norm() < 1e-15);
        assert!((signed.entries()[(1, 1)] - c(-1.0)).norm() < 1e-15);
        assert!((unsigned.entries()[(0, 0)] - c(2.0)).norm() < 1e-15);
        assert!((unsigned.entries()[(1, 1)] - c(1.0)).norm() < 1e-15);
        let zero = HermitianOperand::diagonal(&[0.0, 0.0]).unwrap();
        for signed in [true, false] {
            let f = SignedPowerFunction::new(0.3, signed).unwrap();
            assert_eq!(apply_calculus(&zero, &f).entries().norm(), 0.0);
        }
    }

    #[test]
    fn calculus_commutes_with_argument() {
        let mut rng = rng_for(5, 1);
        let x = spectral_decompose(&gaussian_hermitian(6, &mut rng)).unwrap();
        let fx = apply_calculus(&x, &SignedPowerFunction::new(0.4, true).unwrap());
        let comm = x.entries() * fx.entries() - fx.entries() * x.entries();
        assert!(comm.norm() < 1e-10 * x.spectral_radius().max(1.0));
        assert!(hermitian_defect(fx.entries()) < 1e-12);
    }

    #[test]
    fn schatten_examples() {
        let id = CMatrix::identity(3, 3);
        assert!((schatten_norm(&id, SchattenIndex::Finite(2.0), 1.0).unwrap() - 3f64.sqrt()).abs() < 1e-14);
        let ones = CMatrix::from_element(2, 2, c(1.0));
        assert!((schatten_norm(&ones, SchattenIndex::Finite(0.5), 1.0).unwrap() - 2.0).abs() < 1e-13);
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(3.0), c(4.0)]));
        assert!((schatten_norm(&d, SchattenIndex::Finite(1.0), 1.0).unwrap() - 7.0).abs() < 1e-13);
        assert!((schatten_norm(&d, SchattenIndex::Infinity, 5.0).unwrap() - 4.0).abs() < 1e-13);
        assert!((schatten_norm(&d, SchattenIndex::Finite(1.0), 0.5).unwrap() - 3.5).abs() < 1e-13);
    }

    #[test]
    fn schatten_index_validation() {
        assert!(SchattenIndex::new(0.0).is_err());
        assert!(SchattenIndex::new(f64::NAN).is_err());
        assert_eq!(SchattenIndex::new(f64::INFINITY).unwrap(), SchattenIndex::Infinity);
        assert!((SchattenIndex::Finite(0.5).triangle_constant() - 2.0).abs() < 1e-15);
        assert_eq!(SchattenIndex::Finite(2.0).triangle_constant(), 1.0);
    }

    #[test]
    fn p_triangle_examples() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(0.0)]));
        let b = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0), c(1.0)]));
        let p = SchattenIndex::Finite(0.5);
        assert_eq!(p_triangle_defect(core::slice::from_ref(&a), p).unwrap(), 0.0);
        assert!(p_triangle_defect(&[a.clone(), b], p).unwrap().abs() < 1e-14);
        assert!(matches!(
            p_triangle_defect(&[a, CMatrix::zeros(3, 3)], p),
            Err(Error::ShapeMismatch { .. })
        ));
        let mut rng = rng_for(3, 0);
        let x = gaussian_hermitian(3, &mut rng);
        let y = gaussian_hermitian(3, &mut rng);
        assert!(p_triangle_defect(&[x, y], SchattenIndex::Finite(0.7)).unwrap() >= -1e-9);
    }

    #[test]
    fn unitary_invariance_of_quasi_norms() {
        let mut rng = rng_for(21, 0);
        for _ in 0..20 {
            let a = gaussian_hermitian(4, &mut rng) + CMatrix::identity(4, 4).scale(0.1);
            let u = random_unitary(4, &mut rng);
            let v = random_unitary(4, &mut rng);
            let b = &u * &a * &v;
            for p in [0.3, 0.5, 1.0, 2.0, f64::INFINITY] {
                let p = SchattenIndex::new(p).unwrap();
                let na = schatten_norm(&a, p, 1.0).unwrap();
                let nb = schatten_norm(&b, p, 1.0).unwrap();
                assert!((na - nb).abs() <= 1e-10 * na.max(1.0));
            }
        }
    }

    #[test]
    fn stable_divided_difference_near_coincidence() {
        let f = SignedPowerFunction::new(0.25, false).unwrap();
        let a = 1e-3;
        let b = a * (1.0 + 1e-11);
        let expected = 0.25 * a.powf(-0.75);
        assert!((f.divided_difference(a, b) - expected).abs() < 1e-6 * expected);
        let g = SignedPowerFunction::new(0.5, true).unwrap();
        let d = g.divided_difference(-4.0, -1.0);
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
    }
}
