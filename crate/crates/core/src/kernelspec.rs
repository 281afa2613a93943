//! Spectrum of the integral operator with kernel `e^{-|x-y|}` on `L_2[0,1]`.
//!
//! Eigenvalues are `λ_k = 2/(1 + α_k²) = 2cos²θ_k` where `θ_k ∈ (0, π/2)`
//! solves `tan t = kπ - 2t` and `α_k = tan θ_k`. Since `λ_k ~ 2/(kπ)²`, the
//! sum of `λ_k^p` diverges exactly when `p ≤ 1/2`.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::quadrature::simpson_weights;

/// Above this index eigenvalues come from one Newton step instead of a root solve.
pub const EXACT_ROOT_LIMIT: u64 = 1000;

/// Bound on the relative error of the asymptotic `λ_k` for `k > EXACT_ROOT_LIMIT`.
/// The Newton error in `α` is at most `10/α³`, so `|δλ/λ| ≤ 20/α⁴ < 3e-12`.
pub const ASYMPTOTIC_RELATIVE_ERROR: f64 = 3e-12;

/// `sin t + (2t - kπ) cos t`: the root equation multiplied by `cos t`, finite up to `π/2`.
pub fn root_function(k: u64, t: f64) -> f64 {
    t.sin() + (2.0 * t - k as f64 * PI) * t.cos()
}

/// Root `θ_k` of `tan t + 2t = kπ` in `(0, π/2)` by bisection.
///
/// `tol` bounds `|root_function(k, θ_k)|`.
pub fn solve_theta(k: u64, tol: f64) -> Result<f64> {
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let (mut lo, mut hi) = (0.0, FRAC_PI_2);
    assert!(root_function(k, lo) < 0.0 && root_function(k, hi) > 0.0, "bracket must change sign");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if root_function(k, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (glo, ghi) = (root_function(k, lo).abs(), root_function(k, hi).abs());
    let (t, residual) = if glo <= ghi { (lo, glo) } else { (hi, ghi) };
    if residual > tol {
        return Err(Error::ToleranceUnreachable { k, tol, residual });
    }
    Ok(t)
}

/// Root tolerance used by [`analytic_eigenvalues`].
pub const ROOT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpectrum {
    pub k_max: u64,
    pub thetas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub lambdas: Vec<f64>,
}

impl KernelSpectrum {
    /// `λ_k` for `1 ≤ k ≤ k_max`.
    pub fn lambda(&self, k: u64) -> Option<f64> {
        self.lambdas.get(k.checked_sub(1)? as usize).copied()
    }
}

/// Exact roots for `k = 1..=k_max`.
pub fn analytic_eigenvalues(k_max: u64) -> Result<KernelSpectrum> {
    if k_max == 0 {
        return Err(invalid("k_max", "must be at least 1"));
    }
    let mut thetas = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        thetas.push(solve_theta(k, ROOT_TOLERANCE)?);
    }
    let alphas = thetas.iter().map(|t| t.tan()).collect();
    let lambdas = thetas.iter().map(|t| 2.0 * t.cos().powi(2)).collect();
    Ok(KernelSpectrum { k_max, thetas, alphas, lambdas })
}

/// One Newton step for `α + 2 arctan α = kπ` from `α = kπ`.
pub fn asymptotic_alpha(k: u64) -> f64 {
    let a0 = k as f64 * PI;
    a0 - 2.0 * a0.atan() / (1.0 + 2.0 / (1.0 + a0 * a0))
}

/// `λ_k`, exact for `k ≤ EXACT_ROOT_LIMIT` and asymptotic beyond.
pub fn eigenvalue(k: u64) -> Result<f64> {
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    if k <= EXACT_ROOT_LIMIT {
        Ok(2.0 * solve_theta(k, ROOT_TOLERANCE)?.cos().powi(2))
    } else {
        let a = asymptotic_alpha(k);
        Ok(2.0 / (1.0 + a * a))
    }
}

/// `Σ_{k ≤ K} λ_k^p` for each `K` in `k_list`.
pub fn schatten_partial_sums(p: f64, k_list: &[u64]) -> Result<Vec<f64>> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(invalid("p", "must be positive and finite"));
    }
    let k_top = k_list.iter().copied().max().unwrap_or(0);
    let mut wanted: Vec<(u64, usize)> = k_list.iter().copied().zip(0..).collect();
    wanted.sort_unstable();
    let mut out = alloc::vec![0.0; k_list.len()];
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let mut next = 0;
    while next < wanted.len() && wanted[next].0 == 0 {
        next += 1;
    }
    for k in 1..=k_top {
        // Neumaier summation: ten million terms of decreasing size.
        let term = eigenvalue(k)?.powf(p);
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        while next < wanted.len() && wanted[next].0 == k {
            out[wanted[next].1] = sum + comp;
            next += 1;
        }
    }
    Ok(out)
}

/// Least-squares fit `S ≈ c ln K + b`; returns `(c, b, max |fit - S| / S)`.
pub fn fit_log_growth(ks: &[u64], sums: &[f64]) -> Result<(f64, f64, f64)> {
    if ks.len() != sums.len() || ks.len() < 2 {
        return Err(invalid("k_list", "need at least two matching points"));
    }
    let n = ks.len() as f64;
    let xs: Vec<f64> = ks.iter().map(|&k| (k as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = sums.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(sums).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(invalid("k_list", "needs two distinct values"));
    }
    let c = sxy / sxx;
    let b = my - c * mx;
    let resid = xs.iter().zip(sums).map(|(x, y)| ((c * x + b) - y).abs() / y.abs()).fold(0.0, f64::max);
    Ok((c, b, resid))
}

/// `f_λ(x) = e^{iαx} - (1-iα)/(1+iα) e^{-iαx}`.
///
/// The coefficient kills the `e^{-x}` boundary term of `T e^{±iαx}`; its
/// conjugate `(1+iα)/(1-iα)` does not give an eigenvector.
pub fn eigenfunction(alpha: f64, x: f64) -> Complex64 {
    eigenfunction_with(Complex64::new(1.0, -alpha) / Complex64::new(1.0, alpha), alpha, x)
}

/// `e^{iαx} - c e^{-iαx}`.
pub fn eigenfunction_with(c: Complex64, alpha: f64, x: f64) -> Complex64 {
    Complex64::from_polar(1.0, alpha * x) - c * Complex64::from_polar(1.0, -alpha * x)
}

/// Simpson integral of `e^{-|x-y|} f(y)` over `[a, b]` with `panels` panels.
fn kernel_piece(f: &impl Fn(f64) -> Complex64, x: f64, a: f64, b: f64, panels: usize) -> Complex64 {
    if b <= a {
        return Complex64::new(0.0, 0.0);
    }
    let (nodes, weights) = simpson_weights(a, b, panels);
    nodes.iter().zip(&weights).map(|(&y, &w)| f(y) * (w * (-(x - y).abs()).exp())).sum()
}

/// `‖T f - λ f‖_2 / ‖f‖_2` with Simpson inner integrals split at `y = x`
/// and a trapezoid outer norm on `points + 1` nodes.
pub fn residual_of(f: impl Fn(f64) -> Complex64, lambda: f64, points: usize) -> f64 {
    let m = points;
    let h = 1.0 / m as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..=m {
        let x = i as f64 * h;
        let w = if i == 0 || i == m { 0.5 * h } else { h };
        // Split at the kink so each piece has a smooth integrand.
        let tf = kernel_piece(&f, x, 0.0, x, i.max(2)) + kernel_piece(&f, x, x, 1.0, (m - i).max(2));
        let fx = f(x);
        num += w * (tf - fx * lambda).norm_sqr();
        den += w * fx.norm_sqr();
    }
    (num / den).sqrt()
}

/// `‖T f_λ - λ f_λ‖_2 / ‖f_λ‖_2` for the `k`-th eigenpair.
pub fn eigenfunction_residual(k: u64, quadrature_points: usize) -> Result<f64> {
    eigenfunction_residual_with(k, quadrature_points, 1.0)
}

/// As [`eigenfunction_residual`] with `λ_k` multiplied by `lambda_scale`.
pub fn eigenfunction_residual_with(k: u64, quadrature_points: usize, lambda_scale: f64) -> Result<f64> {
    if quadrature_points < 256 {
        return Err(invalid("quadrature_points", "need at least 256"));
    }
    let theta = solve_theta(k, ROOT_TOLERANCE)?;
    let alpha = theta.tan();
    Ok(residual_of(|x| eigenfunction(alpha, x), 2.0 * theta.cos().powi(2) * lambda_scale, quadrature_points))
}

/// `‖f_λ‖_∞ / ‖f_λ‖_2` on a uniform grid of `points + 1` nodes.
pub fn normalized_sup(k: u64, points: usize) -> Result<f64> {
    if points < 2 {
        return Err(invalid("points", "need at least two"));
    }
    let alpha = solve_theta(k, ROOT_TOLERANCE)?.tan();
    let h = 1.0 / points as f64;
    let (mut sup, mut l2) = (0.0f64, 0.0);
    for i in 0..=points {
        let v = eigenfunction(alpha, i as f64 * h).norm();
        sup = sup.max(v);
        l2 += if i == 0 || i == points { 0.5 * h } else { h } * v * v;
    }
    Ok(sup / l2.sqrt())
}

/// Eigenvalues of `W^{1/2} K W^{1/2}` for the trapezoid rule on `n` nodes, descending.
pub fn nystrom_spectrum(n: usize) -> Result<Vec<f64>> {
    if n < 64 {
        return Err(invalid("n", "need at least 64 nodes"));
    }
    let h = 1.0 / (n - 1) as f64;
    let sw: Vec<f64> = (0..n).map(|i| if i == 0 || i == n - 1 { (0.5 * h).sqrt() } else { h.sqrt() }).collect();
    let m = DMatrix::from_fn(n, n, |i, j| sw[i] * sw[j] * (-(i as f64 - j as f64).abs() * h).exp());
    let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    Ok(eig)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_root_is_bracketed() {
        let g = |t: f64| t.tan() + 2.0 * t - PI;
        assert!(g(0.85) < 0.0 && g(0.95) > 0.0);
        let t = solve_theta(1, 1e-12).unwrap();
        assert!((0.85..0.95).contains(&t));
        assert!(g(t).abs() < 1e-12);
        assert!(solve_theta(0, 1e-12).is_err());
        assert!(solve_theta(1, 0.0).is_err());
    }

    #[test]
    fn tangent_grows_like_k_pi() {
        let t = solve_theta(50, 1e-10).unwrap();
        assert!((t.tan() / (50.0 * PI) - 1.0).abs() < 0.1);
    }

    #[test]
    fn eigenvalues_decrease_and_match_the_identity() {
        let s = analytic_eigenvalues(200).unwrap();
        assert!(s.thetas.windows(2).all(|w| w[0] < w[1] && w[1] < FRAC_PI_2));
        assert!(s.lambdas.windows(2).all(|w| w[0] > w[1] && w[1] > 0.0));
        for (a, l) in s.alphas.iter().zip(&s.lambdas) {
            assert!((2.0 / (1.0 + a * a) - l).abs() < 1e-14);
        }
        let l50 = s.lambda(50).unwrap();
        assert!((l50 * (50.0 * PI).powi(2) / 2.0 - 1.0).abs() < 0.15);
    }

    #[test]
    fn asymptotic_branch_meets_the_exact_roots() {
        for k in [200u64, 1000] {
            let exact = 2.0 * solve_theta(k, 1e-10).unwrap().cos().powi(2);
            let a = asymptotic_alpha(k);
            let approx = 2.0 / (1.0 + a * a);
            assert!((approx - exact).abs() / exact < 1e-9, "k={k}");
        }
    }

    #[test]
    fn perturbed_eigenvalue_is_detected() {
        assert!(eigenfunction_residual(1, 512).unwrap() < 1e-6);
        assert!(eigenfunction_residual_with(1, 512, 1.01).unwrap() > 1e-3);
        assert!(eigenfunction_residual(1, 100).is_err());
    }

    #[test]
    fn conjugate_coefficient_is_not_an_eigenvector() {
        let theta = solve_theta(1, 1e-12).unwrap();
        let alpha = theta.tan();
        let c = Complex64::new(1.0, alpha) / Complex64::new(1.0, -alpha);
        let r = residual_of(|x| eigenfunction_with(c, alpha, x), 2.0 * theta.cos().powi(2), 512);
        assert!(r > 0.1);
    }

    #[test]
    fn residual_shrinks_under_refinement() {
        let r: Vec<f64> = [256, 512, 1024].iter().map(|&n| eigenfunction_residual(3, n).unwrap()).collect();
        assert!(r[1] < r[0] / 4.0 && r[2] < r[1] / 4.0, "{r:?}");
    }

    #[test]
    fn square_sums_converge_fast() {
        let s = schatten_partial_sums(2.0, &[100, 2000, 0]).unwrap();
        assert!(s[1] - s[0] < 1e-6);
        assert_eq!(s[2], 0.0);
    }
}
