//! Periodic kernels, their Fourier coefficients and Sobolev constants, and
//! the rank-one factorization `K(x,y) = f_0(x) + Σ_{l≠0} |l|^{-d} f_l(x) e^{ily}`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::fft::fft2_in_place;
use crate::error::{invalid, Error, Result};
use crate::matcore::{CMatrix, SchattenIndex};
use crate::schur::rank_one_sum_bound;

/// `(Σ_{k≠0} k^{-2})^{1/2} = π/√3`, the Cauchy–Schwarz constant of the coefficient estimate.
pub const C_CS: f64 = 1.813_799_364_234_217_8;

/// Relative change against the half grid above which a spectral Sobolev estimate is rejected.
pub const SOBOLEV_RESOLUTION: f64 = 1e-2;

/// Relative agreement demanded between closed-form and spectral Sobolev constants.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-8;

const PERIODICITY_TOLERANCE: f64 = 1e-9;
const PERIODICITY_SAMPLES: usize = 64;

/// A `2π`-periodic kernel on `[0, 2π]²`.
pub trait PeriodicKernel: Send + Sync {
    fn eval(&self, x: f64, y: f64) -> Complex64;

    /// Closed-form `∂^{dx}_x ∂^{dy}_y K`, if known.
    fn partial(&self, _dx: u32, _dy: u32, _x: f64, _y: f64) -> Option<Complex64> {
        None
    }

    fn name(&self) -> String;
}

/// A kernel together with its sampling resolution.
#[derive(Clone)]
pub struct SmoothKernel {
    inner: Arc<dyn PeriodicKernel>,
    grid_size: usize,
    sobolev_grid: usize,
}

impl core::fmt::Debug for SmoothKernel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SmoothKernel")
            .field("name", &self.inner.name())
            .field("grid_size", &self.grid_size)
            .field("sobolev_grid", &self.sobolev_grid)
            .finish()
    }
}

impl SmoothKernel {
    /// Sobolev constants are computed on `max(grid_size, 1024)` points per axis.
    pub fn new(inner: Arc<dyn PeriodicKernel>, grid_size: usize) -> Result<Self> {
        Self::with_sobolev_grid(inner, grid_size, grid_size.max(1024))
    }

    pub fn with_sobolev_grid(inner: Arc<dyn PeriodicKernel>, grid_size: usize, sobolev_grid: usize) -> Result<Self> {
        for (name, n) in [("grid_size", grid_size), ("sobolev_grid", sobolev_grid)] {
            if !n.is_power_of_two() || n < 64 {
                return Err(invalid(name, "must be a power of two, at least 64"));
            }
        }
        let kernel = Self { inner, grid_size, sobolev_grid };
        kernel.check_periodic()?;
        Ok(kernel)
    }

    pub fn from_kernel(kernel: impl PeriodicKernel + 'static, grid_size: usize) -> Result<Self> {
        Self::new(Arc::new(kernel), grid_size)
    }

    pub fn name(&self) -> String {
        self.inner.name()
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn sobolev_grid(&self) -> usize {
        self.sobolev_grid
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.inner.eval(x, y)
    }

    pub fn kernel(&self) -> &Arc<dyn PeriodicKernel> {
        &self.inner
    }

    fn check_periodic(&self) -> Result<()> {
        let mut jump = 0.0f64;
        for i in 0..PERIODICITY_SAMPLES {
            let t = 2.0 * PI * i as f64 / PERIODICITY_SAMPLES as f64;
            jump = jump.max((self.eval(0.0, t) - self.eval(2.0 * PI, t)).norm());
            jump = jump.max((self.eval(t, 0.0) - self.eval(t, 2.0 * PI)).norm());
        }
        if jump > PERIODICITY_TOLERANCE {
            return Err(Error::Aperiodic { jump });
        }
        Ok(())
    }
}

/// `α_{k,l}` for `k, l ∈ [-N/2, N/2)`, stored at wrapped indices.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    n: usize,
    data: Vec<Complex64>,
}

impl FourierCoefficients {
    pub fn size(&self) -> usize {
        self.n
    }

    /// Signed frequency of storage index `i`.
    pub fn mode(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    fn index(&self, k: i64) -> Option<usize> {
        let n = self.n as i64;
        (-n / 2..n / 2).contains(&k).then(|| k.rem_euclid(n) as usize)
    }

    /// `α_{k,l}`, zero outside the resolved band.
    pub fn get(&self, k: i64, l: i64) -> Complex64 {
        match (self.index(k), self.index(l)) {
            (Some(a), Some(b)) => self.data[a * self.n + b],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// `(k, l, α_{k,l})` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        self.data.iter().enumerate().map(move |(idx, &v)| (self.mode(idx / self.n), self.mode(idx % self.n), v))
    }

    pub fn total_mass(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).sum()
    }
}

fn sample_grid(k: &SmoothKernel, n: usize) -> Vec<Complex64> {
    let h = 2.0 * PI / n as f64;
    let mut out = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            out.push(k.eval(h * a as f64, h * b as f64));
        }
    }
    out
}

fn coefficients_at(k: &SmoothKernel, n: usize) -> FourierCoefficients {
    let mut data = sample_grid(k, n);
    fft2_in_place(&mut data, n);
    let scale = 1.0 / (n * n) as f64;
    for v in &mut data {
        *v *= scale;
    }
    FourierCoefficients { n, data }
}

/// `α_{k,l} = (2π)^{-2} ∫∫ K e^{-ikx} e^{-ily}`, by 2D FFT on the kernel grid.
pub fn fourier_coefficients(k: &SmoothKernel) -> FourierCoefficients {
    coefficients_at(k, k.grid_size)
}

/// The four L2 norms making up the Sobolev constant of order `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SobolevTerms {
    /// `‖∂^{d+1} K / ∂y^d ∂x‖_2`
    pub mixed: f64,
    /// `‖∂^d K / ∂y^d‖_2`
    pub y_derivative: f64,
    /// `‖∂K/∂x‖_2`
    pub x_derivative: f64,
    /// `‖K‖_2`
    pub value: f64,
}

impl SobolevTerms {
    pub fn total(&self) -> f64 {
        self.mixed + self.y_derivative + self.x_derivative + self.value
    }

    /// Uniform bound on `‖f_l‖_∞` over all modes `l`.
    pub fn column_sup_bound(&self) -> f64 {
        (C_CS * self.mixed + self.y_derivative).max(C_CS * self.x_derivative + self.value)
    }

    fn inflate(self, coarse: Self) -> Self {
        let up = |a: f64, b: f64| a + (a - b).abs();
        Self {
            mixed: up(self.mixed, coarse.mixed),
            y_derivative: up(self.y_derivative, coarse.y_derivative),
            x_derivative: up(self.x_derivative, coarse.x_derivative),
            value: up(self.value, coarse.value),
        }
    }
}

fn spectral_terms(c: &FourierCoefficients, d: u32) -> SobolevTerms {
    let (mut a, mut b, mut cx, mut v) = (0.0, 0.0, 0.0, 0.0);
    for (k, l, z) in c.iter() {
        let m2 = z.norm_sqr();
        let k2 = (k * k) as f64;
        let l2d = ((l * l) as f64).powi(d as i32);
        a += k2 * l2d * m2;
        b += l2d * m2;
        cx += k2 * m2;
        v += m2;
    }
    SobolevTerms { mixed: a.sqrt(), y_derivative: b.sqrt(), x_derivative: cx.sqrt(), value: v.sqrt() }
}

/// Sobolev terms by spectral differentiation, checked against the half grid
/// and inflated by the observed change.
pub fn sobolev_terms_spectral(k: &SmoothKernel, d: u32) -> Result<SobolevTerms> {
    if d == 0 {
        return Err(invalid("d", "Sobolev order must be at least 1"));
    }
    let n = k.sobolev_grid;
    let fine = spectral_terms(&coefficients_at(k, n), d);
    let coarse = spectral_terms(&coefficients_at(k, n / 2), d);
    let change = (fine.total() - coarse.total()).abs() / fine.total().max(f64::MIN_POSITIVE);
    if change > SOBOLEV_RESOLUTION {
        return Err(Error::Unresolved { grid: n, change });
    }
    Ok(fine.inflate(coarse))
}

/// Sobolev terms from closed-form partials, by the (spectrally accurate)
/// periodic trapezoid rule on the Sobolev grid.
pub fn sobolev_terms_closed_form(k: &SmoothKernel, d: u32) -> Result<SobolevTerms> {
    if d == 0 {
        return Err(invalid("d", "Sobolev order must be at least 1"));
    }
    let n = k.sobolev_grid;
    let h = 2.0 * PI / n as f64;
    let kern = k.kernel();
    let mut sums = [0.0f64; 4];
    let orders = [(1, d), (0, d), (1, 0), (0, 0)];
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (h * a as f64, h * b as f64);
            for (s, &(dx, dy)) in sums.iter_mut().zip(&orders) {
                let v = kern.partial(dx, dy, x, y).ok_or(Error::MissingDerivatives)?;
                *s += v.norm_sqr();
            }
        }
    }
    let norm = |s: f64| (s / (n * n) as f64).sqrt();
    Ok(SobolevTerms { mixed: norm(sums[0]), y_derivative: norm(sums[1]), x_derivative: norm(sums[2]), value: norm(sums[3]) })
}

/// Closed-form partials when the kernel supplies them, spectral differentiation otherwise.
pub fn sobolev_terms(k: &SmoothKernel, d: u32) -> Result<SobolevTerms> {
    match sobolev_terms_closed_form(k, d) {
        Err(Error::MissingDerivatives) => sobolev_terms_spectral(k, d),
        other => other,
    }
}

/// The Sobolev constant of order `d`.
pub fn sobolev_constant(k: &SmoothKernel, d: u32) -> Result<f64> {
    Ok(sobolev_terms(k, d)?.total())
}

fn check_order(d: u32, p: SchattenIndex) -> Result<f64> {
    let pv = match p {
        SchattenIndex::Finite(v) if v <= 1.0 => v,
        _ => return Err(invalid("p", "certification covers 0 < p ≤ 1")),
    };
    if (d as f64) * pv <= 1.0 {
        return Err(Error::SobolevOrder { d, inv_p: 1.0 / pv });
    }
    Ok(pv)
}

/// `(2/(dp-1) + 2)^{1/p}`.
pub fn stated_prefactor(d: u32, p: SchattenIndex) -> Result<f64> {
    let pv = check_order(d, p)?;
    Ok((2.0 / (d as f64 * pv - 1.0) + 2.0).powf(1.0 / pv))
}

/// Upper bound for `ζ(s)`, `s > 1`: partial sum to 1000 plus the integral tail.
pub fn zeta_upper(s: f64) -> f64 {
    let partial: f64 = (1..=1000).map(|n| (n as f64).powf(-s)).sum();
    partial + 1000f64.powf(1.0 - s) / (s - 1.0)
}

/// `‖(1_{k=0} + 1_{k≠0}|k|^{-d})_k‖_p = (1 + 2ζ(dp))^{1/p}`, bounded above.
pub fn alpha_norm_upper(d: u32, p: SchattenIndex) -> Result<f64> {
    let pv = check_order(d, p)?;
    Ok((1.0 + 2.0 * zeta_upper(d as f64 * pv)).powf(1.0 / pv))
}

/// Turns a Sobolev constant into a pcb bound.
///
/// The stated form `(2/(dp-1)+2)^{1/p} (C_CS + 1) S` is returned unless it
/// falls below `‖α‖_p · C_CS · S`, which follows from the coefficient
/// estimates directly; the prefactor alone can undershoot `‖α‖_p`.
pub fn certified_bound_from_sobolev(sobolev: f64, d: u32, p: SchattenIndex) -> Result<f64> {
    let stated = stated_prefactor(d, p)? * (C_CS + 1.0) * sobolev;
    let direct = alpha_norm_upper(d, p)? * C_CS * sobolev;
    Ok(stated.max(direct))
}

/// Certified `‖M‖_pcb` bound for the symbol `(K(x,y))`.
pub fn certified_pcb_bound(k: &SmoothKernel, d: u32, p: SchattenIndex) -> Result<f64> {
    check_order(d, p)?;
    certified_bound_from_sobolev(sobolev_constant(k, d)?, d, p)
}

/// Certified bound for the stacked family `(K_i(x,y))_{(x,i), y}`.
pub fn certified_family_bound(kernels: &[SmoothKernel], d: u32, p: SchattenIndex) -> Result<f64> {
    check_order(d, p)?;
    let mut sup = 0.0f64;
    for k in kernels {
        sup = sup.max(sobolev_constant(k, d)?);
    }
    if kernels.is_empty() {
        return Err(Error::Empty("kernels"));
    }
    certified_bound_from_sobolev(sup, d, p)
}

/// `K(x, y) = Σ_l α_l f_l(x) e^{ily}` over the retained modes `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneFactorization {
    pub d: u32,
    pub grid_size: usize,
    pub mode_cutoff: usize,
    /// Mode `l` of each retained term; `g_l = e^{ily}`.
    pub g_labels: Vec<i64>,
    /// `1` for `l = 0`, `|l|^{-d}` otherwise.
    pub alphas: Vec<f64>,
    /// Fourier coefficients of each `f_l`, dense over `k ∈ [-N/2, N/2)` in wrapped order.
    pub f_coefficients: Vec<Vec<Complex64>>,
    /// `Σ_k |c_k|`, an upper bound on `‖f_l‖_∞`.
    pub f_sups: Vec<f64>,
    pub certified_bound: f64,
    pub truncation_error: f64,
    pub sobolev: SobolevTerms,
}

impl RankOneFactorization {
    fn mode(&self, i: usize) -> i64 {
        let n = self.grid_size as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// `f_l` at the points `xs`.
    pub fn f_values(&self, term: usize, xs: &[f64]) -> Vec<Complex64> {
        let c = &self.f_coefficients[term];
        xs.iter()
            .map(|&x| {
                c.iter()
                    .enumerate()
                    .filter(|(_, z)| z.re != 0.0 || z.im != 0.0)
                    .map(|(i, &z)| z * Complex64::from_polar(1.0, self.mode(i) as f64 * x))
                    .sum()
            })
            .collect()
    }

    /// `f_l` on the kernel's `x`-grid `2πa/N`.
    pub fn f_samples(&self) -> Vec<Vec<Complex64>> {
        let xs: Vec<f64> = (0..self.grid_size).map(|a| 2.0 * PI * a as f64 / self.grid_size as f64).collect();
        (0..self.alphas.len()).map(|t| self.f_values(t, &xs)).collect()
    }

    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.eval_grid(&[x], &[y])[(0, 0)]
    }

    pub fn eval_grid(&self, xs: &[f64], ys: &[f64]) -> CMatrix {
        let ones = CMatrix::from_element(xs.len(), ys.len(), Complex64::new(1.0, 0.0));
        self.apply_hadamard(xs, ys, &ones)
    }

    /// `Σ_l α_l diag(f_l(xs)) A diag(e_l(ys))`: the multiplier acting on `A`
    /// through its rank-one decomposition.
    pub fn apply_hadamard(&self, xs: &[f64], ys: &[f64], a: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(xs.len(), ys.len());
        for t in 0..self.alphas.len() {
            let fx = self.f_values(t, xs);
            let l = self.g_labels[t] as f64;
            for (j, &y) in ys.iter().enumerate() {
                let g = Complex64::from_polar(self.alphas[t], l * y);
                for (i, f) in fx.iter().enumerate() {
                    out[(i, j)] += f * a[(i, j)] * g;
                }
            }
        }
        out
    }
}

/// Builds the factorization from the kernel-grid coefficients, keeping
/// `|l| ≤ mode_cutoff`.
///
/// `truncation_error` bounds the reconstruction error at the grid points by
/// the discarded coefficient mass (plus rounding). `certified_bound` bounds
/// the full kernel: retained modes by their exact coefficient sums, the modes
/// beyond the cutoff by the Sobolev column estimate, combined by the
/// `p`-triangle inequality.
pub fn build_factorization(k: &SmoothKernel, d: u32, p: SchattenIndex, mode_cutoff: usize) -> Result<RankOneFactorization> {
    let pv = check_order(d, p)?;
    if mode_cutoff == 0 {
        return Err(invalid("mode_cutoff", "must be at least 1"));
    }
    let coeffs = fourier_coefficients(k);
    let sobolev = sobolev_terms(k, d)?;
    let n = coeffs.size();
    let total_mass = coeffs.total_mass();
    let keep_floor = 1e-14 * total_mass;

    let mut g_labels = Vec::new();
    let mut alphas = Vec::new();
    let mut f_coefficients = Vec::new();
    let mut f_sups = Vec::new();
    let mut discarded = 0.0;
    let mut all_alpha_p = 0.0;
    let mut all_sup = 0.0f64;
    for li in 0..n {
        let l = coeffs.mode(li);
        let column: Vec<Complex64> = (0..n).map(|ki| coeffs.data[ki * n + li]).collect();
        let mass: f64 = column.iter().map(|z| z.norm()).sum();
        if l.unsigned_abs() as usize > mode_cutoff {
            discarded += mass;
            continue;
        }
        let weight = (l.unsigned_abs() as f64).powi(d as i32).max(1.0);
        let alpha = 1.0 / weight;
        all_alpha_p += alpha.powf(pv);
        all_sup = all_sup.max(weight * mass);
        if mass <= keep_floor {
            discarded += mass;
            continue;
        }
        g_labels.push(l);
        alphas.push(alpha);
        f_coefficients.push(column.iter().map(|z| z * weight).collect());
        f_sups.push(weight * mass);
    }

    let retained = all_alpha_p.powf(1.0 / pv) * all_sup;
    let c = mode_cutoff as f64;
    let dp = d as f64 * pv;
    let tail_p = 2.0 * sobolev.column_sup_bound().powf(pv) * c.powf(1.0 - dp) / (dp - 1.0);
    let certified_bound = (retained.powf(pv) + tail_p).powf(1.0 / pv);
    let ones = alloc::vec![1.0; alphas.len()];
    debug_assert!(certified_bound + 1e-12 >= rank_one_sum_bound(&alphas, &f_sups, &ones, p).unwrap_or(0.0));

    Ok(RankOneFactorization {
        d,
        grid_size: n,
        mode_cutoff,
        g_labels,
        alphas,
        f_coefficients,
        f_sups,
        certified_bound,
        truncation_error: discarded + 1e-13 * total_mass,
        sobolev,
    })
}
