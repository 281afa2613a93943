//! Ratio searches for the Hölder estimate `‖f(x) - f(y)‖_{p/θ} ≤ C ‖x - y‖_p^θ`
//! and its relatives.
//!
//! Every ratio is a witnessed lower bound for the best constant. Searches are
//! reproducible from `(seed, trial)` and their reports merge by maximum, so
//! split, parallel and resumed runs agree with a single serial pass.

use alloc::vec::Vec;

use nalgebra::DVector;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::matcore::{
    apply_calculus, schatten_norm, spectral_decompose, CMatrix, HermitianOperand, SchattenIndex, SignedPowerFunction,
};
use crate::random::{gaussian_hermitian, log_uniform, random_projection, random_unitary, rng_for, uniform};

/// Denominators at or below this are flagged rather than divided by.
pub const DEGENERATE_DENOMINATOR: f64 = 1e-300;

/// Eigenvalues above `-PSD_TOLERANCE` count as nonnegative.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Hill-climbing budget per trial.
pub const HILL_CLIMB_ROUNDS: usize = 100;
pub const HILL_CLIMB_MIN_SCALE: f64 = 1e-8;

/// Which inequality a sample measures, with its exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioParameters {
    pub p: SchattenIndex,
    pub theta: f64,
    pub signed: bool,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioSample {
    pub numerator: f64,
    pub denominator: f64,
    /// `None` when the denominator is degenerate.
    pub ratio: Option<f64>,
    pub degenerate: bool,
    pub inputs_digest: u64,
    pub parameters: RatioParameters,
}

impl RatioSample {
    fn new(numerator: f64, denominator: f64, inputs_digest: u64, parameters: RatioParameters) -> Self {
        let degenerate = !(denominator > DEGENERATE_DENOMINATOR);
        let ratio = (!degenerate).then(|| numerator / denominator);
        Self { numerator, denominator, ratio, degenerate, inputs_digest, parameters }
    }

    /// Ratio with degenerate samples mapped to 0, for maxima.
    pub fn value(&self) -> f64 {
        self.ratio.unwrap_or(0.0)
    }
}

/// FNV-1a over the bit patterns of the matrices' entries.
pub fn digest(mats: &[&CMatrix]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |v: u64| {
        for b in v.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    for m in mats {
        eat(m.nrows() as u64);
        eat(m.ncols() as u64);
        for z in m.iter() {
            eat(z.re.to_bits());
            eat(z.im.to_bits());
        }
    }
    h
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(invalid("theta", "exponent must lie strictly inside (0, 1)"));
    }
    Ok(())
}

fn same_dim(x: &HermitianOperand, y: &HermitianOperand) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::ShapeMismatch { expected: (x.dim(), x.dim()), found: (y.dim(), y.dim()) });
    }
    Ok(())
}

/// `‖f(x) - f(y)‖_{p/θ}` over `‖x - y‖_p^θ`.
pub fn ando_ratio(x: &HermitianOperand, y: &HermitianOperand, p: SchattenIndex, theta: f64, signed: bool) -> Result<RatioSample> {
    same_dim(x, y)?;
    let f = SignedPowerFunction::new(theta, signed)?;
    let w = x.trace_weight();
    let fx = apply_calculus(x, &f);
    let fy = apply_calculus(y, &f);
    let numerator = schatten_norm(&(fx.entries() - fy.entries()), p.divided_by(theta), w)?;
    let denominator = schatten_norm(&(x.entries() - y.entries()), p, w)?.powf(theta);
    Ok(RatioSample::new(
        numerator,
        denominator,
        digest(&[x.entries(), y.entries()]),
        RatioParameters { p, theta, signed, dim: x.dim() },
    ))
}

fn psd_power(x: &HermitianOperand, theta: f64) -> Result<CMatrix> {
    let min = x.eigenvalues().last().copied().unwrap_or(0.0);
    if min < -PSD_TOLERANCE {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    let values = DVector::from_iterator(x.dim(), x.eigenvalues().iter().map(|&v| Complex64::new(v.max(0.0).powf(theta), 0.0)));
    let u = x.eigenvectors();
    Ok(u * CMatrix::from_diagonal(&values) * u.adjoint())
}

/// `‖x^θ - y^θ‖_{p/θ}` over `‖x - y‖_p^θ` for positive `x, y`; at most 1 when `p ≥ θ`.
pub fn bks_check(x: &HermitianOperand, y: &HermitianOperand, p: SchattenIndex, theta: f64) -> Result<RatioSample> {
    same_dim(x, y)?;
    check_theta(theta)?;
    if p.value() < theta {
        return Err(invalid("p", "the constant-one inequality needs p ≥ θ"));
    }
    let w = x.trace_weight();
    let diff = psd_power(x, theta)? - psd_power(y, theta)?;
    let numerator = schatten_norm(&diff, p.divided_by(theta), w)?;
    let denominator = schatten_norm(&(x.entries() - y.entries()), p, w)?.powf(theta);
    Ok(RatioSample::new(
        numerator,
        denominator,
        digest(&[x.entries(), y.entries()]),
        RatioParameters { p, theta, signed: false, dim: x.dim() },
    ))
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

fn operator_norm(b: &CMatrix) -> Result<f64> {
    schatten_norm(b, SchattenIndex::Infinity, 1.0)
}

fn check_contraction(b: &CMatrix, n: usize) -> Result<f64> {
    if b.shape() != (n, n) {
        return Err(Error::ShapeMismatch { expected: (n, n), found: b.shape() });
    }
    let nb = operator_norm(b)?;
    if nb > 1.0 + 1e-12 {
        return Err(invalid("b", "needs operator norm at most 1"));
    }
    if nb == 0.0 {
        return Err(invalid("b", "must be nonzero"));
    }
    Ok(nb)
}

/// `‖[f(x), b]‖_{p/θ}` over `‖[x, b]‖_p^θ ‖b‖_∞^{1-θ}`.
pub fn commutator_ratio(x: &HermitianOperand, b: &CMatrix, p: SchattenIndex, theta: f64, signed: bool) -> Result<RatioSample> {
    let nb = check_contraction(b, x.dim())?;
    let f = SignedPowerFunction::new(theta, signed)?;
    let fx = apply_calculus(x, &f);
    let w = x.trace_weight();
    let numerator = schatten_norm(&commutator(fx.entries(), b), p.divided_by(theta), w)?;
    let denominator = schatten_norm(&commutator(x.entries(), b), p, w)?.powf(theta) * nb.powf(1.0 - theta);
    Ok(RatioSample::new(numerator, denominator, digest(&[x.entries(), b]), RatioParameters { p, theta, signed, dim: x.dim() }))
}

/// `‖b x^θ ± y^θ b‖_{p/θ}` over `‖b x ± y b‖_p^θ ‖b‖_∞^{1-θ}` for positive `x, y`.
pub fn anticommutator_ratio(
    x: &HermitianOperand,
    y: &HermitianOperand,
    b: &CMatrix,
    p: SchattenIndex,
    theta: f64,
    plus: bool,
) -> Result<RatioSample> {
    same_dim(x, y)?;
    check_theta(theta)?;
    let nb = check_contraction(b, x.dim())?;
    let sign = if plus { 1.0 } else { -1.0 };
    let xt = psd_power(x, theta)?;
    let yt = psd_power(y, theta)?;
    let w = x.trace_weight();
    let numerator = schatten_norm(&(b * xt + (yt * b).scale(sign)), p.divided_by(theta), w)?;
    let lin = b * x.entries() + (y.entries() * b).scale(sign);
    let denominator = schatten_norm(&lin, p, w)?.powf(theta) * nb.powf(1.0 - theta);
    Ok(RatioSample::new(
        numerator,
        denominator,
        digest(&[x.entries(), y.entries(), b]),
        RatioParameters { p, theta, signed: !plus, dim: x.dim() },
    ))
}

/// Mazur map `M_{p,q}(x) = u |x|^{p/q}` with `u` the partial isometry of the polar decomposition.
pub fn mazur_map(x: &CMatrix, p: f64, q: f64) -> Result<CMatrix> {
    if x.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite);
    }
    let n = x.nrows().max(x.ncols());
    let svd = x.clone().svd(true, true);
    let (w, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let cutoff = smax * f64::EPSILON * n as f64;
    let powered = svd.singular_values.map(|s| if s > cutoff { Complex64::new(s.powf(p / q), 0.0) } else { Complex64::new(0.0, 0.0) });
    Ok(w * CMatrix::from_diagonal(&powered) * vt)
}

/// `‖M_{p,q}(x) - M_{p,q}(y)‖_q` over `‖x - y‖_p^{p/q}`, `q > p`.
pub fn mazur_ratio(x: &CMatrix, y: &CMatrix, p: SchattenIndex, q: SchattenIndex) -> Result<RatioSample> {
    let (pv, qv) = match (p, q) {
        (SchattenIndex::Finite(a), SchattenIndex::Finite(b)) if b > a => (a, b),
        _ => return Err(invalid("q", "need finite exponents with q > p")),
    };
    if x.shape() != y.shape() {
        return Err(Error::ShapeMismatch { expected: x.shape(), found: y.shape() });
    }
    let theta = pv / qv;
    let numerator = schatten_norm(&(mazur_map(x, pv, qv)? - mazur_map(y, pv, qv)?), q, 1.0)?;
    let denominator = schatten_norm(&(x - y), p, 1.0)?.powf(theta);
    Ok(RatioSample::new(numerator, denominator, digest(&[x, y]), RatioParameters { p, theta, signed: true, dim: x.nrows() }))
}

/// Random pair families used by [`estimate_constant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ensemble {
    /// Independent GUE-style samples.
    Gaussian,
    /// `x` and `x + t q` with `q` a random projection.
    ProjectionShift,
    /// Clustered spectra (gaps `1e-3`) with a small perturbation.
    NearDegenerate,
}

impl Ensemble {
    pub const ALL: [Ensemble; 3] = [Ensemble::Gaussian, Ensemble::ProjectionShift, Ensemble::NearDegenerate];

    pub fn sample<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> (CMatrix, CMatrix) {
        match self {
            Ensemble::Gaussian => (gaussian_hermitian(n, rng), gaussian_hermitian(n, rng)),
            Ensemble::ProjectionShift => {
                let x = gaussian_hermitian(n, rng);
                let rank = rng.gen_range(1..=n.div_ceil(2));
                let t = log_uniform(1e-3, 10.0, rng);
                let q = random_projection(n, rank, rng);
                let y = &x + q.scale(t);
                (x, y)
            }
            Ensemble::NearDegenerate => {
                let clusters = rng.gen_range(1..=n.min(3));
                let centers: Vec<f64> = (0..clusters).map(|_| uniform(-1.0, 1.0, rng)).collect();
                let values: Vec<Complex64> = (0..n)
                    .map(|i| Complex64::new(centers[i % clusters] + 1e-3 * (i / clusters) as f64, 0.0))
                    .collect();
                let u = random_unitary(n, rng);
                let x = &u * CMatrix::from_diagonal(&DVector::from_vec(values)) * u.adjoint();
                let x = (&x + x.adjoint()).scale(0.5);
                let eps = log_uniform(1e-4, 1.0, rng);
                let y = &x + gaussian_hermitian(n, rng).scale(eps);
                (x, y)
            }
        }
    }
}

/// Which ratio a search maximizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub p: SchattenIndex,
    pub theta: f64,
    pub signed: bool,
}

/// Best sample of a search and how it was found.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchBest {
    pub sample: RatioSample,
    /// Trial index, or `None` for the fixed seed-set witnesses.
    pub trial: Option<u64>,
    pub witness: (CMatrix, CMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub best: Option<SearchBest>,
    /// Trials `start..end` covered by this report.
    pub start: u64,
    pub end: u64,
    pub seed: u64,
    pub dims_swept: Vec<usize>,
    /// `(trial, best ratio so far)` at each improvement.
    pub history: Vec<(u64, f64)>,
    /// `(dim, best ratio at that dim)`.
    pub best_per_dim: Vec<(usize, f64)>,
}

impl SearchReport {
    pub fn trials(&self) -> u64 {
        self.end - self.start
    }

    pub fn best_ratio(&self) -> f64 {
        self.best.as_ref().map_or(0.0, |b| b.sample.value())
    }

    /// Joins the report for the trials that immediately follow this one.
    pub fn merge(mut self, next: SearchReport) -> Result<SearchReport> {
        if next.start != self.end || next.seed != self.seed || next.dims_swept != self.dims_swept || next.config != self.config {
            return Err(invalid("report", "reports are not consecutive pieces of the same search"));
        }
        let mut best_ratio = self.best_ratio();
        for (t, r) in next.history {
            if r > best_ratio {
                best_ratio = r;
                self.history.push((t, r));
            }
        }
        if let Some(b) = next.best {
            if self.best.as_ref().is_none_or(|cur| b.sample.value() > cur.sample.value()) {
                self.best = Some(b);
            }
        }
        for (slot, (_, r)) in self.best_per_dim.iter_mut().zip(next.best_per_dim) {
            slot.1 = slot.1.max(r);
        }
        self.end = next.end;
        Ok(self)
    }
}

fn ratio_of(cfg: &SearchConfig, x: &CMatrix, y: &CMatrix) -> Option<RatioSample> {
    let xo = spectral_decompose(x).ok()?;
    let yo = spectral_decompose(y).ok()?;
    let s = ando_ratio(&xo, &yo, cfg.p, cfg.theta, cfg.signed).ok()?;
    (!s.degenerate && s.value().is_finite()).then_some(s)
}

/// Greedy refinement: perturb `x` or `y` by a Hermitian Gaussian, keep improvements,
/// halve the scale on failure.
pub fn hill_climb<R: Rng + ?Sized>(cfg: &SearchConfig, start: (CMatrix, CMatrix), rng: &mut R) -> Option<(RatioSample, (CMatrix, CMatrix))> {
    let (mut x, mut y) = start;
    let mut best = ratio_of(cfg, &x, &y)?;
    let n = x.nrows();
    let mut scale = 0.5 * ((&x - &y).norm() / (n as f64).sqrt()).max(1e-6);
    for _ in 0..HILL_CLIMB_ROUNDS {
        if scale < HILL_CLIMB_MIN_SCALE {
            break;
        }
        let delta = gaussian_hermitian(n, rng).scale(scale);
        let (cx, cy) = if rng.gen::<bool>() { (&x + delta, y.clone()) } else { (x.clone(), &y + delta) };
        match ratio_of(cfg, &cx, &cy) {
            Some(s) if s.value() > best.value() => {
                best = s;
                x = cx;
                y = cy;
            }
            _ => scale *= 0.5,
        }
    }
    Some((best, (x, y)))
}

/// Fixed witnesses evaluated before any random trial: the commuting
/// equality case `x = diag(1, 0, …)`, `y = 0`.
pub fn seed_witnesses(dim: usize) -> Vec<(CMatrix, CMatrix)> {
    let mut x = CMatrix::zeros(dim, dim);
    x[(0, 0)] = Complex64::new(1.0, 0.0);
    alloc::vec![(x, CMatrix::zeros(dim, dim))]
}

fn validate(cfg: &SearchConfig, dims: &[usize]) -> Result<()> {
    check_theta(cfg.theta)?;
    if dims.is_empty() {
        return Err(Error::Empty("dims"));
    }
    if dims.contains(&0) {
        return Err(invalid("dims", "dimensions must be positive"));
    }
    Ok(())
}

/// One trial: dimension `dims[t mod |dims|]`, ensemble cycling with `t / |dims|`,
/// generator `seed ^ t`.
pub fn run_trial(cfg: &SearchConfig, dims: &[usize], seed: u64, t: u64) -> Option<(RatioSample, (CMatrix, CMatrix))> {
    let dim = dims[(t % dims.len() as u64) as usize];
    let ensemble = Ensemble::ALL[((t / dims.len() as u64) % 3) as usize];
    let mut rng = rng_for(seed, t);
    let start = ensemble.sample(dim, &mut rng);
    hill_climb(cfg, start, &mut rng)
}

/// Runs trials `start..end` of a search. `start == 0` also evaluates the seed witnesses.
pub fn run_trials(cfg: &SearchConfig, dims: &[usize], seed: u64, start: u64, end: u64) -> Result<SearchReport> {
    validate(cfg, dims)?;
    if end < start {
        return Err(invalid("trials", "empty range"));
    }
    let mut report = SearchReport {
        config: *cfg,
        best: None,
        start,
        end,
        seed,
        dims_swept: dims.to_vec(),
        history: Vec::new(),
        best_per_dim: dims.iter().map(|&d| (d, 0.0)).collect(),
    };
    let consider = |report: &mut SearchReport, trial: Option<u64>, sample: RatioSample, witness: (CMatrix, CMatrix)| {
        let r = sample.value();
        let dim = witness.0.nrows();
        for slot in report.best_per_dim.iter_mut().filter(|s| s.0 == dim) {
            slot.1 = slot.1.max(r);
        }
        if r > report.best_ratio() || report.best.is_none() {
            report.history.push((trial.unwrap_or(start), r));
            report.best = Some(SearchBest { sample, trial, witness });
        }
    };
    if start == 0 {
        for &d in dims {
            for w in seed_witnesses(d) {
                if let Some(s) = ratio_of(cfg, &w.0, &w.1) {
                    consider(&mut report, None, s, w);
                }
            }
        }
    }
    for t in start..end {
        if let Some((s, w)) = run_trial(cfg, dims, seed, t) {
            consider(&mut report, Some(t), s, w);
        }
    }
    Ok(report)
}

/// Maximizes [`ando_ratio`] over `trials` seeded random pairs.
pub fn estimate_constant(p: SchattenIndex, theta: f64, signed: bool, dims: &[usize], trials: u64, seed: u64) -> Result<SearchReport> {
    if trials == 0 {
        return Err(invalid("trials", "need at least one trial"));
    }
    run_trials(&SearchConfig { p, theta, signed }, dims, seed, 0, trials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_psd;

    fn p(v: f64) -> SchattenIndex {
        SchattenIndex::new(v).unwrap()
    }

    #[test]
    fn ando_examples() {
        let x = HermitianOperand::diagonal(&[1.0, 0.0]).unwrap();
        let zero = HermitianOperand::diagonal(&[0.0, 0.0]).unwrap();
        for (pp, th) in [(0.5, 0.5), (1.0, 0.3), (2.0, 0.9)] {
            let s = ando_ratio(&x, &zero, p(pp), th, false).unwrap();
            assert!((s.value() - 1.0).abs() < 1e-14);
        }
        let a = HermitianOperand::diagonal(&[4.0, 0.0]).unwrap();
        let b = HermitianOperand::diagonal(&[0.0, 1.0]).unwrap();
        let s = ando_ratio(&a, &b, p(1.0), 0.5, false).unwrap();
        assert!((s.value() - 1.0).abs() < 1e-14);
        let same = ando_ratio(&a, &a, p(1.0), 0.5, false).unwrap();
        assert!(same.degenerate && same.ratio.is_none());
    }

    #[test]
    fn bks_holds_on_random_psd_pairs() {
        let mut rng = rng_for(2, 0);
        for t in 0..100 {
            let n = 1 + t % 6;
            let x = spectral_decompose(&random_psd(n, n, &mut rng)).unwrap();
            let y = spectral_decompose(&random_psd(n, 1 + t % n, &mut rng)).unwrap();
            for (pp, th) in [(1.0, 0.5), (2.0, 0.5), (1.0, 0.75)] {
                assert!(bks_check(&x, &y, p(pp), th).unwrap().value() <= 1.0 + 1e-9);
            }
        }
        let neg = HermitianOperand::diagonal(&[1.0, -1e-3]).unwrap();
        assert!(matches!(bks_check(&neg, &neg, p(1.0), 0.5), Err(Error::NotPositive { .. })));
        let pos = HermitianOperand::diagonal(&[1.0, 0.0]).unwrap();
        assert!(bks_check(&pos, &pos, p(0.25), 0.5).is_err());
    }

    #[test]
    fn commutator_examples() {
        let x = HermitianOperand::diagonal(&[1.0, 0.0]).unwrap();
        let mut b = CMatrix::zeros(2, 2);
        b[(0, 1)] = Complex64::new(1.0, 0.0);
        let s = commutator_ratio(&x, &b, p(1.0), 0.5, false).unwrap();
        assert!((s.value() - 1.0).abs() < 1e-14);
        let s = commutator_ratio(&x, &CMatrix::identity(2, 2), p(1.0), 0.5, false).unwrap();
        assert!(s.degenerate);
        assert!(commutator_ratio(&x, &CMatrix::identity(2, 2).scale(2.0), p(1.0), 0.5, false).is_err());
    }

    #[test]
    fn anticommutator_examples() {
        let mut rng = rng_for(3, 0);
        let x = spectral_decompose(&random_psd(4, 4, &mut rng)).unwrap();
        let id = CMatrix::identity(4, 4);
        let minus = anticommutator_ratio(&x, &x, &id, p(0.5), 0.5, false).unwrap();
        assert!(minus.degenerate);
        for (pp, th) in [(0.5, 0.5), (1.0, 0.25)] {
            let plus = anticommutator_ratio(&x, &x, &id, p(pp), th, true).unwrap();
            assert!((plus.value() - 2f64.powf(1.0 - th)).abs() < 1e-10);
        }
    }

    #[test]
    fn mazur_examples() {
        let mut rng = rng_for(5, 0);
        let a = gaussian_hermitian(4, &mut rng);
        let b = gaussian_hermitian(4, &mut rng);
        let m = mazur_ratio(&a, &b, p(1.0), p(2.0)).unwrap();
        let xa = spectral_decompose(&a).unwrap();
        let xb = spectral_decompose(&b).unwrap();
        let s = ando_ratio(&xa, &xb, p(1.0), 0.5, true).unwrap();
        assert!((m.value() - s.value()).abs() < 1e-10 * s.value());
        let u = random_unitary(3, &mut rng);
        let z = CMatrix::zeros(3, 3);
        for lambda in [0.1, 3.0] {
            let r = mazur_ratio(&u.scale(lambda), &z, p(1.0), p(3.0)).unwrap();
            assert!((r.value() - 1.0).abs() < 1e-12);
        }
        assert!(mazur_ratio(&z, &z, p(1.0), p(2.0)).unwrap().degenerate);
        assert!(mazur_ratio(&z, &z, p(2.0), p(1.0)).is_err());
    }

    #[test]
    fn search_finds_the_equality_witness() {
        let r = estimate_constant(p(2.0), 0.5, false, &[2], 4, 1).unwrap();
        assert!(r.best_ratio() >= 1.0);
        assert_eq!(r.history.last().unwrap().1, r.best_ratio());
        assert!(estimate_constant(p(2.0), 0.5, false, &[2], 0, 1).is_err());
    }

    #[test]
    fn split_searches_merge_to_the_serial_result() {
        let cfg = SearchConfig { p: p(0.5), theta: 0.5, signed: false };
        let dims = [2, 3];
        let whole = run_trials(&cfg, &dims, 9, 0, 12).unwrap();
        let a = run_trials(&cfg, &dims, 9, 0, 5).unwrap();
        let b = run_trials(&cfg, &dims, 9, 5, 12).unwrap();
        assert_eq!(a.merge(b).unwrap(), whole);
    }
}
