//! Named kernels: trigonometric test cases and the cut-off kernels behind the
//! dyadic bounds.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::bump::{Bump, Span};
use super::kernel::{PeriodicKernel, SmoothKernel};
use crate::error::{invalid, Result};

/// Names accepted by [`catalog_kernel`].
pub const CATALOG_NAMES: [&str; 7] = ["constant", "plane-wave", "cos-cos", "rational", "theta2-near", "theta2-far", "theta-plus"];

// Same arithmetic as `f64::rem_euclid`, which needs std.
fn rem_euclid(t: f64, m: f64) -> f64 {
    let r = t % m;
    if r < 0.0 {
        r + m
    } else {
        r
    }
}

/// Representative of `t` in `[-π, π)`.
pub fn wrap_centered(t: f64) -> f64 {
    rem_euclid(t + PI, 2.0 * PI) - PI
}

/// Representative of `t` in `[0, 2π)`.
pub fn wrap_positive(t: f64) -> f64 {
    rem_euclid(t, 2.0 * PI)
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `K ≡ 1`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantKernel;

impl PeriodicKernel for ConstantKernel {
    fn eval(&self, _x: f64, _y: f64) -> Complex64 {
        real(1.0)
    }

    fn partial(&self, dx: u32, dy: u32, _x: f64, _y: f64) -> Option<Complex64> {
        Some(real(if dx == 0 && dy == 0 { 1.0 } else { 0.0 }))
    }

    fn name(&self) -> String {
        "constant".into()
    }
}

/// `K(x, y) = e^{i(kx + ly)}`.
#[derive(Debug, Clone, Copy)]
pub struct PlaneWave {
    pub k: i64,
    pub l: i64,
}

impl PeriodicKernel for PlaneWave {
    fn eval(&self, x: f64, y: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.k as f64 * x + self.l as f64 * y)
    }

    fn partial(&self, dx: u32, dy: u32, x: f64, y: f64) -> Option<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        Some((i * self.k as f64).powu(dx) * (i * self.l as f64).powu(dy) * self.eval(x, y))
    }

    fn name(&self) -> String {
        format!("plane-wave({},{})", self.k, self.l)
    }
}

/// `K(x, y) = cos x cos y`.
#[derive(Debug, Clone, Copy)]
pub struct CosCosKernel;

impl PeriodicKernel for CosCosKernel {
    fn eval(&self, x: f64, y: f64) -> Complex64 {
        real(x.cos() * y.cos())
    }

    fn partial(&self, dx: u32, dy: u32, x: f64, y: f64) -> Option<Complex64> {
        Some(real((x + dx as f64 * FRAC_PI_2).cos() * (y + dy as f64 * FRAC_PI_2).cos()))
    }

    fn name(&self) -> String {
        "cos-cos".into()
    }
}

/// `K(x, y) = 1 / (c + cos x + sin y)` with `c > 2`, analytic on the torus.
#[derive(Debug, Clone, Copy)]
pub struct RationalKernel {
    pub c: f64,
}

impl PeriodicKernel for RationalKernel {
    fn eval(&self, x: f64, y: f64) -> Complex64 {
        real(1.0 / (self.c + x.cos() + y.sin()))
    }

    fn name(&self) -> String {
        format!("rational({})", self.c)
    }
}

/// `φ(x) ψ(y) / (x - y)`: `φ` is 1 on `[0, 1/2]` with support `[-1/2, 7/10]`,
/// `ψ` is 1 on `[1, 2]` with support `[4/5, 3]`; `x` is read in `[-π, π)`.
///
/// Ramps of width 1/5 keep the order-3 Sobolev terms resolved on a 1024 grid.
#[derive(Debug, Clone, Copy)]
pub struct Theta2Near {
    phi: Bump,
    psi: Bump,
}

impl Theta2Near {
    pub fn new() -> Self {
        Self {
            phi: Bump::new(Span::new(0.0, 0.5), Span::new(-0.5, 0.7)).expect("nested"),
            psi: Bump::new(Span::new(1.0, 2.0), Span::new(0.8, 3.0)).expect("nested"),
        }
    }
}

impl Default for Theta2Near {
    fn default() -> Self {
        Self::new()
    }
}

impl PeriodicKernel for Theta2Near {
    fn eval(&self, x: f64, y: f64) -> Complex64 {
        let x = wrap_centered(x);
        let y = wrap_positive(y);
        let w = self.phi.eval(x) * self.psi.eval(y);
        real(if w == 0.0 { 0.0 } else { w / (x - y) })
    }

    fn name(&self) -> String {
        "theta2-near".into()
    }
}

/// `(a^θ - b^θ)/(a - b)` for `a, b > 0`, `θ a^{θ-1}` on the diagonal.
pub fn power_quotient(a: f64, b: f64, theta: f64) -> f64 {
    if a == b {
        return theta * a.powf(theta - 1.0);
    }
    let r = (a - b) / b;
    b.powf(theta) * (theta * r.ln_1p()).exp_m1() / (a - b)
}

/// `φ(x) φ(y) ((x+i)^θ - y^θ) / ((x+i) - y)`, `φ` 1 on `[1/2, 2]` with support `[1/4, 3]`.
#[derive(Debug, Clone, Copy)]
pub struct Theta2Far {
    phi: Bump,
    pub theta: f64,
    pub shift: u32,
}

impl Theta2Far {
    pub fn new(theta: f64, shift: u32) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(invalid("theta", "exponent must lie strictly inside (0, 1)"));
        }
        Ok(Self { phi: Bump::new(Span::new(0.5, 2.0), Span::new(0.25, 3.0))?, theta, shift })
    }
}

impl PeriodicKernel for Theta2Far {
    fn eval(&self, x: f64, y: f64) -> Complex64 {
        let x = wrap_positive(x);
        let y = wrap_positive(y);
        let w = self.phi.eval(x) * self.phi.eval(y);
        real(if w == 0.0 { 0.0 } else { w * power_quotient(x + self.shift as f64, y, self.theta) })
    }

    fn name(&self) -> String {
        format!("theta2-far(theta={},shift={})", self.theta, self.shift)
    }
}

/// `φ(x) φ(y) / (a + x + y)`, `φ` 1 on `[0, 1]` with support `[-1/4, 5/4]`, read in `[-π, π)`.
#[derive(Debug, Clone, Copy)]
pub struct ThetaPlus {
    phi: Bump,
    pub a: f64,
}

impl ThetaPlus {
    pub fn new(a: f64) -> Result<Self> {
        if !(a >= 1.0 && a.is_finite()) {
            return Err(invalid("a", "must be at least 1"));
        }
        Ok(Self { phi: Bump::new(Span::new(0.0, 1.0), Span::new(-0.25, 1.25))?, a })
    }
}

impl PeriodicKernel for ThetaPlus {
    fn eval(&self, x: f64, y: f64) -> Complex64 {
        let x = wrap_centered(x);
        let y = wrap_centered(y);
        let w = self.phi.eval(x) * self.phi.eval(y);
        real(if w == 0.0 { 0.0 } else { w / (self.a + x + y) })
    }

    fn name(&self) -> String {
        format!("theta-plus(a={})", self.a)
    }
}

/// Parameters for catalog lookups; unused fields are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub theta: f64,
    pub shift: u32,
    pub a: f64,
    pub k: i64,
    pub l: i64,
    pub c: f64,
}

impl Default for KernelParams {
    fn default() -> Self {
        Self { theta: 0.5, shift: 0, a: 1.0, k: 1, l: 1, c: 3.0 }
    }
}

/// Looks up a kernel by name and wraps it at the given grid size.
pub fn catalog_kernel(name: &str, params: &KernelParams, grid_size: usize) -> Result<SmoothKernel> {
    let inner: Arc<dyn PeriodicKernel> = match name {
        "constant" => Arc::new(ConstantKernel),
        "plane-wave" => Arc::new(PlaneWave { k: params.k, l: params.l }),
        "cos-cos" => Arc::new(CosCosKernel),
        "rational" => {
            if !(params.c > 2.0) {
                return Err(invalid("c", "must exceed 2"));
            }
            Arc::new(RationalKernel { c: params.c })
        }
        "theta2-near" => Arc::new(Theta2Near::new()),
        "theta2-far" => Arc::new(Theta2Far::new(params.theta, params.shift)?),
        "theta-plus" => Arc::new(ThetaPlus::new(params.a)?),
        _ => return Err(invalid("kernel", format!("unknown kernel `{name}`"))),
    };
    SmoothKernel::new(inner, grid_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorizer::kernel::{build_factorization, sobolev_terms_closed_form, sobolev_terms_spectral};
    use crate::matcore::SchattenIndex;

    #[test]
    fn every_catalog_entry_is_periodic() {
        for name in CATALOG_NAMES {
            catalog_kernel(name, &KernelParams::default(), 64).unwrap();
        }
        assert!(catalog_kernel("nope", &KernelParams::default(), 64).is_err());
    }

    #[test]
    fn cut_off_kernels_match_their_formulas_inside_the_flat_zone() {
        let near = Theta2Near::new();
        assert!((near.eval(0.25, 1.5).re - 1.0 / (0.25 - 1.5)).abs() < 1e-15);
        let far = Theta2Far::new(0.5, 3).unwrap();
        let want = (4.0f64.sqrt() - 1.5f64.sqrt()) / (4.0 - 1.5);
        assert!((far.eval(1.0, 1.5).re - want).abs() < 1e-15);
        let plus = ThetaPlus::new(2.0).unwrap();
        assert!((plus.eval(0.5, 0.25).re - 1.0 / 2.75).abs() < 1e-15);
    }

    #[test]
    fn power_quotient_is_continuous_on_the_diagonal() {
        let a = 1.3;
        let d = power_quotient(a, a, 0.4);
        assert!((power_quotient(a, a * (1.0 + 1e-12), 0.4) - d).abs() < 1e-10);
    }

    #[test]
    fn plane_wave_partials_match_spectral_differentiation() {
        let k = catalog_kernel("plane-wave", &KernelParams { k: 2, l: -3, ..Default::default() }, 64).unwrap();
        let a = sobolev_terms_spectral(&k, 2).unwrap().total();
        let b = sobolev_terms_closed_form(&k, 2).unwrap().total();
        assert!((a - b).abs() < 1e-8 * b);
        // 2·9 + 9 + 2 + 1
        assert!((b - 30.0).abs() < 1e-9);
    }

    #[test]
    fn rational_kernel_factorization_converges() {
        let k = catalog_kernel("rational", &KernelParams::default(), 128).unwrap();
        let mut errs = alloc::vec::Vec::new();
        for cutoff in [4, 8, 16, 32] {
            errs.push(build_factorization(&k, 2, SchattenIndex::Finite(1.0), cutoff).unwrap().truncation_error);
        }
        assert!(errs.windows(2).all(|w| w[1] < w[0]));
    }
}
