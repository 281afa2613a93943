//! Certified `p`-cb bounds for Schur multipliers with smooth symbols.
//!
//! A `2π`-periodic kernel is expanded in Fourier modes and regrouped as
//! `K(x,y) = f_0(x) + Σ_{l≠0} |l|^{-d} f_l(x) e^{ily}` with `‖f_l‖_∞`
//! controlled by four L2 norms of derivatives (the Sobolev constant). The
//! `p`-triangle inequality then bounds the multiplier for every `d > 1/p`.
//! [`dyadic`] glues such bounds over dyadic blocks.

pub mod bump;
pub mod catalog;
pub mod dyadic;
pub mod fft;
pub mod kernel;

pub use bump::{bump_function, Bump, Span};
pub use catalog::{catalog_kernel, KernelParams, CATALOG_NAMES};
pub use dyadic::{
    case_one_partition, default_order, dyadic_block_bound, plus_kernel_bound, sum_quadrant_bound, theta2_base_bound,
    CaseOneCell, DyadicBlock, Interval, PlusBoundLadder, Theta2Bound,
};
pub use kernel::{
    build_factorization, certified_pcb_bound, fourier_coefficients, stated_prefactor, sobolev_constant,
    FourierCoefficients, PeriodicKernel, RankOneFactorization, SmoothKernel, SobolevTerms, C_CS,
};
