//! Finite-dimensional laboratory for Hölder estimates of the fractional
//! power maps `|x|^θ` and `sgn(x)|x|^θ` on Schatten classes `S^p`, `0 < p ≤ ∞`.
//!
//! Everything here operates on dense complex matrices, where the trace,
//! spectral projections and quasi-norms are exactly computable:
//!
//! * [`matcore`]: spectral decomposition, functional calculus, Schatten quasi-norms.
//! * [`schur`]: Schur multiplier symbols, their action in spectral coordinates,
//!   divided differences and witnessed lower bounds for multiplier norms.
//! * [`factorizer`]: Fourier/Sobolev certification of smooth kernels as
//!   `p`-completely bounded multipliers, plus the dyadic block assembly.
//! * [`verifier`]: ratio searches for the Hölder, commutator and Mazur-map inequalities.
//! * [`lorentz`]: decreasing rearrangements, Lorentz quasi-norms and K-functionals.
//! * [`kernelspec`]: the spectrum of the integral operator with kernel `e^{-|x-y|}` on `[0,1]`.
//!
//! The crate is `no_std` and only needs an allocator. IO, serialization and
//! the command line live in the companion `fracpow-lab` crate.

#![no_std]
// `!(a > b)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod factorizer;
pub mod kernelspec;
pub mod lorentz;
pub mod matcore;
pub mod quadrature;
pub mod random;
pub mod schur;
pub mod verifier;

pub use error::{Error, Result};
pub use matcore::{CMatrix, HermitianOperand, SchattenIndex, SignedPowerFunction};
