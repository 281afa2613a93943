//! Seeded random ensembles.
//!
//! Every search in the crate derives the generator for trial `t` from
//! `seed ^ t`, so serial, parallel and resumed runs see identical inputs.

use nalgebra::DVector;
use num_complex::Complex64;
// Float supplies libm-backed math without std; the lint cannot see that use.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matcore::CMatrix;

pub type TrialRng = ChaCha8Rng;

/// Generator for trial `index` of a run seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed ^ index)
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Complex entry with independent standard normal parts.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re = normal(rng);
    Complex64::new(re, normal(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn real_gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(normal(rng), 0.0))
}

pub fn gaussian_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DVector<Complex64> {
    DVector::from_fn(n, |_, _| complex_normal(rng))
}

/// GUE-style sample `(G + G*) / 2`.
pub fn gaussian_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Haar unitary: QR of a complex Ginibre matrix with the phases of `diag(R)` removed.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = gaussian_matrix(n, n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Positive semidefinite `G G* / n` with `G` of size `n × rank`.
pub fn random_psd<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(n, rank.max(1), rng);
    let m = &g * g.adjoint();
    
    (&m + m.adjoint()).scale(0.5 / n.max(1) as f64)
}

/// Orthogonal projection onto the span of `rank` random vectors.
pub fn random_projection<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> CMatrix {
    let u = random_unitary(n, rng);
    let cols = u.columns(0, rank.min(n));
    cols * cols.adjoint()
}

/// Uniform draw from `[lo, hi)`.
pub fn uniform<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}

/// Log-uniform draw from `[lo, hi)`, `0 < lo < hi`.
pub fn log_uniform<R: Rng + ?Sized>(lo: f64, hi: f64, rng: &mut R) -> f64 {
    (uniform(lo.ln(), hi.ln(), rng)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rng_for(1, 2);
        for n in 1..7 {
            let u = random_unitary(n, &mut rng);
            assert!((u.adjoint() * &u - CMatrix::identity(n, n)).norm() < 1e-12);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = gaussian_hermitian(4, &mut rng_for(9, 3));
        let b = gaussian_hermitian(4, &mut rng_for(9, 3));
        assert_eq!(a, b);
        let p = random_projection(5, 2, &mut rng_for(1, 1));
        assert!((&p * &p - &p).norm() < 1e-12);
    }
}
