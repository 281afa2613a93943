use fracpow_core::factorizer::{
    build_factorization, catalog_kernel, dyadic_block_bound, fourier_coefficients, plus_kernel_bound, sum_quadrant_bound,
    theta2_base_bound, KernelParams, PlusBoundLadder,
};
use fracpow_core::matcore::SchattenIndex;
use fracpow_core::schur::hadamard_norm_lower;
use fracpow_core::CMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

fn grid_points(n: usize) -> Vec<f64> {
    (0..n).map(|i| 2.0 * PI * i as f64 / n as f64).collect()
}

#[test]
fn reconstruction_error_vanishes_as_the_cutoff_grows() {
    let k = catalog_kernel("rational", &KernelParams::default(), 512).unwrap();
    let xs = grid_points(512);
    let exact = CMatrix::from_fn(512, 512, |i, j| k.eval(xs[i], xs[j]));
    let mut errs = Vec::new();
    for cutoff in [32, 64, 128, 256] {
        let f = build_factorization(&k, 2, SchattenIndex::Finite(1.0), cutoff).unwrap();
        let err = (f.eval_grid(&xs, &xs) - &exact).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        errs.push((err, f.truncation_error, f.certified_bound));
    }
    assert!(errs.windows(2).all(|w| w[1].0 <= w[0].0 + 1e-13), "{errs:?}");
    assert!(errs[3].0 <= 1e-6);
    for (err, trunc, _) in &errs {
        assert!(err <= trunc, "{err} > {trunc}");
    }
}

#[test]
fn factorization_reproduces_the_fourier_series() {
    let k = catalog_kernel("cos-cos", &KernelParams::default(), 64).unwrap();
    let f = build_factorization(&k, 2, SchattenIndex::Finite(1.0), 8).unwrap();
    // cos x cos y has four modes of size 1/4.
    let c = fourier_coefficients(&k);
    assert!((c.get(1, 1).re - 0.25).abs() < 1e-14 && (c.get(-1, 1).re - 0.25).abs() < 1e-14);
    for (x, y) in [(0.3, 1.1), (2.0, -0.4), (5.9, 3.3)] {
        assert!((f.eval(x, y) - Complex64::new(f64::cos(x) * f64::cos(y), 0.0)).norm() < 1e-12);
    }
}

#[test]
fn empirical_hadamard_norm_sits_below_the_certificate() {
    for name in ["rational", "theta-plus", "theta2-far"] {
        let k = catalog_kernel(name, &KernelParams::default(), 512).unwrap();
        let f = build_factorization(&k, 3, SchattenIndex::Finite(0.5), 256).unwrap();
        let xs: Vec<f64> = (0..6).map(|i| 0.3 + 0.45 * i as f64).collect();
        let m = CMatrix::from_fn(6, 6, |i, j| k.eval(xs[i], xs[j]));
        let est = hadamard_norm_lower(&m, SchattenIndex::Finite(0.5), 4, 1, &[]).unwrap().with_upper(f.certified_bound);
        assert!(est.is_sandwiched(), "{name}");
    }
}

#[test]
fn dyadic_blocks_scale_exactly() {
    for p in [SchattenIndex::Finite(0.5), SchattenIndex::Finite(1.0)] {
        for theta in [0.25, 0.5, 0.75] {
            let b0 = dyadic_block_bound(theta, p, 0, 3.7).unwrap().bound;
            for k in 1..=20 {
                let bk = dyadic_block_bound(theta, p, k, 3.7).unwrap().bound;
                let want = 2f64.powf(-(k as f64) * (theta - 1.0));
                assert!((bk / b0 - want).abs() <= 1e-12 * want);
            }
        }
    }
}

#[test]
fn plus_kernel_bound_decays_like_one_over_a() {
    for p in [SchattenIndex::Finite(0.5), SchattenIndex::Finite(1.0)] {
        let ladder = PlusBoundLadder::new(p).unwrap();
        let scaled: Vec<f64> = [1.0, 2.0, 5.0, 10.0, 100.0].iter().map(|&a| a * ladder.bound(a).unwrap()).collect();
        // Rounding of (best / a) · a is allowed a few ulps.
        assert!(scaled.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-14)), "{scaled:?}");
        assert_eq!(plus_kernel_bound(5.0, p).unwrap(), ladder.bound(5.0).unwrap());
    }
}

#[test]
fn quadrant_and_theta2_bounds_are_finite_and_scale() {
    let p = SchattenIndex::Finite(1.0);
    let ladder = PlusBoundLadder::new(p).unwrap();
    let theta = 0.5;
    let one = sum_quadrant_bound(1.0, 1.0, theta, p, &ladder).unwrap();
    let big = sum_quadrant_bound(16.0, 16.0, theta, p, &ladder).unwrap();
    assert!(one.is_finite() && one > 0.0);
    // Both variables scale together, so the bound picks up 16^{θ-1}.
    assert!((big / one - 16f64.powf(theta - 1.0)).abs() < 1e-12);
    let t2 = theta2_base_bound(theta, SchattenIndex::Finite(0.5), 4).unwrap();
    assert!(t2.combined.is_finite() && t2.combined >= t2.near.max(t2.far));
}
