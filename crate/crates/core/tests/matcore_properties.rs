use fracpow_core::matcore::{apply_calculus, p_triangle_defect, schatten_norm, spectral_decompose, SchattenIndex, SignedPowerFunction};
use fracpow_core::random::{gaussian_hermitian, gaussian_matrix, random_unitary, rng_for};
use fracpow_core::CMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn idx(p: f64) -> SchattenIndex {
    SchattenIndex::new(p).unwrap()
}

fn all_p() -> Vec<SchattenIndex> {
    vec![idx(0.3), idx(0.5), idx(1.0), idx(2.0), SchattenIndex::Infinity]
}

fn trace(a: &CMatrix) -> Complex64 {
    (0..a.nrows()).map(|i| a[(i, i)]).sum()
}

// Power sums of the eigenvalues equal traces of powers (Newton's identities),
// which pins the spectrum without any eigensolver.
#[test]
fn eigenvalues_match_trace_powers() {
    let mut rng = rng_for(77, 0);
    for n in 1..=7 {
        let a = gaussian_hermitian(n, &mut rng);
        let x = spectral_decompose(&a).unwrap();
        let mut power = CMatrix::identity(n, n);
        for k in 1..=n {
            power = &power * &a;
            let want = trace(&power);
            let got: f64 = x.eigenvalues().iter().map(|l| l.powi(k as i32)).sum();
            let scale = x.spectral_radius().powi(k as i32) * n as f64;
            assert!(want.im.abs() < 1e-10 * scale.max(1.0));
            assert!((got - want.re).abs() < 1e-10 * scale.max(1.0), "n={n} k={k}");
        }
    }
}

#[test]
fn p_triangle_holds_on_random_instances() {
    for (j, p) in [0.3, 0.5, 0.8, 1.0].into_iter().enumerate() {
        let mut rng = rng_for(1000 + j as u64, 0);
        for i in 0..1000 {
            let n = 1 + i % 5;
            let parts: Vec<CMatrix> = (0..2 + i % 3).map(|_| gaussian_matrix(n, n, &mut rng)).collect();
            let scale: f64 = parts.iter().map(|m| schatten_norm(m, idx(p), 1.0).unwrap().powf(p)).sum();
            let d = p_triangle_defect(&parts, idx(p)).unwrap();
            assert!(d >= -1e-9 * scale, "p={p} instance {i}: {d}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn schatten_norms_are_unitarily_invariant(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = rng_for(seed, 0);
        let a = gaussian_matrix(n, n, &mut rng);
        let u = random_unitary(n, &mut rng);
        let v = random_unitary(n, &mut rng);
        let b = &u * &a * &v;
        for p in all_p() {
            let na = schatten_norm(&a, p, 1.0).unwrap();
            let nb = schatten_norm(&b, p, 1.0).unwrap();
            prop_assert!((na - nb).abs() <= 1e-10 * na.max(1.0));
        }
    }

    #[test]
    fn calculus_is_theta_homogeneous(seed in any::<u64>(), n in 1usize..7, theta in 0.05f64..0.95, lambda in 0.01f64..100.0, signed in any::<bool>()) {
        let mut rng = rng_for(seed, 1);
        let a = gaussian_hermitian(n, &mut rng);
        let f = SignedPowerFunction::new(theta, signed).unwrap();
        let fx = apply_calculus(&spectral_decompose(&a).unwrap(), &f);
        let fl = apply_calculus(&spectral_decompose(&a.scale(lambda)).unwrap(), &f);
        let diff = (fl.entries() - fx.entries().scale(lambda.powf(theta))).norm();
        prop_assert!(diff <= 1e-10 * fl.entries().norm().max(1.0));
    }

    #[test]
    fn calculus_composes(seed in any::<u64>(), n in 1usize..7, t1 in 0.1f64..0.95, t2 in 0.1f64..0.95, signed in any::<bool>()) {
        let mut rng = rng_for(seed, 2);
        let x = spectral_decompose(&gaussian_hermitian(n, &mut rng)).unwrap();
        let f1 = SignedPowerFunction::new(t1, signed).unwrap();
        let f2 = SignedPowerFunction::new(t2, signed).unwrap();
        let f12 = SignedPowerFunction::new(t1 * t2, signed).unwrap();
        let twice = apply_calculus(&apply_calculus(&x, &f1), &f2);
        let once = apply_calculus(&x, &f12);
        prop_assert!((twice.entries() - once.entries()).norm() <= 1e-9 * once.entries().norm().max(1.0));
    }
}
