use fracpow_core::lorentz::{
    k_functional_profile, kfonc_check, lorentz_norm, rearrangement, selfadjoint_k_gap, weak_lp_check, KFunctionalQuery,
    RearrangementProfile,
};
use fracpow_core::matcore::{schatten_norm, spectral_decompose, HermitianOperand, SchattenIndex};
use fracpow_core::random::{gaussian_hermitian, gaussian_matrix, rng_for, uniform};
use proptest::prelude::*;

fn idx(p: f64) -> SchattenIndex {
    SchattenIndex::new(p).unwrap()
}

// Gram-matrix oracle: squared singular values are the eigenvalues of a*a.
#[test]
fn rearrangement_matches_the_gram_spectrum() {
    let mut rng = rng_for(31, 0);
    let a = gaussian_matrix(4, 4, &mut rng);
    let gram = spectral_decompose(&(a.adjoint() * &a)).unwrap();
    let mu = rearrangement(&a).unwrap();
    for (s, l) in mu.values().iter().zip(gram.eigenvalues()) {
        assert!((s * s - l).abs() < 1e-10);
    }
}

#[test]
fn k_functional_is_concave_and_nondecreasing_in_t() {
    let mu = RearrangementProfile::new(vec![3.0, 1.5, 1.0, 0.4, 0.1], 1.0).unwrap();
    for (p0, p1) in [(idx(1.0), SchattenIndex::Infinity), (idx(0.5), idx(2.0)), (idx(1.0), idx(2.0))] {
        let ts: Vec<f64> = (0..20).map(|i| 10f64.powf(-2.0 + 4.0 * i as f64 / 19.0)).collect();
        let ks: Vec<f64> = ts.iter().map(|&t| k_functional_profile(&mu, &KFunctionalQuery::new(t, p0, p1).unwrap(), 64).unwrap().value).collect();
        let tol = 1e-6 * ks.last().unwrap();
        assert!(ks.windows(2).all(|w| w[1] >= w[0] - tol), "{ks:?}");
        for i in 1..19 {
            // Slopes of a concave function do not increase.
            let left = (ks[i] - ks[i - 1]) / (ts[i] - ts[i - 1]);
            let right = (ks[i + 1] - ks[i]) / (ts[i + 1] - ts[i]);
            assert!(right <= left + tol / (ts[i + 1] - ts[i]), "p0={p0:?} i={i}");
        }
    }
}

#[test]
fn selfadjoint_factor_two_on_random_diagonals() {
    let mut rng = rng_for(40, 0);
    for _ in 0..10 {
        let d: Vec<f64> = (0..5).map(|_| uniform(-2.0, 2.0, &mut rng)).collect();
        let x = HermitianOperand::diagonal(&d).unwrap();
        let gap = selfadjoint_k_gap(&x, &KFunctionalQuery::new(0.7, idx(0.5), idx(2.0)).unwrap(), 32).unwrap();
        assert_eq!(gap.factor, 2.0);
        assert!(gap.holds && gap.k_t <= gap.k_sa + 1e-9);
    }
}

#[test]
fn interpolation_sweeps_stay_finite() {
    let mut rng = rng_for(41, 0);
    for _ in 0..4 {
        let x = spectral_decompose(&gaussian_hermitian(5, &mut rng)).unwrap();
        let y = spectral_decompose(&gaussian_hermitian(5, &mut rng)).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let r = kfonc_check(&x, &y, idx(0.5), idx(2.0), 0.5, true, t, 32).unwrap();
            assert!(r.value().is_finite() && r.value() > 0.0);
        }
        for q in [idx(0.5), idx(1.0), SchattenIndex::Infinity] {
            let r = weak_lp_check(&x, &y, 1.0, q, 0.5, false).unwrap();
            assert!(r.value().is_finite() && r.value() > 0.0);
        }
    }
    // Commuting diagonals: the scalar profiles give the same answer as the matrices.
    let x = HermitianOperand::diagonal(&[2.0, 0.5, 0.0]).unwrap();
    let y = HermitianOperand::diagonal(&[0.0, 1.5, 1.0]).unwrap();
    let r = kfonc_check(&x, &y, idx(1.0), idx(2.0), 0.5, false, 1.0, 64).unwrap();
    assert!(r.value().is_finite() && !r.degenerate);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lorentz_pp_is_schatten(seed in any::<u64>(), n in 1usize..6, pi in 0usize..3) {
        let p = [0.5, 1.0, 2.0][pi];
        let mut rng = rng_for(seed, 0);
        let a = gaussian_matrix(n, n, &mut rng);
        let l = lorentz_norm(&rearrangement(&a).unwrap(), p, idx(p)).unwrap();
        let s = schatten_norm(&a, idx(p), 1.0).unwrap();
        prop_assert!((l - s).abs() <= 1e-12 * s);
    }

    #[test]
    fn grid_refinement_never_increases_k(seed in any::<u64>(), n in 1usize..5, t in 0.05f64..20.0) {
        let mut rng = rng_for(seed, 1);
        let vals: Vec<f64> = (0..n).map(|_| uniform(0.0, 3.0, &mut rng)).collect();
        let mu = RearrangementProfile::new(vals, 1.0).unwrap();
        let q = KFunctionalQuery::new(t, idx(0.5), idx(2.0)).unwrap();
        let g = k_functional_profile(&mu, &q, 16).unwrap().value;
        let g2 = k_functional_profile(&mu, &q, 32).unwrap().value;
        prop_assert!(g2 <= g + 1e-12);
    }
}
