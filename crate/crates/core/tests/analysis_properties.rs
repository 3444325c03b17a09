use proptest::prelude::*;
use qbf::dynamics::{evolve_observable, lieb_robinson_profile, ChainHamiltonian};
use qbf::fkn::{fkn_infty_check, nearest_dictator, random_infty_fkn_instance, theta_family};
use qbf::influence::{
    anticommuting_kkl_check, influences, poincare_check, talagrand_check, total_influence, Differentiable,
};
use qbf::noise::{apply_noise, depolarize, hypercontractivity_check, low_degree_norm_check, rank_bound_check};
use qbf::pauli::{fourier_transform, is_quantum_boolean, schatten_norm, DenseOperator};
use qbf::random::{
    random_anticommuting_boolean, random_degree_hermitian, random_hermitian, random_quantum_boolean,
    random_single_qubit_boolean, random_traceless_hermitian,
};
use qbf::Pauli;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn channel_matches_multiplier(n in 1usize..=3, seed in any::<u64>(), k in 0usize..=8) {
        let eps = -1.0 / 3.0 + k as f64 * (4.0 / 3.0) / 8.0;
        let f = random_hermitian::<f64, _>(n, &mut rng(seed));
        let channel = fourier_transform(&depolarize(&f, eps).unwrap());
        let multiplier = apply_noise(&fourier_transform(&f), eps).unwrap();
        prop_assert!(channel.max_abs_diff(&multiplier).unwrap() <= 1e-12);
    }

    #[test]
    fn noise_contracts(n in 1usize..=3, seed in any::<u64>(), eps in 0.0f64..=1.0, p in 1.0f64..8.0) {
        let f = random_hermitian::<f64, _>(n, &mut rng(seed));
        let noisy = apply_noise(&fourier_transform(&f), eps).unwrap().to_operator();
        prop_assert!(schatten_norm(&noisy, p).unwrap() <= schatten_norm(&f, p).unwrap() + 1e-12);
    }

    #[test]
    fn noise_is_self_adjoint(n in 1usize..=3, seed in any::<u64>(), eps in -1.0f64..=1.0) {
        let mut r = rng(seed);
        let f = random_hermitian::<f64, _>(n, &mut r);
        let g = random_hermitian::<f64, _>(n, &mut r);
        let tf = apply_noise(&fourier_transform(&f), eps).unwrap().to_operator();
        let tg = apply_noise(&fourier_transform(&g), eps).unwrap().to_operator();
        prop_assert!((tf.inner_product(&g).unwrap() - f.inner_product(&tg).unwrap()).norm() <= 1e-12);
    }

    #[test]
    fn hypercontractive_regime_holds(n in 1usize..=3, seed in any::<u64>(), p in 1.0f64..=2.0, q in 2.0f64..10.0) {
        let f = random_hermitian::<f64, _>(n, &mut rng(seed));
        let eps = ((p - 1.0) / (q - 1.0)).sqrt();
        let r = hypercontractivity_check(&f, p, q, eps).unwrap();
        prop_assert!(r.in_theorem_regime && r.margin >= -1e-9, "{:?}", r);
    }

    #[test]
    fn low_degree_bounds_hold(n in 1usize..=4, seed in any::<u64>(), d in 0usize..=3, q in 2.0f64..8.0) {
        let d = d.min(n);
        let f = random_degree_hermitian::<f64, _>(n, d, &mut rng(seed));
        let r = low_degree_norm_check(&f, q).unwrap();
        prop_assert!(r.holds(1e-10), "{:?}", r);
        prop_assert!(rank_bound_check(&f).unwrap().holds(1e-10));
    }

    #[test]
    fn dense_and_spectral_derivatives_agree(n in 1usize..=4, seed in any::<u64>(), mask in 0usize..16) {
        let f = random_hermitian::<f64, _>(n, &mut rng(seed));
        let set: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let dense = fourier_transform(&f.derivative_set(&set).unwrap());
        let spectral = fourier_transform(&f).derivative_set(&set).unwrap();
        prop_assert!(dense.max_abs_diff(&spectral).unwrap() <= 1e-12);
    }

    #[test]
    fn influences_of_booleans_are_bounded(n in 1usize..=4, seed in any::<u64>()) {
        let f = random_quantum_boolean::<f64, _>(n, false, &mut rng(seed));
        let spec = fourier_transform(&f);
        for i in influences(&spec) {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&i));
        }
        prop_assert!(total_influence(&spec) <= n as f64 * spec.total_weight() + 1e-10);
    }

    #[test]
    fn poincare_inequality(n in 1usize..=4, seed in any::<u64>(), traceless in any::<bool>()) {
        let mut r = rng(seed);
        if traceless {
            let f = random_quantum_boolean::<f64, _>(n, true, &mut r);
            let rep = poincare_check(&f, 1e-9).unwrap();
            prop_assert!(rep.traceless_boolean && rep.max_influence >= 1.0 / n as f64 - 1e-10);
        } else {
            let f = random_hermitian::<f64, _>(n, &mut r);
            prop_assert!(poincare_check(&f, 1e-9).unwrap().margin >= -1e-10);
        }
    }

    #[test]
    fn talagrand_margin(n in 1usize..=4, seed in any::<u64>()) {
        let f = random_traceless_hermitian::<f64, _>(n, &mut rng(seed));
        prop_assert!(talagrand_check(&f, 1e-9).unwrap().margin >= -1e-9);
    }

    #[test]
    fn anticommuting_kkl(n in 1usize..=4, seed in any::<u64>(), m in 1usize..=9) {
        let mut r = rng(seed);
        let (_, f) = random_anticommuting_boolean::<f64, _>(n, m, &mut r).unwrap();
        let rep = anticommuting_kkl_check(&f, 1e-9).unwrap();
        prop_assert!(rep.holds(1e-9), "{:?}", rep);
    }

    #[test]
    fn nearest_dictator_is_boolean_and_local(n in 1usize..=3, seed in any::<u64>(), theta in 0.0f64..0.5) {
        let mut r = rng(seed);
        let f = if n == 2 && seed % 2 == 0 {
            theta_family(theta).unwrap()
        } else {
            random_quantum_boolean::<f64, _>(n, true, &mut r)
        };
        if let Ok(fit) = nearest_dictator(&f, 1e-9) {
            prop_assert!(is_quantum_boolean(&fit.dictator, 1e-9));
            let support = fourier_transform(&fit.dictator).support();
            prop_assert_eq!(support.len(), 1);
        }
    }

    #[test]
    fn dictator_distance_vanishes_on_dictators(n in 1usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let j = r.random_range(0..n);
        let single = random_single_qubit_boolean::<f64, _>(&mut r);
        let f = DenseOperator::identity(j).kron(&single).kron(&DenseOperator::identity(n - j - 1));
        let fit = nearest_dictator(&f, 1e-9).unwrap();
        prop_assert!(fit.distance <= 1e-12 && fit.qubit == j);
        let g = random_quantum_boolean::<f64, _>(n.max(2), true, &mut r);
        if let Ok(fit) = nearest_dictator(&g, 1e-9) {
            prop_assert!(fit.distance > 1e-9);
        }
    }

    #[test]
    fn infty_fkn(n in 1usize..=4, seed in any::<u64>()) {
        let (f, g, eps) = random_infty_fkn_instance::<f64, _>(n, &mut rng(seed)).unwrap();
        let rep = fkn_infty_check(&f, &g, eps, 1e-9).unwrap();
        prop_assert!(rep.f_h_distance <= 2.0 * eps + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn evolution_preserves_booleanity(n in 2usize..=5, seed in any::<u64>(), t in 0.0f64..2.0, s in 1u8..=3) {
        let mut r = rng(seed);
        let h = ChainHamiltonian::<f64>::random(n, &mut r).unwrap();
        let j = r.random_range(0..n);
        let e = evolve_observable(&h, j, Pauli::from_label(s).unwrap(), t).unwrap();
        prop_assert!(is_quantum_boolean(&e, 1e-9));
    }

    #[test]
    fn full_window_has_no_discrepancy(n in 2usize..=5, seed in any::<u64>(), t in 0.0f64..2.0) {
        let mut r = rng(seed);
        let h = ChainHamiltonian::<f64>::random(n, &mut r).unwrap();
        let j = r.random_range(0..n);
        let p = lieb_robinson_profile(&h, j, Pauli::X, t, &[0, 1, n]).unwrap();
        prop_assert!(p.points.last().unwrap().discrepancy == 0.0 || p.points.last().unwrap().discrepancy < 1e-24);
    }
}
