//! Property-based checks of the algebraic invariants: jet arithmetic laws,
//! symplectic purity conservation, Bogoliubov normalization, and config
//! round-tripping.

use proptest::prelude::*;

use casimir::config::{Grid, Scenario, ScenarioConfig};
use casimir::dce1d;
use casimir::gaussian::{self, CovarianceMatrix};
use casimir::jet::Jet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn jets_close(a: &Jet, b: &Jet, tol: f64) -> bool {
    a.order() == b.order()
        && a.coeffs
            .iter()
            .zip(&b.coeffs)
            .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
}

fn small_jet(order: usize) -> impl Strategy<Value = Jet> {
    prop::collection::vec(-2.0..2.0f64, order + 1)
        .prop_map(|coeffs| Jet::from_coeffs(coeffs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jet_multiplication_distributes(a in small_jet(4), b in small_jet(4), c in small_jet(4)) {
        let lhs = &(&a + &b) * &c;
        let rhs = &(&a * &c) + &(&b * &c);
        prop_assert!(jets_close(&lhs, &rhs, 1e-12));
    }

    #[test]
    fn jet_exp_satisfies_its_ode(a in small_jet(5)) {
        // (exp a)' = a' · exp a, checked on the truncated series
        let e = a.exp();
        let lhs = e.differentiate();
        let rhs = &a.differentiate() * &e.truncate(e.order() - 1);
        prop_assert!(jets_close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn jet_recip_inverts(mut coeffs in prop::collection::vec(-2.0..2.0f64, 4)) {
        coeffs[0] = coeffs[0].signum() * (coeffs[0].abs() + 0.5);
        let a = Jet::from_coeffs(coeffs);
        let product = &a * &a.recip();
        prop_assert!((product.coeffs[0] - 1.0).abs() < 1e-12);
        prop_assert!(product.coeffs[1..].iter().all(|c| c.abs() < 1e-10));
    }

    #[test]
    fn random_symplectic_preserves_purity(seed in 0u64..1000, n_modes in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = gaussian::random_symplectic(n_modes, &mut rng);
        let omega = gaussian::standard_form(n_modes);
        prop_assert!(gaussian::is_symplectic(&m, &omega, 1e-8));
        let vacuum = CovarianceMatrix::vacuum(n_modes);
        let evolved = CovarianceMatrix::from_matrix(&m * &vacuum.matrix * m.transpose()).unwrap();
        prop_assert!(evolved.is_pure(1e-8));
        let renyi = gaussian::renyi_entropy(&evolved, &omega).unwrap();
        prop_assert!(renyi.abs() < 1e-7);
    }

    #[test]
    fn ladder_sum_matches_covariance(tau in 0.25..1.0f64) {
        // Σ_n β_{n1}² from the ladder equals (G¹² − 1)/2 from the closed
        // form, up to the ladder's truncation tail (41 rungs are reliable
        // for τ ≳ 0.25; see build_ladder)
        let ladder = dce1d::build_ladder(tau, 41).unwrap();
        let n1 = dce1d::particle_number_1d(&ladder);
        let cov = dce1d::covariance_1d(tau).unwrap();
        let expect = (cov.g12 - 1.0) / 2.0;
        prop_assert!((n1 - expect).abs() < 1e-6 + 0.02 * expect.abs());
    }

    #[test]
    fn shallow_ladder_matches_covariance_at_small_tau(tau in 0.05..0.25f64) {
        let ladder = dce1d::build_ladder(tau, 21).unwrap();
        let n1 = dce1d::particle_number_1d(&ladder);
        let cov = dce1d::covariance_1d(tau).unwrap();
        let expect = (cov.g12 - 1.0) / 2.0;
        prop_assert!((n1 - expect).abs() < 1e-5 + 0.02 * expect.abs());
    }

    #[test]
    fn reduced_state_is_physical(tau in 0.0..6.0f64) {
        let cov = dce1d::covariance_1d(tau).unwrap();
        prop_assert!(cov.minus_det() >= 1.0 - 1e-9);
        let renyi = dce1d::renyi_1d(tau).unwrap();
        let entropy = dce1d::entropy_1d(tau).unwrap();
        prop_assert!(renyi >= 0.0);
        prop_assert!(entropy + 1e-12 >= renyi);
    }

    #[test]
    fn config_text_round_trip(
        epsilon in 0.0..0.5f64,
        start in 0.0..10.0f64,
        span in 0.1..100.0f64,
        count in 2usize..1000,
        seed in any::<u64>(),
        lengths in prop::collection::vec(0.1..5.0f64, 1..4),
    ) {
        let mut config = ScenarioConfig::defaults(Scenario::DceNd);
        config.epsilon = epsilon;
        config.grid = Grid { start, stop: start + span, count };
        config.seed = seed;
        config.lengths = lengths;
        let text = config.to_file_string();
        let back = ScenarioConfig::from_file_str(&text, Scenario::Dce1d).unwrap();
        prop_assert_eq!(config, back);
    }
}
