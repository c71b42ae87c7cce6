//! Randomized and grid-based invariants across the public API.

use debtcrit::asymptotics::{e_asym, sigma_asym, solve_b_sigma};
use debtcrit::critical::{
    critical_from_aggregates, critical_sigma_chempot, critical_sigma_entropy, solvency_verdict,
    Verdict,
};
use debtcrit::fractional::{f_alpha, sigma_rhs_frac};
use debtcrit::maturity::{mixed_exact_path, short_dominant_approx, MixedPortfolio};
use debtcrit::parastat::{e1_exact, fit_params, sigma_rhs, solve_sigma, ParastatParams};
use debtcrit::portfolio::{normalize, scale_check, DebtRecord};
use debtcrit::sum::neumaier_sum;
use debtcrit::SolveConfig;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Amounts spanning six decades, durations spanning three.
fn debt_strategy(max_len: usize) -> impl Strategy<Value = Vec<DebtRecord>> {
    prop::collection::vec((-2.0..4.0f64, 0.0..3.0f64), 1..max_len).prop_map(|raw| {
        raw.into_iter()
            .enumerate()
            .map(|(i, (ae, de))| {
                DebtRecord::new(format!("d{i}"), 10f64.powf(ae), 10f64.powf(de))
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_is_permutation_invariant_bitwise(
        debts in debt_strategy(120),
        seed in any::<u64>(),
    ) {
        let base = normalize(&debts, 1).unwrap();
        let mut shuffled = debts.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let other = normalize(&shuffled, 1).unwrap();

        prop_assert_eq!(base.k, other.k);
        prop_assert_eq!(base.s_hat.to_bits(), other.s_hat.to_bits());
        prop_assert_eq!(base.sigma.to_bits(), other.sigma.to_bits());
        prop_assert_eq!(base.e_total.to_bits(), other.e_total.to_bits());
        prop_assert_eq!(base.e1.to_bits(), other.e1.to_bits());
        for (a, b) in base.slots.iter().zip(&other.slots) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn normalization_is_currency_invariant(
        debts in debt_strategy(60),
        ce in -9.0..9.0f64,
    ) {
        prop_assert!(scale_check(&debts, 10f64.powf(ce)).unwrap());
    }

    #[test]
    fn aggregates_satisfy_their_identities(debts in debt_strategy(120)) {
        let p = normalize(&debts, 1).unwrap();
        // σ of normalized values is the record count.
        prop_assert!((p.sigma - debts.len() as f64).abs() <= 1e-12 * debts.len() as f64);
        // E recomputed independently as Σ r_j·v_j matches the identity form.
        let direct = neumaier_sum(
            p.slots.iter().zip(&p.reverse_durations).map(|(v, r)| *r as f64 * v),
        );
        prop_assert!(rel(direct, p.e_total) <= 1e-12);
        // E sits inside the feasible window (σ, (k+1)σ/2] for any portfolio
        // with at least one occupied slot below the top duration.
        prop_assert!(p.e_total >= p.sigma - 1e-12 * p.sigma.abs());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn occupation_sum_cancels_termwise_at_unit_sigma(
        be in -3.0..1.0f64,
        ke in -2.0..1.0f64,
        k in 1u32..1000,
    ) {
        let p = ParastatParams::new(10f64.powf(be), 10f64.powf(ke), k).unwrap();
        prop_assert_eq!(sigma_rhs(1.0, &p), 0.0);
    }

    #[test]
    fn occupation_sum_is_suppressed_by_b_and_kappa(
        sigma in 1.1..5.0f64,
        ke in -1.5..0.7f64,
        k in 5u32..500,
    ) {
        let kappa = 10f64.powf(ke);
        // Stiffer books freeze: the excess over the frozen state decays as b
        // grows at fixed σ > 1, and likewise as κ grows.
        let mut prev = f64::INFINITY;
        for i in 0..12 {
            let b = 0.005 * 10f64.powf(i as f64 * 0.25);
            let v = sigma_rhs(sigma, &ParastatParams::new(b, kappa, k).unwrap());
            prop_assert!(v <= prev + 1e-13 * prev.abs().max(1.0));
            prev = v;
        }
        let mut prev = f64::INFINITY;
        for i in 0..12 {
            let kap = 0.01 * 10f64.powf(i as f64 * 0.3);
            let v = sigma_rhs(sigma, &ParastatParams::new(0.1, kap, k).unwrap());
            prop_assert!(v <= prev + 1e-13 * prev.abs().max(1.0));
            prev = v;
        }
    }

    #[test]
    fn verdict_respects_the_tolerance_band(
        s0e in -3.0..3.0f64,
        rtol in 1e-6..0.3f64,
    ) {
        let sigma0 = 10f64.powf(s0e);
        prop_assert_eq!(solvency_verdict(sigma0 * (1.0 + 2.0 * rtol), sigma0, rtol), Verdict::Bankrupt);
        prop_assert_eq!(solvency_verdict(sigma0 * (1.0 - 2.0 * rtol), sigma0, rtol), Verdict::Solvent);
        prop_assert_eq!(solvency_verdict(sigma0, sigma0, rtol), Verdict::Indeterminate);
    }

    #[test]
    fn entropy_route_critical_debt_is_linear_in_velocity(
        k in 2u32..1_000_000,
        ve in -3.0..3.0f64,
        c2 in -20i32..20,
    ) {
        let v = 10f64.powf(ve);
        let c = (c2 as f64).exp2();
        let base = critical_sigma_entropy(k, v).unwrap().value;
        let scaled = critical_sigma_entropy(k, c * v).unwrap().value;
        // Power-of-two scaling is exact in binary floating point.
        prop_assert_eq!(scaled.value.to_bits(), (c * base.value).to_bits());
        prop_assert_eq!(scaled.leading_order.to_bits(), (c * base.leading_order).to_bits());
    }

    #[test]
    fn energy_forms_agree_at_the_shared_root(
        be in -4.0..0.0f64,
        ke in -0.5..0.5f64,
        k in 50u32..100_000,
    ) {
        let e = e_asym(10f64.powf(be), 10f64.powf(ke), k).unwrap().value;
        prop_assert!(rel(e.value, e.unsimplified) <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mix_two_path_deviation_is_bounded_by_validity(
        m in 1_000u32..100_000,
        n_frac in 0.0..0.01f64,
        ratio in 100.0..10_000.0f64,
        s1e in -1.0..1.0f64,
        s2e in -1.0..1.0f64,
    ) {
        let n = ((m as f64 * n_frac) as u32).max(1);
        let p = MixedPortfolio::new(m, n, 10f64.powf(s1e), 10f64.powf(s2e), 1.0, ratio).unwrap();
        let a = short_dominant_approx(&p).unwrap().value;
        let exact = mixed_exact_path(&p).unwrap().value;
        let bound = 3.0 * a.validity;
        prop_assert!(rel(a.v, exact.v) <= bound);
        prop_assert!(rel(a.sigma0, exact.sigma0) <= bound);
    }
}

#[test]
fn fit_recovers_generating_parameters() {
    let cfg = SolveConfig::default();
    for (b, kappa, k) in [(0.02, 1.0, 500u32), (0.05, 0.5, 200), (0.01, 2.0, 1000)] {
        let p = ParastatParams::new(b, kappa, k).unwrap();
        let sigma = solve_sigma(&p, &cfg).unwrap();
        let e = (k as f64 + 1.0) * sigma - e1_exact(sigma, &p);
        let fit = fit_params(sigma, e, k, &cfg).unwrap();
        assert!(rel(fit.params.b, b) <= 1e-6, "b at ({b},{kappa},{k}): {}", fit.params.b);
        assert!(rel(fit.params.kappa, kappa) <= 1e-6);
    }
}

#[test]
fn fit_recovers_parameters_on_a_large_slow_book() {
    let cfg = SolveConfig::default();
    let p = ParastatParams::new(0.001, 0.5, 10_000).unwrap();
    let sigma = solve_sigma(&p, &cfg).unwrap();
    let e = (10_000f64 + 1.0) * sigma - e1_exact(sigma, &p);
    let fit = fit_params(sigma, e, 10_000, &cfg).unwrap();
    assert!(rel(fit.params.b, 0.001) <= 1e-6);
    assert!(rel(fit.params.kappa, 0.5) <= 1e-6);
}

#[test]
fn entropy_and_chempot_critical_debts_coincide_to_second_order() {
    let cfg = SolveConfig::default();
    for k in [100u32, 1000, 10_000] {
        let s_entropy = critical_sigma_entropy(k, 1.0).unwrap().value.value;
        let s_chempot = critical_sigma_chempot(k, 1.0, &cfg).unwrap();
        assert!(
            (s_entropy - s_chempot).abs() <= 5.0 / (k as f64 * k as f64),
            "k={k}: {s_entropy} vs {s_chempot}"
        );
    }
}

#[test]
fn regime_measure_moves_with_book_shape() {
    let cfg = SolveConfig::default();
    // B grows with the number of creditors...
    let mut prev = 0.0;
    for k in [10u32, 100, 1000, 10_000, 100_000] {
        let b = solve_b_sigma(k, 1.0, &cfg).unwrap().value;
        assert!(b > prev);
        prev = b;
    }
    // ...and shrinks as the spectrum shifts up.
    let mut prev = f64::INFINITY;
    for kappa in [0.3, 1.0, 3.0, 10.0] {
        let b = solve_b_sigma(10_000, kappa, &cfg).unwrap().value;
        assert!(b < prev);
        prev = b;
    }
    // Aggregate debt falls as money stiffens.
    let mut prev = f64::INFINITY;
    for be in [-3.0, -2.0, -1.0, 0.0] {
        let s = sigma_asym(10f64.powf(be), 1.0, 100).unwrap().value;
        assert!(s < prev);
        prev = s;
    }
}

#[test]
fn energy_density_factor_rises_across_its_window() {
    // f grows strictly over the window, slowest near the left end where it
    // leaves its α → 0 limit of 1.
    let mut prev = 0.0;
    let mut alpha = 0.1;
    while alpha <= 1.7 {
        let f = f_alpha(alpha).unwrap();
        assert!(f > prev, "f({alpha}) = {f} did not increase");
        prev = f;
        alpha += 0.05;
    }
    for alpha in [0.01, 0.05, 0.11] {
        assert!(f_alpha(alpha).unwrap() > 1.0);
    }
}

#[test]
fn weighted_occupation_sum_approaches_the_flat_one_as_alpha_nears_one() {
    let p = ParastatParams::new(0.5, 1.0, 5).unwrap();
    let flat = sigma_rhs(2.0, &p);
    let mut prev = f64::INFINITY;
    for alpha in [0.9, 0.99, 0.999] {
        let dev = (sigma_rhs_frac(2.0, &p, alpha).unwrap() - flat).abs();
        assert!(dev < prev);
        prev = dev;
    }
    assert!(prev <= 1e-2 * flat.abs());
}

#[test]
fn aggregate_route_velocity_matches_direct_construction() {
    // V = (E − kσ)/k lands exactly on 10 for these aggregates.
    let agg = critical_from_aggregates(2000.0, 10.0, 100).unwrap();
    assert_eq!(agg.v, 10.0);
    let direct = critical_sigma_entropy(100, agg.v).unwrap().value.leading_order;
    assert_eq!(agg.sigma0.to_bits(), direct.to_bits());
}
