//! Structural invariants of the quantization scheme, checked over randomized
//! and exhaustive inputs.

use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use qpd::equilibria::{certify, entangled_conditions, product_conditions, DEFAULT_NE_TOL};
use qpd::game::{measurement_basis, strategy_operator};
use qpd::linalg::{projector, Matrix4, DEFAULT_TOL};
use qpd::{
    payoff_entangled, payoff_pair, payoff_product, region_report_entangled,
    region_report_product, ClassicalPayoffMatrix, EntanglementConfig, GameConfig, Measurement,
    ProfileName, StrategyParams, StrategyProfile,
};

fn config(xi: f64, delta: f64) -> GameConfig {
    GameConfig::new(
        EntanglementConfig::extended(xi, delta).unwrap(),
        ClassicalPayoffMatrix::default(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn strategy_operators_are_unitary(theta in 0.0..=PI, phi in 0.0..=FRAC_PI_2) {
        let u = strategy_operator(StrategyParams::new(theta, phi).unwrap());
        prop_assert!(u.unitarity_defect() <= 1e-12);
    }

    #[test]
    fn final_density_has_unit_trace_and_is_hermitian(
        xi in 0.0..=PI,
        delta in 0.0..=FRAC_PI_2,
        ta in 0.0..=PI, pa in 0.0..=FRAC_PI_2,
        tb in 0.0..=PI, pb in 0.0..=FRAC_PI_2,
    ) {
        let cfg = config(xi, delta);
        let rho = qpd::final_density(
            &cfg,
            StrategyParams::new(ta, pa).unwrap(),
            StrategyParams::new(tb, pb).unwrap(),
        ).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(rho.trace().im.abs() <= 1e-12);
        prop_assert!(rho.hermiticity_defect() <= 1e-12);
    }

    #[test]
    fn payoffs_stay_within_the_element_range(
        xi in 0.0..=PI,
        delta in 0.0..=FRAC_PI_2,
        ta in 0.0..=PI, pa in 0.0..=FRAC_PI_2,
        tb in 0.0..=PI, pb in 0.0..=FRAC_PI_2,
    ) {
        let cfg = config(xi, delta);
        let (a, b) = payoff_pair(
            &cfg,
            StrategyParams::new(ta, pa).unwrap(),
            StrategyParams::new(tb, pb).unwrap(),
        ).unwrap();
        for v in [a, b] {
            prop_assert!(v >= -1e-9, "payoff {v} below element minimum");
            prop_assert!(v <= 5.0 + 1e-9, "payoff {v} above element maximum");
        }
    }

    #[test]
    fn swapping_players_swaps_payoffs(
        xi in 0.0..=PI,
        delta in 0.0..=FRAC_PI_2,
        ta in 0.0..=PI, pa in 0.0..=FRAC_PI_2,
        tb in 0.0..=PI, pb in 0.0..=FRAC_PI_2,
    ) {
        let cfg = config(xi, delta);
        let a = StrategyParams::new(ta, pa).unwrap();
        let b = StrategyParams::new(tb, pb).unwrap();
        let fwd = payoff_pair(&cfg, a, b).unwrap();
        let rev = payoff_pair(&cfg, b, a).unwrap();
        prop_assert!((fwd.0 - rev.1).abs() <= 1e-12);
        prop_assert!((fwd.1 - rev.0).abs() <= 1e-12);
    }

    #[test]
    fn closed_forms_track_the_simulation(
        xi in 0.0..=PI,
        ta in 0.0..=PI, pa in 0.0..=FRAC_PI_2,
        tb in 0.0..=PI, pb in 0.0..=FRAC_PI_2,
    ) {
        let a = StrategyParams::new(ta, pa).unwrap();
        let b = StrategyParams::new(tb, pb).unwrap();

        let sim = payoff_pair(&config(xi, FRAC_PI_2), a, b).unwrap();
        let closed = payoff_entangled(xi, a, b).unwrap();
        prop_assert!((sim.0 - closed.0).abs() <= 1e-9);
        prop_assert!((sim.1 - closed.1).abs() <= 1e-9);

        let sim = payoff_pair(&config(xi, 0.0), a, b).unwrap();
        let closed = payoff_product(xi, a, b).unwrap();
        prop_assert!((sim.0 - closed.0).abs() <= 1e-9);
        prop_assert!((sim.1 - closed.1).abs() <= 1e-9);
    }
}

#[test]
fn measurement_projectors_are_complete_on_a_dense_grid() {
    for k in 0..=100 {
        let delta = FRAC_PI_2 * k as f64 / 100.0;
        let basis = measurement_basis(delta).unwrap();
        let mut sum = Matrix4::zeros();
        for v in &basis {
            sum = sum.add(&projector(v, DEFAULT_TOL).unwrap());
        }
        assert!(sum.max_abs_diff(&Matrix4::identity()) <= 1e-12);
    }
}

#[test]
fn quantum_pair_is_equilibrium_in_the_fully_entangled_limit() {
    let cfg = config(FRAC_PI_2, FRAC_PI_2);
    let cert = certify(&cfg, &ProfileName::QQ.into(), 64, DEFAULT_NE_TOL).unwrap();
    assert!(cert.is_ne);
    assert!(cert.is_strict);
    let (a, b) = payoff_pair(
        &cfg,
        qpd::NamedStrategy::Quantum.params(),
        qpd::NamedStrategy::Quantum.params(),
    )
    .unwrap();
    assert!((a - 3.0).abs() <= 1e-12);
    assert!((b - 3.0).abs() <= 1e-12);
}

/// The analytic conditions and the numeric certifier must agree on every
/// named profile they both speak about, across both measurement bases.
#[test]
fn analytic_and_numeric_equilibria_agree_on_a_grid() {
    let entangled_named = [
        ProfileName::QQ,
        ProfileName::QD,
        ProfileName::DQ,
        ProfileName::CD,
        ProfileName::DC,
    ];
    for k in 0..50 {
        let xi = FRAC_PI_2 * k as f64 / 49.0;
        let analytic = entangled_conditions(xi);
        let cfg = config(xi, FRAC_PI_2);
        for name in entangled_named {
            let cert = certify(&cfg, &StrategyProfile::named(name), 64, DEFAULT_NE_TOL).unwrap();
            assert_eq!(
                cert.is_ne,
                analytic.contains(&name),
                "profile {name} disagrees at sin xi = {}",
                xi.sin()
            );
        }
    }

    let product_named = [
        ProfileName::CC,
        ProfileName::CD,
        ProfileName::DC,
        ProfileName::DD,
    ];
    for k in 0..50 {
        let x = k as f64 / 49.0;
        let xi = 2.0 * x.sqrt().asin();
        let analytic = product_conditions(xi);
        let cfg = config(xi, 0.0);
        for name in product_named {
            let cert = certify(&cfg, &StrategyProfile::named(name), 64, DEFAULT_NE_TOL).unwrap();
            assert_eq!(
                cert.is_ne,
                analytic.contains(&name),
                "profile {name} disagrees at x = {x}"
            );
        }
    }
}

/// Interval equilibrium sets in the region reports are produced analytically;
/// the certifier must confirm each of them at the interval midpoint.
#[test]
fn region_interval_equilibria_survive_certification() {
    let report = region_report_entangled(150, 1e-9).unwrap();
    for iv in &report.intervals {
        let mid = 0.5 * (iv.lo + iv.hi);
        let cfg = config(mid.asin(), FRAC_PI_2);
        for &name in &iv.ne {
            let cert = certify(&cfg, &StrategyProfile::named(name), 64, DEFAULT_NE_TOL).unwrap();
            assert!(cert.is_ne, "{name} not confirmed at sin xi = {mid}");
        }
    }

    let report = region_report_product(150, 1e-9).unwrap();
    for iv in &report.intervals {
        let mid = 0.5 * (iv.lo + iv.hi);
        let cfg = config(2.0 * mid.sqrt().asin(), 0.0);
        for &name in &iv.ne {
            let cert = certify(&cfg, &StrategyProfile::named(name), 64, DEFAULT_NE_TOL).unwrap();
            assert!(cert.is_ne, "{name} not confirmed at x = {mid}");
        }
    }
}

/// The certifier's monotone flip: Q⊗Q certification changes truth value
/// exactly once as sin ξ climbs from 0 to 1.
#[test]
fn quantum_pair_certification_flips_exactly_once() {
    let mut flips = 0;
    let mut prev: Option<bool> = None;
    for k in 0..=60 {
        let s = k as f64 / 60.0;
        let cfg = config(s.asin(), FRAC_PI_2);
        let ne = certify(&cfg, &ProfileName::QQ.into(), 32, DEFAULT_NE_TOL)
            .unwrap()
            .is_ne;
        if let Some(p) = prev {
            if p != ne {
                flips += 1;
            }
        }
        prev = Some(ne);
    }
    assert_eq!(flips, 1);
}

#[test]
fn sweep_accepts_only_closed_form_bases() {
    assert!(qpd::sweep_quads(Measurement::Entangled, 100).is_ok());
    assert!(qpd::sweep_quads(Measurement::Product, 100).is_ok());
    assert!(qpd::sweep_quads(Measurement::General(0.7), 100).is_err());
}

/// Named profiles sit on the deviation grid, so the best-response gain can
/// never be meaningfully negative: staying put is always available.
#[test]
fn best_response_gain_never_drops_below_zero_for_named_profiles() {
    for k in 0..12 {
        let xi = PI * k as f64 / 11.0;
        for delta in [0.0, FRAC_PI_2] {
            let cfg = config(xi, delta);
            for name in ProfileName::ALL {
                for player in [qpd::Player::A, qpd::Player::B] {
                    let gain =
                        qpd::best_response_gain(&cfg, &StrategyProfile::named(name), player, 16)
                            .unwrap();
                    assert!(gain >= -1e-9, "{name} gain {gain} at xi = {xi}");
                }
            }
        }
    }
}
