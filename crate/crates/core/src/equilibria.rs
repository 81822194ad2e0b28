//! Nash-equilibrium certification over the continuous strategy space.
//!
//! Two routes are provided and the tests hold them together:
//!
//! * analytic conditions — closed thresholds on the entanglement parameter
//!   for the named profiles, valid at δ = π/2 and δ = 0;
//! * a numeric certifier — a deterministic best-response scan (coarse grid
//!   plus shrinking-neighborhood refinement) that works at any δ and for any
//!   payoff matrix.
//!
//! The deviation surface is a low-order trigonometric polynomial in (θ, φ),
//! so a coarse grid cannot miss the global maximum by more than the
//! refinement basin around the best grid point.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::closedform::{entangled_alice, product_alice};
use crate::error::{Error, Result};
use crate::game::{
    final_density, payoff_operators, ClassicalPayoffMatrix, EntanglementConfig, GameConfig,
    NamedStrategy, StrategyParams,
};
use crate::linalg::{real_trace_product, Matrix4, DEFAULT_TOL};

/// Default deviation-grid resolution per axis.
pub const DEFAULT_GRID: usize = 64;
/// Coarsest grid the scan accepts.
pub const MIN_GRID: usize = 16;
/// Default payoff-units tolerance below which a deviation gain counts as zero.
pub const DEFAULT_NE_TOL: f64 = 1e-7;
/// A non-identical deviation must lose by more than this for strictness.
pub const STRICTNESS_TOL: f64 = 1e-9;

/// Slack applied to the analytic inequalities so closed boundaries (where the
/// conditions hold with equality) survive floating-point evaluation of the
/// threshold angle.
const CONDITION_EPS: f64 = 1e-9;

/// Two strategies whose parameters differ may still be the same unitary:
/// at θ = π the φ phase drops out entirely. Deviations that collapse to the
/// profile's own operator are excluded from strictness checks.
const OPERATOR_EQ_TOL: f64 = 1e-12;

const REFINE_ROUNDS: usize = 6;
const LOCAL_GRID: usize = 17;
const SHRINK: f64 = 0.25;

/// The named pure-strategy profiles discussed throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProfileName {
    CC,
    CD,
    DC,
    DD,
    QQ,
    QD,
    DQ,
}

impl ProfileName {
    pub const ALL: [ProfileName; 7] = [
        ProfileName::CC,
        ProfileName::CD,
        ProfileName::DC,
        ProfileName::DD,
        ProfileName::QQ,
        ProfileName::QD,
        ProfileName::DQ,
    ];

    pub fn strategies(self) -> (NamedStrategy, NamedStrategy) {
        use NamedStrategy::{Cooperate as C, Defect as D, Quantum as Q};
        match self {
            ProfileName::CC => (C, C),
            ProfileName::CD => (C, D),
            ProfileName::DC => (D, C),
            ProfileName::DD => (D, D),
            ProfileName::QQ => (Q, Q),
            ProfileName::QD => (Q, D),
            ProfileName::DQ => (D, Q),
        }
    }
}

impl fmt::Display for ProfileName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.strategies();
        write!(f, "{}{}", a.symbol(), b.symbol())
    }
}

impl FromStr for ProfileName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_uppercase().as_str() {
            "CC" => Ok(ProfileName::CC),
            "CD" => Ok(ProfileName::CD),
            "DC" => Ok(ProfileName::DC),
            "DD" => Ok(ProfileName::DD),
            "QQ" => Ok(ProfileName::QQ),
            "QD" => Ok(ProfileName::QD),
            "DQ" => Ok(ProfileName::DQ),
            other => Err(format!(
                "unknown profile `{other}` (expected one of CC, CD, DC, DD, QQ, QD, DQ)"
            )),
        }
    }
}

/// A strategy pair, optionally carrying its name when drawn from the named
/// set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyProfile {
    pub a: StrategyParams,
    pub b: StrategyParams,
    pub name: Option<ProfileName>,
}

impl StrategyProfile {
    pub fn new(a: StrategyParams, b: StrategyParams) -> Self {
        Self { a, b, name: None }
    }

    pub fn named(name: ProfileName) -> Self {
        let (a, b) = name.strategies();
        Self {
            a: a.params(),
            b: b.params(),
            name: Some(name),
        }
    }
}

impl From<ProfileName> for StrategyProfile {
    fn from(name: ProfileName) -> Self {
        StrategyProfile::named(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    A,
    B,
}

/// How an equilibrium statement was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Analytic,
    Numeric,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Analytic => write!(f, "analytic"),
            Method::Numeric => write!(f, "numeric"),
        }
    }
}

/// Outcome of certifying one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct NECertificate {
    pub profile: StrategyProfile,
    pub is_ne: bool,
    /// True only when every sampled deviation that is a genuinely different
    /// operator strictly loses.
    pub is_strict: bool,
    /// Worst-case deviation gain for Alice; at most the tolerance when NE.
    pub margin_a: f64,
    /// Worst-case deviation gain for Bob.
    pub margin_b: f64,
    pub method: Method,
}

/// Payoff evaluator that takes the closed-form fast path when the measurement
/// basis admits one and falls back to the density-matrix simulation
/// otherwise. Only Alice's payoff is ever needed: by player symmetry
/// $_B(a, b) = $_A(b, a).
enum Evaluator<'a> {
    Entangled { m: &'a ClassicalPayoffMatrix, xi: f64 },
    Product { m: &'a ClassicalPayoffMatrix, xi: f64 },
    Simulation { config: &'a GameConfig, alice_op: Box<Matrix4> },
}

impl<'a> Evaluator<'a> {
    fn new(config: &'a GameConfig) -> Result<Self> {
        let delta = config.entanglement.delta();
        if delta == FRAC_PI_2 {
            Ok(Evaluator::Entangled {
                m: &config.payoffs,
                xi: config.entanglement.xi(),
            })
        } else if delta == 0.0 {
            Ok(Evaluator::Product {
                m: &config.payoffs,
                xi: config.entanglement.xi(),
            })
        } else {
            let (alice_op, _) = payoff_operators(delta, &config.payoffs)?;
            Ok(Evaluator::Simulation {
                config,
                alice_op: Box::new(alice_op),
            })
        }
    }

    fn alice(&self, a: StrategyParams, b: StrategyParams) -> Result<f64> {
        match self {
            Evaluator::Entangled { m, xi } => Ok(entangled_alice(m, *xi, a, b)),
            Evaluator::Product { m, xi } => Ok(product_alice(m, *xi, a, b)),
            Evaluator::Simulation { config, alice_op } => {
                let rho = final_density(config, a, b)?;
                real_trace_product(alice_op, &rho, DEFAULT_TOL)
            }
        }
    }
}

fn same_operator(theta: f64, phi: f64, own: StrategyParams) -> bool {
    let same_params =
        (theta - own.theta()).abs() <= OPERATOR_EQ_TOL && (phi - own.phi()).abs() <= OPERATOR_EQ_TOL;
    let both_flips = theta >= PI - OPERATOR_EQ_TOL && own.theta() >= PI - OPERATOR_EQ_TOL;
    same_params || both_flips
}

struct Scan {
    /// Max deviation gain after refinement, over all sampled deviations.
    refined: f64,
    /// Max coarse-grid gain over deviations that are a different operator.
    distinct: f64,
}

/// Deterministic deviation scan for one player: coarse grid, then iterated
/// shrinking-neighborhood refinement around the best grid point. Ties break
/// toward the lowest grid index, so the result is independent of evaluation
/// order.
fn scan_player(
    ev: &Evaluator<'_>,
    own: StrategyParams,
    opp: StrategyParams,
    grid: usize,
) -> Result<Scan> {
    if grid < MIN_GRID {
        return Err(Error::GridTooCoarse {
            min: MIN_GRID,
            got: grid,
        });
    }
    let base = ev.alice(own, opp)?;
    let steps = (grid - 1) as f64;

    let mut best = f64::NEG_INFINITY;
    let mut best_at = (0.0, 0.0);
    let mut distinct = f64::NEG_INFINITY;
    for i in 0..grid {
        let theta = PI * i as f64 / steps;
        for j in 0..grid {
            let phi = FRAC_PI_2 * j as f64 / steps;
            let gain = ev.alice(StrategyParams::new_unchecked(theta, phi), opp)? - base;
            if gain > best {
                best = gain;
                best_at = (theta, phi);
            }
            if gain > distinct && !same_operator(theta, phi, own) {
                distinct = gain;
            }
        }
    }

    let mut half_theta = PI / steps;
    let mut half_phi = FRAC_PI_2 / steps;
    for _ in 0..REFINE_ROUNDS {
        let theta_lo = (best_at.0 - half_theta).max(0.0);
        let theta_hi = (best_at.0 + half_theta).min(PI);
        let phi_lo = (best_at.1 - half_phi).max(0.0);
        let phi_hi = (best_at.1 + half_phi).min(FRAC_PI_2);
        let local = (LOCAL_GRID - 1) as f64;
        for i in 0..LOCAL_GRID {
            let theta = theta_lo + (theta_hi - theta_lo) * i as f64 / local;
            for j in 0..LOCAL_GRID {
                let phi = phi_lo + (phi_hi - phi_lo) * j as f64 / local;
                let gain = ev.alice(StrategyParams::new_unchecked(theta, phi), opp)? - base;
                if gain > best {
                    best = gain;
                    best_at = (theta, phi);
                }
            }
        }
        half_theta *= SHRINK;
        half_phi *= SHRINK;
    }

    Ok(Scan {
        refined: best,
        distinct,
    })
}

/// Maximum payoff a player can gain by unilaterally deviating from the
/// profile, found by the deterministic grid-plus-refinement search. Zero or
/// negative (up to the search resolution) at a Nash equilibrium.
pub fn best_response_gain(
    config: &GameConfig,
    profile: &StrategyProfile,
    player: Player,
    grid: usize,
) -> Result<f64> {
    let ev = Evaluator::new(config)?;
    let (own, opp) = match player {
        Player::A => (profile.a, profile.b),
        Player::B => (profile.b, profile.a),
    };
    Ok(scan_player(&ev, own, opp, grid)?.refined)
}

/// Certify whether a profile is a Nash equilibrium and whether it is strict.
pub fn certify(
    config: &GameConfig,
    profile: &StrategyProfile,
    grid: usize,
    tol: f64,
) -> Result<NECertificate> {
    let ev = Evaluator::new(config)?;
    let a = scan_player(&ev, profile.a, profile.b, grid)?;
    let b = scan_player(&ev, profile.b, profile.a, grid)?;
    let is_ne = a.refined <= tol && b.refined <= tol;
    let is_strict = is_ne && a.distinct < -STRICTNESS_TOL && b.distinct < -STRICTNESS_TOL;
    Ok(NECertificate {
        profile: *profile,
        is_ne,
        is_strict,
        margin_a: a.refined,
        margin_b: b.refined,
        method: Method::Numeric,
    })
}

/// Minimum of an expression that is bilinear in c² = cos²(θ/2) ∈ [0, 1] and
/// m = cos 2φ ∈ [-1, 1]; a bilinear function over a box attains its extrema
/// at the corners.
fn box_min(f: impl Fn(f64, f64) -> f64) -> f64 {
    f(0.0, -1.0)
        .min(f(0.0, 1.0))
        .min(f(1.0, -1.0))
        .min(f(1.0, 1.0))
}

/// Q⊗Q is an equilibrium under entangled measurement iff the deviation
/// margin 7·sinξ + [1 + (2·cos2φ - 5)·sinξ]·cos²(θ/2) - 1 stays nonnegative
/// over the whole strategy box, which happens exactly for sin ξ ≥ 1/7. The
/// boundary is closed: equality there makes the equilibrium non-strict, not
/// absent.
pub fn qq_condition_entangled(xi: f64) -> bool {
    let s = xi.sin();
    box_min(|c2, m| 7.0 * s + (1.0 + (2.0 * m - 5.0) * s) * c2 - 1.0) >= -CONDITION_EPS
}

/// Q⊗D (and by symmetry D⊗Q) is an equilibrium under entangled measurement
/// iff sin ξ ≤ 1/7. Two margins must stay nonnegative:
/// sin²(θ/2) + [7 - (2 - 5·cos2φ)·cos²(θ/2)]·sinξ for the Q player and
/// [1 - (5 - 2·cos2φ)·sinξ]·cos²(θ/2) for the D player.
pub fn qd_condition_entangled(xi: f64) -> bool {
    let s = xi.sin();
    let q_side = box_min(|c2, m| (1.0 - c2) + (7.0 - (2.0 - 5.0 * m) * c2) * s);
    let d_side = box_min(|c2, m| (1.0 - (5.0 - 2.0 * m) * s) * c2);
    q_side >= -CONDITION_EPS && d_side >= -CONDITION_EPS
}

/// C⊗D (and D⊗C) is an equilibrium under entangled measurement only at zero
/// entanglement: the cooperator's margin
/// sin²(θ/2) - [3 + (2 - 5·cos2φ)·cos²(θ/2)]·sinξ dips below zero as soon as
/// sin ξ > 0.
pub fn cd_condition_entangled(xi: f64) -> bool {
    let s = xi.sin();
    let c_side = box_min(|c2, m| (1.0 - c2) - (3.0 + (2.0 - 5.0 * m) * c2) * s);
    let d_side = box_min(|c2, m| (1.0 + (5.0 - 2.0 * m) * s) * c2);
    c_side >= -CONDITION_EPS && d_side >= -CONDITION_EPS
}

/// All analytically known equilibria among the named profiles under entangled
/// measurement, in canonical order.
pub fn entangled_conditions(xi: f64) -> Vec<ProfileName> {
    let mut out = Vec::new();
    if cd_condition_entangled(xi) {
        out.push(ProfileName::CD);
        out.push(ProfileName::DC);
    }
    if qq_condition_entangled(xi) {
        out.push(ProfileName::QQ);
    }
    if qd_condition_entangled(xi) {
        out.push(ProfileName::QD);
        out.push(ProfileName::DQ);
    }
    out.sort();
    out
}

/// Equilibria among the classical pure profiles under product measurement,
/// with x = sin²(ξ/2): D⊗D for x ≤ 1/3, C⊗D and D⊗C for 1/3 ≤ x ≤ 2/3,
/// C⊗C for x ≥ 2/3. All thresholds are closed.
pub fn product_conditions(xi: f64) -> Vec<ProfileName> {
    let x = (xi / 2.0).sin().powi(2);
    let mut out = Vec::new();
    if 3.0 * x - 2.0 >= -CONDITION_EPS {
        out.push(ProfileName::CC);
    }
    if 1.0 - 3.0 * x >= -CONDITION_EPS {
        out.push(ProfileName::DD);
    }
    if 2.0 - 3.0 * x >= -CONDITION_EPS && 3.0 * x - 1.0 >= -CONDITION_EPS {
        out.push(ProfileName::CD);
        out.push(ProfileName::DC);
    }
    out.sort();
    out
}

/// A one-parameter family of games: the measurement basis and payoff matrix
/// are pinned while the initial-state entanglement varies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfigFamily {
    pub delta: f64,
    pub payoffs: ClassicalPayoffMatrix,
}

impl ConfigFamily {
    pub fn new(delta: f64, payoffs: ClassicalPayoffMatrix) -> Self {
        Self { delta, payoffs }
    }

    pub fn config_at(&self, xi: f64) -> Result<GameConfig> {
        Ok(GameConfig::new(
            EntanglementConfig::extended(xi, self.delta)?,
            self.payoffs,
        ))
    }
}

/// Bisect on the certification outcome of `profile` to locate the
/// entanglement ξ where it flips, to within `xi_tol` radians.
///
/// Errors unless the outcome differs at `lo` and `hi`.
pub fn threshold_scan(
    family: &ConfigFamily,
    profile: &StrategyProfile,
    lo: f64,
    hi: f64,
    xi_tol: f64,
    grid: usize,
    ne_tol: f64,
) -> Result<f64> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::BadScanInterval { lo, hi });
    }
    let ne_at = |xi: f64| -> Result<bool> {
        Ok(certify(&family.config_at(xi)?, profile, grid, ne_tol)?.is_ne)
    };
    let ne_lo = ne_at(lo)?;
    if ne_lo == ne_at(hi)? {
        return Err(Error::NoThresholdCrossing);
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > xi_tol {
        let mid = 0.5 * (lo + hi);
        if ne_at(mid)? == ne_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entangled_config(xi: f64) -> GameConfig {
        GameConfig::new(
            EntanglementConfig::extended(xi, FRAC_PI_2).unwrap(),
            ClassicalPayoffMatrix::default(),
        )
    }

    fn product_config(xi: f64) -> GameConfig {
        GameConfig::new(
            EntanglementConfig::extended(xi, 0.0).unwrap(),
            ClassicalPayoffMatrix::default(),
        )
    }

    fn xi_of_x(x: f64) -> f64 {
        2.0 * x.sqrt().asin()
    }

    #[test]
    fn quantum_pair_has_no_profitable_deviation_at_max_entanglement() {
        let cfg = entangled_config(FRAC_PI_2);
        let profile = StrategyProfile::named(ProfileName::QQ);
        let gain = best_response_gain(&cfg, &profile, Player::A, DEFAULT_GRID).unwrap();
        assert!(gain <= 1e-9, "gain = {gain}");
    }

    #[test]
    fn classical_defection_is_dominant_without_entanglement() {
        let cfg = product_config(0.0);
        let profile = StrategyProfile::named(ProfileName::DD);
        let gain = best_response_gain(&cfg, &profile, Player::A, DEFAULT_GRID).unwrap();
        assert!(gain <= 1e-9, "gain = {gain}");
    }

    #[test]
    fn cooperation_invites_the_classical_temptation() {
        let cfg = product_config(0.0);
        let profile = StrategyProfile::named(ProfileName::CC);
        let gain = best_response_gain(&cfg, &profile, Player::A, DEFAULT_GRID).unwrap();
        assert!((gain - 2.0).abs() <= 1e-9, "gain = {gain}");
    }

    #[test]
    fn rejects_too_coarse_grid() {
        let cfg = product_config(0.0);
        let profile = StrategyProfile::named(ProfileName::DD);
        assert!(matches!(
            best_response_gain(&cfg, &profile, Player::A, 8),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn certify_quantum_pair_across_the_threshold() {
        let above = certify(
            &entangled_config((0.5f64).asin()),
            &ProfileName::QQ.into(),
            DEFAULT_GRID,
            DEFAULT_NE_TOL,
        )
        .unwrap();
        assert!(above.is_ne);
        assert!(above.is_strict);

        let below = certify(
            &entangled_config((0.1f64).asin()),
            &ProfileName::QQ.into(),
            DEFAULT_GRID,
            DEFAULT_NE_TOL,
        )
        .unwrap();
        assert!(!below.is_ne);
        assert!(below.margin_a > DEFAULT_NE_TOL);
    }

    #[test]
    fn certify_alternating_profile_in_product_band() {
        let cert = certify(
            &product_config(xi_of_x(0.45)),
            &ProfileName::CD.into(),
            DEFAULT_GRID,
            DEFAULT_NE_TOL,
        )
        .unwrap();
        assert!(cert.is_ne);
        // The cooperator's phase deviations tie exactly, so never strict.
        assert!(!cert.is_strict);
    }

    #[test]
    fn defection_pair_is_strict_inside_its_region() {
        let cert = certify(
            &product_config(xi_of_x(0.2)),
            &ProfileName::DD.into(),
            DEFAULT_GRID,
            DEFAULT_NE_TOL,
        )
        .unwrap();
        assert!(cert.is_ne);
        // Every deviation that is a genuinely different operator loses; the
        // θ = π ridge collapses to the same flip.
        assert!(cert.is_strict);
    }

    #[test]
    fn analytic_qq_threshold_is_one_seventh() {
        assert!(qq_condition_entangled((1.0f64 / 7.0).asin()));
        assert!(qq_condition_entangled((1.0f64).asin()));
        assert!(!qq_condition_entangled((0.1f64).asin()));
        assert!(!qq_condition_entangled(0.0));
    }

    #[test]
    fn analytic_qd_holds_below_one_seventh() {
        assert!(qd_condition_entangled((0.1f64).asin()));
        assert!(qd_condition_entangled(0.0));
        assert!(qd_condition_entangled((1.0f64 / 7.0).asin()));
        assert!(!qd_condition_entangled((0.5f64).asin()));
    }

    #[test]
    fn analytic_cd_needs_zero_entanglement() {
        assert!(cd_condition_entangled(0.0));
        assert!(!cd_condition_entangled((0.05f64).asin()));
    }

    #[test]
    fn product_conditions_partition_by_region() {
        assert_eq!(product_conditions(xi_of_x(0.2)), vec![ProfileName::DD]);
        assert_eq!(
            product_conditions(xi_of_x(0.5)),
            vec![ProfileName::CD, ProfileName::DC]
        );
        assert_eq!(product_conditions(xi_of_x(0.8)), vec![ProfileName::CC]);
        // Closed boundaries keep both neighbours.
        assert_eq!(
            product_conditions(xi_of_x(1.0 / 3.0)),
            vec![ProfileName::CD, ProfileName::DC, ProfileName::DD]
        );
    }

    #[test]
    fn threshold_scan_finds_the_qq_cutoff() {
        let family = ConfigFamily::new(FRAC_PI_2, ClassicalPayoffMatrix::default());
        let xi = threshold_scan(
            &family,
            &ProfileName::QQ.into(),
            0.0,
            FRAC_PI_2,
            1e-7,
            DEFAULT_GRID,
            DEFAULT_NE_TOL,
        )
        .unwrap();
        assert!((xi.sin() - 1.0 / 7.0).abs() <= 1e-6, "sin xi = {}", xi.sin());
    }

    #[test]
    fn threshold_scan_rejects_flat_outcomes() {
        let family = ConfigFamily::new(FRAC_PI_2, ClassicalPayoffMatrix::default());
        // C⊗C is never an equilibrium under entangled measurement.
        assert!(matches!(
            threshold_scan(
                &family,
                &ProfileName::CC.into(),
                0.0,
                FRAC_PI_2,
                1e-6,
                DEFAULT_GRID,
                DEFAULT_NE_TOL,
            ),
            Err(Error::NoThresholdCrossing)
        ));
    }

    #[test]
    fn simulation_path_agrees_with_closed_form_certification() {
        // A δ strictly between the two closed-form bases exercises the
        // simulation evaluator; just below π/2 the QQ certificate must still
        // match the entangled-basis outcome away from the threshold.
        let near_bell = GameConfig::new(
            EntanglementConfig::new(0.9, FRAC_PI_2 * 0.999999).unwrap(),
            ClassicalPayoffMatrix::default(),
        );
        let cert = certify(&near_bell, &ProfileName::QQ.into(), 32, DEFAULT_NE_TOL).unwrap();
        assert!(cert.is_ne);
        assert_eq!(cert.method, Method::Numeric);
    }
}
