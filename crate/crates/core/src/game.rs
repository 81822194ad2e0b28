//! The quantized game itself: entangled initial state, two-parameter strategy
//! unitaries, evolution, payoff operators, and trace payoffs.
//!
//! The protocol: an arbiter prepares cos(ξ/2)|00⟩ + i·sin(ξ/2)|11⟩ and hands
//! one qubit to each player. Each player applies a local unitary U(θ, φ) and
//! returns the qubit. The arbiter measures with projectors onto a basis whose
//! own entanglement δ interpolates between the product basis (δ = 0) and a
//! Bell-like basis (δ = π/2), and pays out accordingly.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{
    conjugate_evolve, projector, real_trace_product, tensor, Complex, Matrix2, Matrix4, Vector4,
    DEFAULT_TOL,
};

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::AngleOutOfRange {
            name,
            value,
            lo,
            hi,
        })
    }
}

/// Strategic-form elements for the row player; the game is symmetric, so the
/// column player sees the transpose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalPayoffMatrix {
    /// Reward for mutual cooperation.
    pub r: f64,
    /// Sucker's payoff: cooperating against a defector.
    pub s: f64,
    /// Temptation: defecting against a cooperator.
    pub t: f64,
    /// Punishment for mutual defection.
    pub u: f64,
}

impl ClassicalPayoffMatrix {
    /// The canonical dilemma values (3, 0, 5, 1).
    pub const DEFAULT: Self = Self {
        r: 3.0,
        s: 0.0,
        t: 5.0,
        u: 1.0,
    };

    pub fn new(r: f64, s: f64, t: f64, u: f64) -> Result<Self> {
        for (name, value) in [("R", r), ("S", s), ("T", t), ("U", u)] {
            if !value.is_finite() {
                return Err(Error::NonFinitePayoff { name, value });
            }
        }
        Ok(Self { r, s, t, u })
    }

    /// Elements in (R, S, T, U) order.
    pub fn elements(&self) -> [f64; 4] {
        [self.r, self.s, self.t, self.u]
    }
}

impl Default for ClassicalPayoffMatrix {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Entanglement of the initial state (ξ) and of the measurement basis (δ),
/// both in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementConfig {
    xi: f64,
    delta: f64,
}

impl EntanglementConfig {
    /// Nominal domain: ξ ∈ [0, π/2] and δ ∈ [0, π/2].
    pub fn new(xi: f64, delta: f64) -> Result<Self> {
        check_range("xi", xi, 0.0, FRAC_PI_2)?;
        check_range("delta", delta, 0.0, FRAC_PI_2)?;
        Ok(Self { xi, delta })
    }

    /// Extended domain ξ ∈ [0, π], needed by product-basis sweeps that drive
    /// sin²(ξ/2) all the way to 1. The initial state stays a valid quantum
    /// state on the whole interval.
    pub fn extended(xi: f64, delta: f64) -> Result<Self> {
        check_range("xi", xi, 0.0, PI)?;
        check_range("delta", delta, 0.0, FRAC_PI_2)?;
        Ok(Self { xi, delta })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Measurement basis for the payoff operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Measurement {
    /// Bell-like basis, δ = π/2.
    Entangled,
    /// Product basis, δ = 0.
    Product,
    /// Intermediate basis entanglement, δ ∈ (0, π/2).
    General(f64),
}

impl Measurement {
    pub fn delta(self) -> f64 {
        match self {
            Measurement::Entangled => FRAC_PI_2,
            Measurement::Product => 0.0,
            Measurement::General(delta) => delta,
        }
    }
}

/// A player's move: the unitary U(θ, φ) with θ ∈ [0, π] and φ ∈ [0, π/2].
///
/// θ interpolates between the phase rotation R(φ) (θ = 0) and the flip C
/// (θ = π); φ is the quantum phase unavailable classically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyParams {
    theta: f64,
    phi: f64,
}

impl StrategyParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_range("theta", theta, 0.0, PI)?;
        check_range("phi", phi, 0.0, FRAC_PI_2)?;
        Ok(Self { theta, phi })
    }

    /// For grid generators whose values are in range by construction.
    pub(crate) const fn new_unchecked(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// The three named moves of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedStrategy {
    /// Cooperate: U(0, 0) = I.
    Cooperate,
    /// Defect: U(π, 0), the flip |0⟩ → -|1⟩, |1⟩ → |0⟩.
    Defect,
    /// The quantum move: U(0, π/2) = diag(i, -i).
    Quantum,
}

impl NamedStrategy {
    pub fn params(self) -> StrategyParams {
        match self {
            NamedStrategy::Cooperate => StrategyParams::new_unchecked(0.0, 0.0),
            NamedStrategy::Defect => StrategyParams::new_unchecked(PI, 0.0),
            NamedStrategy::Quantum => StrategyParams::new_unchecked(0.0, FRAC_PI_2),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            NamedStrategy::Cooperate => 'C',
            NamedStrategy::Defect => 'D',
            NamedStrategy::Quantum => 'Q',
        }
    }
}

impl fmt::Display for NamedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for NamedStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "C" | "c" => Ok(NamedStrategy::Cooperate),
            "D" | "d" => Ok(NamedStrategy::Defect),
            "Q" | "q" => Ok(NamedStrategy::Quantum),
            other => Err(format!("unknown strategy name `{other}` (expected C, D or Q)")),
        }
    }
}

/// Full description of one game instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameConfig {
    pub entanglement: EntanglementConfig,
    pub payoffs: ClassicalPayoffMatrix,
}

impl GameConfig {
    pub fn new(entanglement: EntanglementConfig, payoffs: ClassicalPayoffMatrix) -> Self {
        Self {
            entanglement,
            payoffs,
        }
    }
}

/// Initial state cos(ξ/2)|00⟩ + i·sin(ξ/2)|11⟩.
///
/// Accepts the extended domain ξ ∈ [0, π] so product-basis sweeps can reach
/// sin²(ξ/2) = 1.
pub fn initial_state(xi: f64) -> Result<Vector4> {
    check_range("xi", xi, 0.0, PI)?;
    let zero = Complex::new(0.0, 0.0);
    Ok(Vector4::new([
        Complex::new((xi / 2.0).cos(), 0.0),
        zero,
        zero,
        Complex::new(0.0, (xi / 2.0).sin()),
    ]))
}

/// The strategy unitary U(θ, φ) = cos(θ/2)·R(φ) + sin(θ/2)·C, where
/// R(φ) = diag(e^{iφ}, e^{-iφ}) and C flips |0⟩ → -|1⟩, |1⟩ → |0⟩.
pub fn strategy_operator(s: StrategyParams) -> Matrix2 {
    let ct = (s.theta() / 2.0).cos();
    let st = (s.theta() / 2.0).sin();
    let phase = Complex::from_polar(1.0, s.phi());
    Matrix2::from_rows([
        [phase * ct, Complex::new(st, 0.0)],
        [Complex::new(-st, 0.0), phase.conj() * ct],
    ])
}

/// The four measurement-basis states, indexed like the outcomes they reward:
/// returned in (|ψ00⟩, |ψ01⟩, |ψ10⟩, |ψ11⟩) order.
pub fn measurement_basis(delta: f64) -> Result<[Vector4; 4]> {
    check_range("delta", delta, 0.0, FRAC_PI_2)?;
    let c = Complex::new((delta / 2.0).cos(), 0.0);
    let is = Complex::new(0.0, (delta / 2.0).sin());
    let zero = Complex::new(0.0, 0.0);
    Ok([
        Vector4::new([c, zero, zero, is]),  // cos|00⟩ + i·sin|11⟩
        Vector4::new([zero, c, -is, zero]), // cos|01⟩ - i·sin|10⟩
        Vector4::new([zero, -is, c, zero]), // cos|10⟩ - i·sin|01⟩
        Vector4::new([is, zero, zero, c]),  // cos|11⟩ + i·sin|00⟩
    ])
}

/// Payoff observables for both players.
///
/// P^A = R·P00 + S·P01 + T·P10 + U·P11 and P^B swaps the S and T weights;
/// the projectors P_ij come from [`measurement_basis`]. All four classical
/// elements are carried so the same operators serve matrices whose orderings
/// differ from the canonical dilemma.
pub fn payoff_operators(
    delta: f64,
    m: &ClassicalPayoffMatrix,
) -> Result<(Matrix4, Matrix4)> {
    let [b00, b01, b10, b11] = measurement_basis(delta)?;
    let p00 = projector(&b00, DEFAULT_TOL)?;
    let p01 = projector(&b01, DEFAULT_TOL)?;
    let p10 = projector(&b10, DEFAULT_TOL)?;
    let p11 = projector(&b11, DEFAULT_TOL)?;
    let pa = p00
        .scale(m.r)
        .add(&p01.scale(m.s))
        .add(&p10.scale(m.t))
        .add(&p11.scale(m.u));
    let pb = p00
        .scale(m.r)
        .add(&p01.scale(m.t))
        .add(&p10.scale(m.s))
        .add(&p11.scale(m.u));
    Ok((pa, pb))
}

/// Density matrix after both players have applied their strategies.
pub fn final_density(
    config: &GameConfig,
    a: StrategyParams,
    b: StrategyParams,
) -> Result<Matrix4> {
    let psi = initial_state(config.entanglement.xi())?;
    let rho = projector(&psi, DEFAULT_TOL)?;
    let u = tensor(&strategy_operator(a), &strategy_operator(b));
    conjugate_evolve(&u, &rho, DEFAULT_TOL)
}

/// Expected payoffs (Alice, Bob) from the density-matrix simulation.
pub fn payoff_pair(
    config: &GameConfig,
    a: StrategyParams,
    b: StrategyParams,
) -> Result<(f64, f64)> {
    let rho = final_density(config, a, b)?;
    let (pa, pb) = payoff_operators(config.entanglement.delta(), &config.payoffs)?;
    Ok((
        real_trace_product(&pa, &rho, DEFAULT_TOL)?,
        real_trace_product(&pb, &rho, DEFAULT_TOL)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix4;

    const TOL: f64 = 1e-12;

    fn config(xi: f64, delta: f64) -> GameConfig {
        GameConfig::new(
            EntanglementConfig::extended(xi, delta).unwrap(),
            ClassicalPayoffMatrix::default(),
        )
    }

    #[test]
    fn initial_state_at_zero_is_00() {
        let psi = initial_state(0.0).unwrap();
        assert!((psi[0] - Complex::new(1.0, 0.0)).norm() <= TOL);
        for i in 1..4 {
            assert!(psi[i].norm() <= TOL);
        }
    }

    #[test]
    fn initial_state_at_max_entanglement_is_bell_like() {
        let psi = initial_state(FRAC_PI_2).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() <= TOL);
        let inv = 1.0 / 2.0f64.sqrt();
        assert!((psi[0] - Complex::new(inv, 0.0)).norm() <= TOL);
        assert!((psi[3] - Complex::new(0.0, inv)).norm() <= TOL);
    }

    #[test]
    fn initial_state_population_follows_half_angle() {
        let psi = initial_state(PI / 3.0).unwrap();
        assert!((psi[0].norm_sqr() - 0.75).abs() <= TOL);
    }

    #[test]
    fn initial_state_rejects_out_of_range() {
        assert!(initial_state(-0.1).is_err());
        assert!(initial_state(PI + 0.1).is_err());
        assert!(initial_state(f64::NAN).is_err());
    }

    #[test]
    fn cooperate_is_identity() {
        let u = strategy_operator(NamedStrategy::Cooperate.params());
        assert!(u.mul(&Matrix2::identity()).unitarity_defect() <= TOL);
        assert!((u.get(0, 0) - Complex::new(1.0, 0.0)).norm() <= TOL);
        assert!((u.get(1, 1) - Complex::new(1.0, 0.0)).norm() <= TOL);
        assert!(u.get(0, 1).norm() <= TOL);
    }

    #[test]
    fn defect_is_the_flip() {
        let u = strategy_operator(NamedStrategy::Defect.params());
        // |0⟩ → -|1⟩ and |1⟩ → |0⟩.
        assert!((u.get(1, 0) - Complex::new(-1.0, 0.0)).norm() <= TOL);
        assert!((u.get(0, 1) - Complex::new(1.0, 0.0)).norm() <= TOL);
        assert!(u.get(0, 0).norm() <= TOL);
        assert!(u.get(1, 1).norm() <= TOL);
    }

    #[test]
    fn quantum_move_is_diag_i_minus_i() {
        let u = strategy_operator(NamedStrategy::Quantum.params());
        assert!((u.get(0, 0) - Complex::new(0.0, 1.0)).norm() <= TOL);
        assert!((u.get(1, 1) - Complex::new(0.0, -1.0)).norm() <= TOL);
        assert!(u.get(0, 1).norm() <= TOL);
        assert!(u.get(1, 0).norm() <= TOL);
    }

    #[test]
    fn final_density_classical_corners() {
        let cfg = config(0.0, 0.0);
        let c = NamedStrategy::Cooperate.params();
        let d = NamedStrategy::Defect.params();

        let rho_cc = final_density(&cfg, c, c).unwrap();
        assert!(rho_cc.max_abs_diff(&Matrix4::diag([1.0, 0.0, 0.0, 0.0])) <= TOL);

        let rho_dd = final_density(&cfg, d, d).unwrap();
        assert!(rho_dd.max_abs_diff(&Matrix4::diag([0.0, 0.0, 0.0, 1.0])) <= TOL);
    }

    #[test]
    fn quantum_pair_leaves_bell_state_density_fixed() {
        // Q ⊗ Q = diag(-1, 1, 1, -1) only rephases the entangled state.
        let cfg = config(FRAC_PI_2, FRAC_PI_2);
        let q = NamedStrategy::Quantum.params();
        let rho = final_density(&cfg, q, q).unwrap();
        let psi = initial_state(FRAC_PI_2).unwrap();
        let expected = crate::linalg::projector(&psi, DEFAULT_TOL).unwrap();
        assert!(rho.max_abs_diff(&expected) <= TOL);
    }

    #[test]
    fn product_basis_payoff_operator_is_diagonal() {
        let (pa, pb) = payoff_operators(0.0, &ClassicalPayoffMatrix::default()).unwrap();
        assert!(pa.max_abs_diff(&Matrix4::diag([3.0, 0.0, 5.0, 1.0])) <= TOL);
        assert!(pb.max_abs_diff(&Matrix4::diag([3.0, 5.0, 0.0, 1.0])) <= TOL);
    }

    #[test]
    fn payoff_operator_rewards_its_own_basis_state() {
        // ⟨ψ10|P^A|ψ10⟩ = T for every δ.
        let (pa, _) = payoff_operators(FRAC_PI_2, &ClassicalPayoffMatrix::default()).unwrap();
        let [_, _, b10, _] = measurement_basis(FRAC_PI_2).unwrap();
        let p = crate::linalg::projector(&b10, DEFAULT_TOL).unwrap();
        let val = crate::linalg::real_trace_product(&pa, &p, DEFAULT_TOL).unwrap();
        assert!((val - 5.0).abs() <= TOL);
    }

    #[test]
    fn measurement_projectors_resolve_identity() {
        for k in 0..=100 {
            let delta = FRAC_PI_2 * k as f64 / 100.0;
            let basis = measurement_basis(delta).unwrap();
            let mut sum = Matrix4::zeros();
            for v in &basis {
                sum = sum.add(&crate::linalg::projector(v, DEFAULT_TOL).unwrap());
            }
            assert!(sum.max_abs_diff(&Matrix4::identity()) <= 1e-12);
        }
    }

    #[test]
    fn classical_limit_reproduces_payoff_matrix() {
        let cfg = config(0.0, 0.0);
        let c = NamedStrategy::Cooperate.params();
        let d = NamedStrategy::Defect.params();
        let cases = [
            (c, c, (3.0, 3.0)),
            (c, d, (0.0, 5.0)),
            (d, c, (5.0, 0.0)),
            (d, d, (1.0, 1.0)),
        ];
        for (a, b, want) in cases {
            let got = payoff_pair(&cfg, a, b).unwrap();
            assert!((got.0 - want.0).abs() <= TOL);
            assert!((got.1 - want.1).abs() <= TOL);
        }
    }

    #[test]
    fn fully_entangled_quantum_pair_payoff() {
        let cfg = config(FRAC_PI_2, FRAC_PI_2);
        let q = NamedStrategy::Quantum.params();
        let (pa, pb) = payoff_pair(&cfg, q, q).unwrap();
        assert!((pa - 3.0).abs() <= TOL);
        assert!((pb - 3.0).abs() <= TOL);
    }

    #[test]
    fn nominal_config_rejects_extended_xi() {
        assert!(EntanglementConfig::new(2.0, 0.0).is_err());
        assert!(EntanglementConfig::extended(2.0, 0.0).is_ok());
        assert!(EntanglementConfig::extended(PI + 0.2, 0.0).is_err());
    }

    #[test]
    fn strategy_params_reject_out_of_range() {
        assert!(StrategyParams::new(-0.1, 0.0).is_err());
        assert!(StrategyParams::new(0.0, FRAC_PI_2 + 0.1).is_err());
        assert!(StrategyParams::new(PI, FRAC_PI_2).is_ok());
    }
}
