//! A two-qubit quantization of the prisoners' dilemma.
//!
//! An arbiter prepares the entangled state cos(ξ/2)|00⟩ + i·sin(ξ/2)|11⟩,
//! each player applies a local two-parameter unitary U(θ, φ), and payoffs are
//! read out with projectors whose own entanglement δ interpolates between a
//! product basis (δ = 0) and a Bell-like basis (δ = π/2). Depending on ξ and
//! the measurement basis, the resulting game keeps the dilemma, turns into
//! chicken, or becomes something else entirely.
//!
//! Module map:
//!
//! * [`linalg`] — fixed-size complex matrices and the trace machinery;
//! * [`game`] — state preparation, strategy unitaries, payoff operators, and
//!   the density-matrix payoff route;
//! * [`closedform`] — algebraic payoffs for the two special bases, used as
//!   the fast path in sweeps and as a cross-check oracle for the simulation;
//! * [`equilibria`] — analytic Nash conditions plus a deterministic numeric
//!   best-response certifier and threshold bisection;
//! * [`classify`] — element-ordering game classification and the region
//!   decompositions of the entanglement axis.

pub mod classify;
pub mod closedform;
pub mod equilibria;
mod error;
pub mod game;
pub mod linalg;

pub use classify::{
    classify_quad, ordering_signature, region_report_entangled, region_report_product,
    sweep_quads, sweep_quads_with, GameClass, OrderingSignature, RegionReport,
};
pub use closedform::{
    payoff_entangled, payoff_entangled_with, payoff_product, payoff_product_with, quad_entangled,
    quad_entangled_with, quad_product, quad_product_with, PayoffQuad,
};
pub use equilibria::{
    best_response_gain, certify, threshold_scan, ConfigFamily, Method, NECertificate, Player,
    ProfileName, StrategyProfile,
};
pub use error::{Error, Result};
pub use game::{
    final_density, initial_state, payoff_operators, payoff_pair, strategy_operator,
    ClassicalPayoffMatrix, EntanglementConfig, GameConfig, Measurement, NamedStrategy,
    StrategyParams,
};
