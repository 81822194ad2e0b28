//! Closed-form payoff expressions for the two special measurement bases and
//! the entanglement-dependent strategic-form elements they induce.
//!
//! These are algebraically identical to the density-matrix simulation in
//! [`crate::game`] at δ = π/2 (entangled) and δ = 0 (product) — the test
//! suite holds the two routes together to 1e-9 — but evaluate an order of
//! magnitude faster, which matters inside deviation scans and sweeps. For
//! intermediate δ there is no closed form; use the simulation.
//!
//! Bob's payoff is the player-swapped form of Alice's: the protocol treats
//! the players symmetrically (same ξ, same δ, transposed payoff roles), so
//! $_B(a, b) = $_A(b, a).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::game::{ClassicalPayoffMatrix, StrategyParams};

/// Effective strategic-form elements (R, S, T, U) at a given entanglement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffQuad {
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub u: f64,
}

impl PayoffQuad {
    pub fn new(r: f64, s: f64, t: f64, u: f64) -> Self {
        Self { r, s, t, u }
    }

    /// Elements in (R, S, T, U) order.
    pub fn elements(&self) -> [f64; 4] {
        [self.r, self.s, self.t, self.u]
    }
}

fn check_xi(xi: f64) -> Result<()> {
    if xi.is_finite() && (0.0..=PI).contains(&xi) {
        Ok(())
    } else {
        Err(Error::AngleOutOfRange {
            name: "xi",
            value: xi,
            lo: 0.0,
            hi: PI,
        })
    }
}

/// Alice's payoff under entangled measurement (δ = π/2); no range checks.
pub(crate) fn entangled_alice(
    m: &ClassicalPayoffMatrix,
    xi: f64,
    a: StrategyParams,
    b: StrategyParams,
) -> f64 {
    let sx = xi.sin();
    let ca = (a.theta() / 2.0).cos().powi(2);
    let sa = 1.0 - ca;
    let cb = (b.theta() / 2.0).cos().powi(2);
    let sb = 1.0 - cb;
    // Mean/half-difference of the diagonal and off-diagonal element pairs.
    let alpha = 0.5 * (m.r + m.u);
    let beta = 0.5 * (m.r - m.u);
    let gamma = 0.5 * (m.t + m.s);
    let tau = 0.5 * (m.t - m.s);
    let cross = a.theta().sin()
        * b.theta().sin()
        * ((((m.r - m.s - m.t + m.u) * sx - (m.r - m.u)) / 4.0) * (a.phi() + b.phi()).sin()
            + ((m.s - m.t) / 4.0) * (a.phi() - b.phi()).sin());
    (alpha + beta * sx * (2.0 * (a.phi() + b.phi())).cos()) * ca * cb
        + (gamma + tau * sx * (2.0 * b.phi()).cos()) * sa * cb
        + (gamma - tau * sx * (2.0 * a.phi()).cos()) * ca * sb
        + (alpha - beta * sx) * sa * sb
        + cross
}

/// Alice's payoff under product measurement (δ = 0); no range checks.
pub(crate) fn product_alice(
    m: &ClassicalPayoffMatrix,
    xi: f64,
    a: StrategyParams,
    b: StrategyParams,
) -> f64 {
    let x = (xi / 2.0).sin().powi(2);
    let ca = (a.theta() / 2.0).cos().powi(2);
    let sa = 1.0 - ca;
    let cb = (b.theta() / 2.0).cos().powi(2);
    let sb = 1.0 - cb;
    let cross = ((m.r + m.u - m.s - m.t) / 4.0)
        * xi.sin()
        * a.theta().sin()
        * b.theta().sin()
        * (a.phi() + b.phi()).sin();
    (m.r * (1.0 - x) + m.u * x) * ca * cb
        + (m.t * (1.0 - x) + m.s * x) * sa * cb
        + (m.s * (1.0 - x) + m.t * x) * ca * sb
        + (m.u * (1.0 - x) + m.r * x) * sa * sb
        + cross
}

/// Both players' payoffs under entangled measurement for an arbitrary
/// classical matrix.
pub fn payoff_entangled_with(
    m: &ClassicalPayoffMatrix,
    xi: f64,
    a: StrategyParams,
    b: StrategyParams,
) -> Result<(f64, f64)> {
    check_xi(xi)?;
    Ok((entangled_alice(m, xi, a, b), entangled_alice(m, xi, b, a)))
}

/// Both players' payoffs under entangled measurement, canonical matrix.
pub fn payoff_entangled(xi: f64, a: StrategyParams, b: StrategyParams) -> Result<(f64, f64)> {
    payoff_entangled_with(&ClassicalPayoffMatrix::DEFAULT, xi, a, b)
}

/// Both players' payoffs under product measurement for an arbitrary matrix.
pub fn payoff_product_with(
    m: &ClassicalPayoffMatrix,
    xi: f64,
    a: StrategyParams,
    b: StrategyParams,
) -> Result<(f64, f64)> {
    check_xi(xi)?;
    Ok((product_alice(m, xi, a, b), product_alice(m, xi, b, a)))
}

/// Both players' payoffs under product measurement, canonical matrix.
pub fn payoff_product(xi: f64, a: StrategyParams, b: StrategyParams) -> Result<(f64, f64)> {
    payoff_product_with(&ClassicalPayoffMatrix::DEFAULT, xi, a, b)
}

/// Effective strategic-form elements under entangled measurement.
///
/// Each element is a (1 ± sin ξ)/2 mixture of a classical pair: R pairs with
/// U and S pairs with T. At sin ξ = 1 the classical matrix is recovered.
pub fn quad_entangled_with(m: &ClassicalPayoffMatrix, xi: f64) -> Result<PayoffQuad> {
    check_xi(xi)?;
    let sx = xi.sin();
    let hi = 0.5 * (1.0 + sx);
    let lo = 0.5 * (1.0 - sx);
    Ok(PayoffQuad::new(
        m.r * hi + m.u * lo,
        m.s * hi + m.t * lo,
        m.t * hi + m.s * lo,
        m.u * hi + m.r * lo,
    ))
}

/// Entangled-measurement elements for the canonical matrix:
/// (2 + sin ξ, (5 - 5 sin ξ)/2, (5 + 5 sin ξ)/2, 2 - sin ξ).
pub fn quad_entangled(xi: f64) -> Result<PayoffQuad> {
    quad_entangled_with(&ClassicalPayoffMatrix::DEFAULT, xi)
}

/// Effective strategic-form elements under product measurement.
///
/// With x = sin²(ξ/2), each element is a (1-x, x) mixture of a classical
/// pair: R with U and S with T. At x = 0 the classical matrix is recovered;
/// reaching x = 1 needs the extended domain ξ ∈ [0, π].
pub fn quad_product_with(m: &ClassicalPayoffMatrix, xi: f64) -> Result<PayoffQuad> {
    check_xi(xi)?;
    let x = (xi / 2.0).sin().powi(2);
    Ok(PayoffQuad::new(
        m.r * (1.0 - x) + m.u * x,
        m.s * (1.0 - x) + m.t * x,
        m.t * (1.0 - x) + m.s * x,
        m.u * (1.0 - x) + m.r * x,
    ))
}

/// Product-measurement elements for the canonical matrix:
/// (3 - 2x, 5x, 5 - 5x, 1 + 2x) with x = sin²(ξ/2).
pub fn quad_product(xi: f64) -> Result<PayoffQuad> {
    quad_product_with(&ClassicalPayoffMatrix::DEFAULT, xi)
}
