use thiserror::Error;

/// Errors produced by the game engine.
#[derive(Debug, Error)]
pub enum Error {
    /// An angle was outside its documented closed interval. Angles are
    /// rejected rather than wrapped so that sweep code cannot silently feed
    /// garbage through trigonometric identities.
    #[error("{name} = {value} is outside [{lo}, {hi}] rad")]
    AngleOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// A payoff element was NaN or infinite.
    #[error("payoff element {name} = {value} is not finite")]
    NonFinitePayoff { name: &'static str, value: f64 },

    /// A vector that must be a quantum state failed the normalization check.
    #[error("vector is not normalized: |⟨v|v⟩ - 1| = {0:.3e}")]
    NotNormalized(f64),

    /// A matrix that must be unitary failed the UU† = I check.
    #[error("matrix is not unitary: max |UU† - I| = {0:.3e}")]
    NotUnitary(f64),

    /// Tr(Pρ) came out with a non-negligible imaginary part, which signals a
    /// corrupted payoff operator or state.
    #[error("trace product has a non-negligible imaginary part: |Im| = {0:.3e}")]
    ComplexTrace(f64),

    /// The deviation-search grid is too coarse to be trusted.
    #[error("deviation grid needs at least {min} points per axis, got {got}")]
    GridTooCoarse { min: usize, got: usize },

    /// Bisection needs the certification outcome to differ at the two ends of
    /// the scanned interval.
    #[error("equilibrium certification gives the same outcome at both scan endpoints")]
    NoThresholdCrossing,

    /// The scanned interval is empty or reversed.
    #[error("invalid scan interval: lo = {lo} must be strictly below hi = {hi}")]
    BadScanInterval { lo: f64, hi: f64 },

    /// A sweep or report was asked for with too few samples.
    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    /// Closed-form sweeps exist only for the entangled and product bases.
    #[error("sweeps are only defined for the entangled and product measurement bases")]
    GeneralMeasurementSweep,
}

pub type Result<T> = std::result::Result<T, Error>;
