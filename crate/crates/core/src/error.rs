use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid channel: 2j = {two_j}, omega = {omega} (2j must be odd and positive, omega = +-1)")]
    InvalidChannel { two_j: u32, omega: i32 },

    #[error("invalid couplings: a1 = {a1}, a2 = {a2}, m = {m} (need a1, a2 >= 0 and m > 0)")]
    InvalidCouplings { a1: f64, a2: f64, m: f64 },

    #[error("invalid state: {reason}")]
    InvalidState { reason: &'static str },

    /// The effective angular momentum is not real: `K^2 + A1^2 - A2^2 <= 0`
    /// (or its Klein-Gordon analogue).
    #[error("broken regime: radicand {radicand} <= 0, coupling a2 = {a2} reaches the critical value {critical}")]
    BrokenRegime {
        radicand: f64,
        a2: f64,
        critical: f64,
    },

    /// The level has left the discrete spectrum.
    #[error("state flown away: {reason} (n_eff = {n_eff}, a1 = {a1})")]
    FlownAway {
        reason: &'static str,
        n_eff: f64,
        a1: f64,
    },

    #[error("singular similarity transform: |a^2 - b^2| = {determinant}")]
    SingularTransform { determinant: f64 },

    #[error("level is inconsistent with the quantization condition: mismatch {mismatch}")]
    InconsistentLevel { mismatch: f64 },

    #[error("finite-difference grid too coarse: estimated error {estimate} exceeds {tolerance}")]
    GridTooCoarse { estimate: f64, tolerance: f64 },

    #[error("guard violated: {0}")]
    Guard(&'static str),

    #[error("matrix is not square or has non-finite entries")]
    BadMatrix,

    #[error("no discrete spectrum: Coulomb coefficient mA2 + A1 E vanishes")]
    NoDiscreteSpectrum,

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("iteration did not converge after {iterations} steps (last change {last_change})")]
    NotConverged { iterations: usize, last_change: f64 },

    #[error("lost eigenvalue tracking: nearest eigenvalue at distance {distance} exceeds trust radius {radius}")]
    LostTracking { distance: f64, radius: f64 },
}
