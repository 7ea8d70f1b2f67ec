//! Numerical tolerances shared across modules.

/// Algebraic identities (boost parameters, constraint residuals).
pub const ALGEBRAIC: f64 = 1e-12;
/// Products of explicit 4x4 matrices.
pub const MATRIX_PRODUCT: f64 = 1e-13;
/// Clifford-algebra identities of the Dirac matrices.
pub const MATRIX_IDENTITY: f64 = 1e-14;
/// Below this `|a^2 - b^2|` the similarity transform is singular.
pub const SINGULAR_TRANSFORM: f64 = 1e-14;
/// Relative width of the pole `n_eff^2 = A1^2`.
pub const FLOWN_AWAY: f64 = 1e-9;
/// Quantization residual allowed for a valid level, relative to `max(1, |mA2 + A1 E|/m)`.
pub const QUANTIZATION: f64 = 1e-10;
/// `|mA2 + A1 E| / m` at or below this is treated as a vanishing Coulomb coefficient.
pub const THRESHOLD: f64 = 1e-14;
/// Consistency of `-q^2` with `E^2 - m^2` when building an eigenfunction.
pub const Q_CONSISTENCY: f64 = 1e-10;
/// Acceptance bound on the ODE residual of the analytic eigenfunction.
pub const ODE_RESIDUAL: f64 = 1e-8;
/// Acceptance bound on the coupled first-order system residual.
pub const CLOSURE_RESIDUAL: f64 = 1e-6;
/// Safety factor applied to Richardson differences when estimating grid error.
pub const GRID_SAFETY_FACTOR: f64 = 1.25;
