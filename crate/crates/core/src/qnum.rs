//! Quantum numbers of a radial channel and the effective (generally
//! irrational) angular momentum and principal quantum number that replace
//! them once the imaginary Coulomb couplings are switched on.

use crate::{Error, Model, Result};

/// A spin-orbit channel `(j, omega)` with `l = j + omega/2` and
/// `K = omega (j + 1/2)`.
///
/// `j` is stored doubled so that every channel quantity stays an exact
/// integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Channel {
    two_j: u32,
    omega: i32,
}

impl Channel {
    pub fn new(two_j: u32, omega: i32) -> Result<Self> {
        if two_j % 2 == 0 || !(omega == 1 || omega == -1) {
            return Err(Error::InvalidChannel { two_j, omega });
        }
        // l = (2j + omega)/2 >= 0 holds for every odd 2j >= 1.
        Ok(Self { two_j, omega })
    }

    /// Channel used for spin-0 (Klein-Gordon) states: only `l` matters, so
    /// the `j = l + 1/2`, `omega = -1` representative is used.
    pub fn orbital(l: u32) -> Self {
        Self {
            two_j: 2 * l + 1,
            omega: -1,
        }
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn omega(&self) -> i32 {
        self.omega
    }

    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    /// Orbital angular momentum `l = j + omega/2`.
    pub fn l(&self) -> u32 {
        ((self.two_j as i64 + i64::from(self.omega)) / 2) as u32
    }

    /// Spin-orbit quantum number `K = omega (j + 1/2)`.
    pub fn kappa(&self) -> i32 {
        self.omega * ((self.two_j as i32 + 1) / 2)
    }

    pub fn abs_kappa(&self) -> f64 {
        f64::from(self.kappa().unsigned_abs())
    }
}

/// Strengths of the vector (`-i A1/r`) and scalar (`-i A2/r`) parts of the
/// potential, and the mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub a1: f64,
    pub a2: f64,
    pub m: f64,
}

impl Couplings {
    /// Couplings at unit mass.
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        Self::with_mass(a1, a2, 1.0)
    }

    pub fn with_mass(a1: f64, a2: f64, m: f64) -> Result<Self> {
        let ok = a1.is_finite() && a2.is_finite() && m.is_finite() && a1 >= 0.0 && a2 >= 0.0 && m > 0.0;
        if !ok {
            return Err(Error::InvalidCouplings { a1, a2, m });
        }
        Ok(Self { a1, a2, m })
    }

    /// Coefficient of the effective Coulomb term, `m A2 + A1 E`.
    pub fn coulomb_coefficient(&self, energy: f64) -> f64 {
        self.m * self.a2 + self.a1 * energy
    }
}

/// Principal quantum number together with the radial quantum number
/// `n_r = n - l - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrincipalState {
    n: u32,
    n_r: u32,
}

impl PrincipalState {
    pub fn new(n: u32, channel: &Channel) -> Result<Self> {
        let l = channel.l();
        if n < l + 1 {
            return Err(Error::InvalidState {
                reason: "principal quantum number must satisfy n >= l + 1",
            });
        }
        Ok(Self { n, n_r: n - l - 1 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn n_r(&self) -> u32 {
        self.n_r
    }
}

/// Effective parameters of the reduced Coulomb problem.
///
/// For Dirac states `gamma` is `sqrt(K^2 + A1^2 - A2^2)` and
/// `l_eff = -1/2 + gamma + omega/2`. For Klein-Gordon states `gamma` holds
/// `sqrt((l + 1/2)^2 + A1^2 - A2^2)` and `l_eff = gamma - 1/2`. In both
/// cases `n_eff = n_r + l_eff + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveParams {
    pub gamma: f64,
    pub l_eff: f64,
    pub n_eff: f64,
}

impl EffectiveParams {
    /// The centrifugal coefficient `l_eff (l_eff + 1)`.
    pub fn centrifugal(&self) -> f64 {
        self.l_eff * (self.l_eff + 1.0)
    }
}

/// `gamma = sqrt(K^2 + A1^2 - A2^2)`, the positive root.
pub fn gamma(channel: &Channel, couplings: &Couplings) -> Result<f64> {
    let k = channel.abs_kappa();
    positive_root(k, couplings)
}

/// Klein-Gordon analogue of [`gamma`]: `sqrt((l + 1/2)^2 + A1^2 - A2^2)`.
pub fn kg_root(l: u32, couplings: &Couplings) -> Result<f64> {
    positive_root(f64::from(l) + 0.5, couplings)
}

fn positive_root(base: f64, couplings: &Couplings) -> Result<f64> {
    let radicand = base * base + couplings.a1 * couplings.a1 - couplings.a2 * couplings.a2;
    if radicand <= 0.0 {
        return Err(Error::BrokenRegime {
            radicand,
            a2: couplings.a2,
            critical: libm::sqrt(base * base + couplings.a1 * couplings.a1),
        });
    }
    Ok(libm::sqrt(radicand))
}

pub fn effective_params(
    model: Model,
    channel: &Channel,
    state: &PrincipalState,
    couplings: &Couplings,
) -> Result<EffectiveParams> {
    let n_r = f64::from(state.n_r());
    let (gamma, l_eff) = match model {
        Model::Dirac => {
            let g = gamma(channel, couplings)?;
            (g, -0.5 + g + f64::from(channel.omega()) / 2.0)
        }
        Model::KleinGordon => {
            let root = kg_root(channel.l(), couplings)?;
            (root, root - 0.5)
        }
    };
    let n_eff = n_r + l_eff + 1.0;
    if n_eff <= 0.0 {
        return Err(Error::InvalidState {
            reason: "effective principal quantum number is not positive",
        });
    }
    Ok(EffectiveParams { gamma, l_eff, n_eff })
}
