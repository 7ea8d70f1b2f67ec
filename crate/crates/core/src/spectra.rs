//! Closed-form energy levels, the root filter that keeps only roots obeying
//! the quantization condition, regime classification and figure data.
//!
//! Every level is checked against
//!
//! ```text
//! n_eff sqrt(E^2 - m^2) = m A2 + A1 E,   with m A2 + A1 E > 0
//! ```
//!
//! using the principal (nonnegative) square root. Roots failing it are kept
//! in the output with `valid = false` so callers can see what was rejected.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::qnum::{self, Channel, Couplings, EffectiveParams, PrincipalState};
use crate::{tol, Error, Model, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl core::fmt::Display for Branch {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    /// `E/m`.
    pub ratio: f64,
    pub branch: Branch,
    pub valid: bool,
    /// `|n_eff sqrt(E^2 - m^2) - (m A2 + A1 E)| / m`.
    pub quantization_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Regular,
    FlownAway,
    Broken,
    Threshold,
}

impl core::fmt::Display for Regime {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Regime::Regular => "Regular",
            Regime::FlownAway => "FlownAway",
            Regime::Broken => "Broken",
            Regime::Threshold => "Threshold",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeReport {
    pub regime: Regime,
    pub detail: String,
}

impl RegimeReport {
    fn new(regime: Regime, detail: String) -> Self {
        Self { regime, detail }
    }

    fn from_error(err: &Error) -> Self {
        let regime = match err {
            Error::BrokenRegime { .. } => Regime::Broken,
            _ => Regime::FlownAway,
        };
        Self::new(regime, format!("{err}"))
    }
}

/// Candidate levels of one state together with its regime.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub levels: Vec<EnergyLevel>,
    pub report: RegimeReport,
}

impl Spectrum {
    fn empty(report: RegimeReport) -> Self {
        Self {
            levels: Vec::new(),
            report,
        }
    }

    pub fn valid_levels(&self) -> impl Iterator<Item = &EnergyLevel> {
        self.levels.iter().filter(|l| l.valid)
    }

    pub fn level(&self, branch: Branch) -> Option<&EnergyLevel> {
        self.levels.iter().find(|l| l.branch == branch)
    }
}

/// Evaluates the quantization condition for a candidate `E/m`.
pub fn check_level(n_eff: f64, couplings: &Couplings, ratio: f64, branch: Branch) -> EnergyLevel {
    let rhs = couplings.a2 + couplings.a1 * ratio;
    let gap = ratio * ratio - 1.0;
    let residual = (n_eff * libm::sqrt(gap.max(0.0)) - rhs).abs();
    let valid = ratio.is_finite()
        && gap >= 0.0
        && rhs > tol::THRESHOLD
        && residual <= tol::QUANTIZATION * rhs.max(1.0);
    EnergyLevel {
        ratio,
        branch,
        valid,
        quantization_residual: residual,
    }
}

/// The two roots `E/m = p +- sqrt(p^2 + (n^2 + A2^2)/(n^2 - A1^2))` with
/// `p = A1 A2 / (n^2 - A1^2)`, filtered by the quantization condition.
pub fn energy_general(model: Model, channel: &Channel, state: &PrincipalState, couplings: &Couplings) -> Spectrum {
    match qnum::effective_params(model, channel, state, couplings) {
        Ok(params) => levels_from_params(&params, couplings),
        Err(err) => Spectrum::empty(RegimeReport::from_error(&err)),
    }
}

fn levels_from_params(params: &EffectiveParams, couplings: &Couplings) -> Spectrum {
    let n2 = params.n_eff * params.n_eff;
    let (a1, a2) = (couplings.a1, couplings.a2);
    let denom = n2 - a1 * a1;
    if denom.abs() < tol::FLOWN_AWAY * n2 {
        return Spectrum::empty(RegimeReport::new(
            Regime::FlownAway,
            format!("pole n_eff^2 = A1^2 (n_eff = {}, A1 = {a1})", params.n_eff),
        ));
    }
    let p = a1 * a2 / denom;
    let disc = p * p + (n2 + a2 * a2) / denom;
    if disc < 0.0 {
        return Spectrum::empty(RegimeReport::new(
            Regime::Broken,
            format!("complex energies: discriminant {disc} < 0"),
        ));
    }
    let root = libm::sqrt(disc);
    let candidates = [(p + root, Branch::Plus), (p - root, Branch::Minus)];

    let vanishing = candidates
        .iter()
        .all(|(e, _)| (a2 + a1 * e).abs() <= tol::THRESHOLD);
    if vanishing {
        return Spectrum {
            levels: alloc::vec![check_level(params.n_eff, couplings, 1.0, Branch::Plus)],
            report: RegimeReport::new(
                Regime::Threshold,
                String::from("vanishing coupling: E/m = 1 is the limit of the free particle"),
            ),
        };
    }

    let levels: Vec<_> = candidates
        .iter()
        .map(|&(e, b)| check_level(params.n_eff, couplings, e, b))
        .collect();
    let report = if levels.iter().any(|l| l.valid) {
        RegimeReport::new(Regime::Regular, String::from("discrete level(s) present"))
    } else {
        RegimeReport::new(
            Regime::FlownAway,
            format!("no root satisfies the quantization condition (n_eff = {})", params.n_eff),
        )
    };
    Spectrum { levels, report }
}

fn dirac_n_tilde(channel: &Channel, state: &PrincipalState, gamma: f64) -> f64 {
    f64::from(state.n()) - channel.j() - 0.5 + gamma
}

/// Pure vector coupling `A1 = Z alpha`:
/// `E/m = [1 - (Z alpha)^2 / n_tilde^2]^(-1/2)`, positive branch only.
pub fn energy_case1(channel: &Channel, state: &PrincipalState, z_alpha: f64) -> Result<EnergyLevel> {
    let couplings = Couplings::new(z_alpha, 0.0)?;
    let gamma = qnum::gamma(channel, &couplings)?;
    let n_tilde = dirac_n_tilde(channel, state, gamma);
    if n_tilde <= z_alpha {
        return Err(Error::FlownAway {
            reason: "n_tilde <= Z alpha",
            n_eff: n_tilde,
            a1: z_alpha,
        });
    }
    let x = z_alpha / n_tilde;
    let ratio = 1.0 / libm::sqrt(1.0 - x * x);
    Ok(check_level(n_tilde, &couplings, ratio, Branch::Plus))
}

/// Pure vector coupling for states with `n = j + 1/2`:
/// `E/m = sqrt(1 + (Z alpha)^2 / n^2)`.
pub fn energy_case1_special(n: u32, z_alpha: f64) -> EnergyLevel {
    let nf = f64::from(n);
    let ratio = libm::sqrt(1.0 + z_alpha * z_alpha / (nf * nf));
    let n_tilde = libm::sqrt(nf * nf + z_alpha * z_alpha);
    let couplings = Couplings {
        a1: z_alpha,
        a2: 0.0,
        m: 1.0,
    };
    check_level(n_tilde, &couplings, ratio, Branch::Plus)
}

/// Pure scalar coupling: `E/m = +- sqrt(1 + A2^2 / n_tilde^2)`, both
/// branches admissible.
pub fn energy_case2(channel: &Channel, state: &PrincipalState, a2: f64) -> Result<Spectrum> {
    let couplings = Couplings::new(0.0, a2)?;
    let gamma = qnum::gamma(channel, &couplings)?;
    let n_tilde = dirac_n_tilde(channel, state, gamma);
    if n_tilde <= 0.0 {
        return Err(Error::FlownAway {
            reason: "n_tilde <= 0",
            n_eff: n_tilde,
            a1: 0.0,
        });
    }
    Ok(symmetric_pair(n_tilde, &couplings))
}

fn symmetric_pair(n_eff: f64, couplings: &Couplings) -> Spectrum {
    let a2 = couplings.a2;
    let x = libm::sqrt(1.0 + a2 * a2 / (n_eff * n_eff));
    let levels = alloc::vec![
        check_level(n_eff, couplings, x, Branch::Plus),
        check_level(n_eff, couplings, -x, Branch::Minus),
    ];
    let report = if a2 == 0.0 {
        RegimeReport::new(Regime::Threshold, String::from("vanishing coupling: E/m = +-1 threshold"))
    } else {
        RegimeReport::new(Regime::Regular, String::from("symmetric pair"))
    };
    Spectrum { levels, report }
}

/// Equal couplings `A1 = A2 = A`: `E/m = 1 + 2A^2/(n^2 - A^2)`.
///
/// For `A > n` the value lies below `-1`; it is returned (as the `Minus`
/// root, marked invalid by the strict filter) so that the flown-away
/// continuation can be plotted.
pub fn energy_case3(n: u32, a: f64) -> Result<EnergyLevel> {
    let nf = f64::from(n);
    if (nf - a).abs() < tol::FLOWN_AWAY * nf {
        return Err(Error::FlownAway {
            reason: "A = n",
            n_eff: nf,
            a1: a,
        });
    }
    let denom = nf * nf - a * a;
    let ratio = 1.0 + 2.0 * a * a / denom;
    let branch = if denom > 0.0 { Branch::Plus } else { Branch::Minus };
    let couplings = Couplings { a1: a, a2: a, m: 1.0 };
    Ok(check_level(nf, &couplings, ratio, branch))
}

/// Coupling pattern of the Klein-Gordon special cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KgCase {
    /// `A2 = 0`, coupling is `A1`.
    A2Zero,
    /// `A1 = 0`, coupling is `A2`.
    A1Zero,
    /// `A1 = A2`.
    Equal,
}

/// Closed-form Klein-Gordon levels for the three special coupling patterns.
pub fn energy_kg(case: KgCase, l: u32, n: u32, coupling: f64) -> Result<Spectrum> {
    if n < l + 1 {
        return Err(Error::InvalidState {
            reason: "principal quantum number must satisfy n >= l + 1",
        });
    }
    let base = f64::from(n) - f64::from(l) - 0.5;
    match case {
        KgCase::A2Zero => {
            let couplings = Couplings::new(coupling, 0.0)?;
            let n_tilde = base + qnum::kg_root(l, &couplings)?;
            if n_tilde <= coupling {
                return Err(Error::FlownAway {
                    reason: "N_tilde <= A1",
                    n_eff: n_tilde,
                    a1: coupling,
                });
            }
            let x = coupling / n_tilde;
            let level = check_level(n_tilde, &couplings, 1.0 / libm::sqrt(1.0 - x * x), Branch::Plus);
            let report = if coupling == 0.0 {
                RegimeReport::new(Regime::Threshold, String::from("vanishing coupling"))
            } else {
                RegimeReport::new(Regime::Regular, String::from("positive branch only"))
            };
            Ok(Spectrum {
                levels: alloc::vec![level],
                report,
            })
        }
        KgCase::A1Zero => {
            let couplings = Couplings::new(0.0, coupling)?;
            let n_tilde = base + qnum::kg_root(l, &couplings)?;
            if n_tilde <= 0.0 {
                return Err(Error::FlownAway {
                    reason: "N_tilde <= 0",
                    n_eff: n_tilde,
                    a1: 0.0,
                });
            }
            Ok(symmetric_pair(n_tilde, &couplings))
        }
        KgCase::Equal => {
            let level = energy_case3(n, coupling)?;
            let report = if coupling == 0.0 {
                RegimeReport::new(Regime::Threshold, String::from("vanishing coupling"))
            } else if level.valid {
                RegimeReport::new(Regime::Regular, String::from("positive branch only"))
            } else {
                RegimeReport::new(Regime::FlownAway, String::from("A > n: below -m, fails quantization"))
            };
            Ok(Spectrum {
                levels: alloc::vec![level],
                report,
            })
        }
    }
}

/// One curve of figure data. Ordinates at `gaps` are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesData {
    pub label: String,
    pub n: u32,
    pub abscissa: Vec<f64>,
    pub ordinate: Vec<f64>,
    pub gaps: Vec<usize>,
}

/// Principal quantum numbers of the Case 1 figure.
pub const FIGURE1_N: [u32; 14] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 20, 30, 40, 50];
/// Principal quantum numbers of the Case 3 figure.
pub const FIGURE2_N: [u32; 6] = [1, 2, 3, 4, 5, 6];
/// Default `(min, max, steps)` of the `Z alpha` grid.
pub const FIGURE1_GRID: (f64, f64, usize) = (0.0, 5.0, 501);
/// Default `(min, max, steps)` of the `A` grid.
pub const FIGURE2_GRID: (f64, f64, usize) = (0.0, 10.0, 1001);

/// `steps` equally spaced points from `min` to `max` inclusive, computed as
/// `min + (max - min) i / (steps - 1)` so that round values land exactly.
pub fn linspace(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps < 2 || !(max > min) || !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidGrid("need steps >= 2 and finite max > min"));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|i| min + (max - min) * (i as f64) / last).collect())
}

fn check_series_input(n_list: &[u32], grid: &[f64]) -> Result<()> {
    if n_list.is_empty() || grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid or n list"));
    }
    if n_list.contains(&0) {
        return Err(Error::InvalidGrid("n must be positive"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::InvalidGrid("abscissa must be finite, nonnegative and strictly increasing"));
    }
    Ok(())
}

fn series(n: u32, grid: &[f64], eval: impl Fn(f64) -> Option<f64>) -> SeriesData {
    let mut ordinate = Vec::with_capacity(grid.len());
    let mut gaps = Vec::new();
    for (i, &x) in grid.iter().enumerate() {
        match eval(x) {
            Some(y) => ordinate.push(y),
            None => {
                ordinate.push(f64::NAN);
                gaps.push(i);
            }
        }
    }
    SeriesData {
        label: format!("n={n}"),
        n,
        abscissa: grid.to_vec(),
        ordinate,
        gaps,
    }
}

/// `E/m` of `n = j + 1/2` states against `Z alpha`, one series per `n`.
pub fn figure1_data(n_list: &[u32], z_alpha_grid: &[f64]) -> Result<Vec<SeriesData>> {
    check_series_input(n_list, z_alpha_grid)?;
    Ok(n_list
        .iter()
        .map(|&n| series(n, z_alpha_grid, |z| Some(energy_case1_special(n, z).ratio)))
        .collect())
}

/// `E/m` for equal couplings against `A`, one series per `n`, with a gap
/// where the state flies away (`A = n`).
pub fn figure2_data(n_list: &[u32], a_grid: &[f64]) -> Result<Vec<SeriesData>> {
    check_series_input(n_list, a_grid)?;
    Ok(n_list
        .iter()
        .map(|&n| series(n, a_grid, |a| energy_case3(n, a).ok().map(|l| l.ratio)))
        .collect())
}
