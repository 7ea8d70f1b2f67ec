//! The `levels`, `figure`, `verify` and `solve` commands.
//!
//! Each command validates its arguments, computes a [`Table`] and reports
//! whether its checks passed; writing the table is left to the caller.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cxcoulomb_core::contour::{self, ContourGrid};
use cxcoulomb_core::qnum::{self, Channel, Couplings, PrincipalState};
use cxcoulomb_core::spectra::{self, Branch, Regime, SeriesData};
use cxcoulomb_core::Model;

use crate::table::{format_float, Cell, Format, Table};
use crate::verify;
use crate::RunError;

#[derive(Debug, Parser)]
#[command(name = "cxcoulomb", version, about = "Spectra of Dirac and Klein-Gordon particles in imaginary Coulomb fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form energy levels.
    Levels(LevelsArgs),
    /// Figure data series as CSV.
    Figure(FigureArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Rotated-contour solve compared with the closed form.
    Solve(SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Dirac,
    Kg,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Dirac => Model::Dirac,
            ModelArg::Kg => Model::KleinGordon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

/// Model, channel and couplings shared by `levels` and `solve`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct SystemArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Dirac)]
    pub model: ModelArg,
    /// Twice the total angular momentum (Dirac; default 1).
    #[arg(long)]
    pub two_j: Option<u32>,
    /// Sign omega = +1 or -1 selecting l = j + omega/2 (Dirac; default -1).
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<i32>,
    /// Orbital angular momentum (Klein-Gordon; default 0).
    #[arg(long)]
    pub l: Option<u32>,
    /// Vector coupling A1.
    #[arg(long, allow_negative_numbers = true)]
    pub a1: Option<f64>,
    /// Scalar coupling A2.
    #[arg(long, allow_negative_numbers = true)]
    pub a2: Option<f64>,
    /// Pure vector coupling: sets A1 = Z alpha and A2 = 0.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["a1", "a2"])]
    pub z_alpha: Option<f64>,
    /// Particle mass.
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
}

impl SystemArgs {
    pub fn model(&self) -> Model {
        self.model.into()
    }

    pub fn channel(&self) -> Result<Channel, RunError> {
        match self.model {
            ModelArg::Dirac => {
                if self.l.is_some() {
                    return Err(RunError::Invalid("--l applies to --model kg; use --two-j and --omega".into()));
                }
                Ok(Channel::new(self.two_j.unwrap_or(1), self.omega.unwrap_or(-1))?)
            }
            ModelArg::Kg => {
                if self.two_j.is_some() || self.omega.is_some() {
                    return Err(RunError::Invalid("--two-j/--omega apply to --model dirac; use --l".into()));
                }
                Ok(Channel::orbital(self.l.unwrap_or(0)))
            }
        }
    }

    pub fn couplings(&self) -> Result<Couplings, RunError> {
        let (a1, a2) = match self.z_alpha {
            Some(z) => (z, 0.0),
            None => (self.a1.unwrap_or(0.0), self.a2.unwrap_or(0.0)),
        };
        Ok(Couplings::with_mass(a1, a2, self.m)?)
    }
}

/// Output format and destination.
#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LevelsArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Principal quantum numbers (comma separated).
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub n: Vec<u32>,
    /// Also list roots rejected by the quantization condition.
    #[arg(long)]
    pub all_roots: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum Which {
    #[value(name = "1")]
    #[serde(rename = "1")]
    One,
    #[value(name = "2")]
    #[serde(rename = "2")]
    Two,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FigureArgs {
    /// 1: E/m of n = j + 1/2 states against Z alpha; 2: equal couplings against A.
    #[arg(long, value_enum)]
    pub which: Which,
    /// Smallest abscissa (default 0)
    #[arg(long, allow_negative_numbers = true)]
    pub grid_min: Option<f64>,
    /// Largest abscissa (default 5 for figure 1, 10 for figure 2)
    #[arg(long, allow_negative_numbers = true)]
    pub grid_max: Option<f64>,
    /// Number of abscissae including both ends (default 501 or 1001)
    #[arg(long)]
    pub grid_steps: Option<usize>,
    /// Principal quantum numbers (comma separated).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub n_list: Option<Vec<u32>>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Residual,
    Closure,
    Eig,
    All,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Seed of the random draws.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Random draws (algebra: parameter sets, default 10000; eig: matrices, default 100).
    #[arg(long)]
    pub draws: Option<usize>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Principal quantum number
    #[arg(long)]
    pub n: u32,
    /// Branch of the closed-form level to reproduce (default: first valid).
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Grid points.
    #[arg(long, default_value_t = ContourGrid::DEFAULT_POINTS)]
    pub points: usize,
    /// Contour length (default max(25 n_eff, 40) / |q|).
    #[arg(long)]
    pub rho_max: Option<f64>,
    /// Rotation angle in radians (default -sign(B) pi/4).
    #[arg(long, allow_negative_numbers = true)]
    pub angle: Option<f64>,
    /// Mixing factor of the outer fixed-point update, in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    pub damping: f64,
    /// Starting E/m (default: closed form plus 5%).
    #[arg(long, allow_negative_numbers = true)]
    pub initial_guess: Option<f64>,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

/// Result of a command: its table and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub passed: bool,
}

fn sorted_unique(n: &[u32]) -> Vec<u32> {
    let mut n = n.to_vec();
    n.sort_unstable();
    n.dedup();
    n
}

pub fn levels(args: &LevelsArgs) -> Result<Outcome, RunError> {
    let model = args.system.model();
    let channel = args.system.channel()?;
    let couplings = args.system.couplings()?;
    let mut table = Table::new(vec![
        "model",
        "n",
        "l",
        "two_j",
        "omega",
        "a1",
        "a2",
        "branch",
        "e_over_m",
        "valid",
        "regime",
        "quantization_residual",
    ]);
    for n in sorted_unique(&args.n) {
        let state = PrincipalState::new(n, &channel)?;
        let spectrum = spectra::energy_general(model, &channel, &state, &couplings);
        let mut levels = spectrum.levels.clone();
        levels.sort_by_key(|l| l.branch);
        for level in levels.iter().filter(|l| l.valid || args.all_roots) {
            table.push(vec![
                Cell::from(model.to_string()),
                Cell::from(n),
                Cell::from(channel.l()),
                Cell::from(channel.two_j()),
                Cell::from(channel.omega()),
                Cell::from(couplings.a1),
                Cell::from(couplings.a2),
                Cell::from(level.branch.to_string()),
                Cell::from(level.ratio),
                Cell::from(level.valid),
                Cell::from(spectrum.report.regime.to_string()),
                Cell::from(level.quantization_residual),
            ]);
        }
        table
            .diagnostics
            .push(format!("n={n}: {}: {}", spectrum.report.regime, spectrum.report.detail));
    }
    Ok(Outcome { table, passed: true })
}

/// Figure series for `args`, with defaults filled in.
pub fn figure_series(args: &FigureArgs) -> Result<Vec<SeriesData>, RunError> {
    let (defaults, n_default): ((f64, f64, usize), &[u32]) = match args.which {
        Which::One => (spectra::FIGURE1_GRID, &spectra::FIGURE1_N),
        Which::Two => (spectra::FIGURE2_GRID, &spectra::FIGURE2_N),
    };
    let grid = spectra::linspace(
        args.grid_min.unwrap_or(defaults.0),
        args.grid_max.unwrap_or(defaults.1),
        args.grid_steps.unwrap_or(defaults.2),
    )?;
    let n_list = args.n_list.as_deref().unwrap_or(n_default);
    let series = match args.which {
        Which::One => spectra::figure1_data(n_list, &grid)?,
        Which::Two => spectra::figure2_data(n_list, &grid)?,
    };
    Ok(series)
}

/// Figure CSV: two comment lines, then the abscissa column and one column
/// per `n` with empty cells at gaps.
pub fn write_figure(args: &FigureArgs, series: &[SeriesData], mut out: impl Write) -> Result<(), RunError> {
    let (number, abscissa) = match args.which {
        Which::One => (1, "z_alpha"),
        Which::Two => (2, "A"),
    };
    writeln!(out, "# figure={number}")?;
    writeln!(out, "# generated-by=cxcoulomb")?;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![abscissa.to_owned()];
    header.extend(series.iter().map(|s| s.label.clone()));
    w.write_record(&header)?;
    let rows = series.first().map_or(0, |s| s.abscissa.len());
    for i in 0..rows {
        let mut record = vec![format_float(series[0].abscissa[i])];
        record.extend(series.iter().map(|s| format_float(s.ordinate[i])));
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, RunError> {
    if args.draws == Some(0) {
        return Err(RunError::Invalid("--draws must be positive".into()));
    }
    let mut checks = Vec::new();
    let run = |suite: Suite| args.suite == suite || args.suite == Suite::All;
    if run(Suite::Algebra) {
        checks.extend(verify::algebra(args.seed, args.draws.unwrap_or(10_000)));
    }
    if run(Suite::Residual) {
        checks.extend(verify::residual()?);
    }
    if run(Suite::Closure) {
        checks.extend(verify::closure()?);
    }
    if run(Suite::Eig) {
        checks.extend(verify::eig(args.seed, args.draws.unwrap_or(100)));
    }
    let passed = checks.iter().all(verify::Check::passed);
    Ok(Outcome {
        table: verify::report(&checks),
        passed,
    })
}

/// Allowed `|numeric - closed form|` in E/m, unless the grid error
/// estimate is larger.
pub const SOLVE_TOLERANCE: f64 = 1e-4;

pub fn solve(args: &SolveArgs) -> Result<Outcome, RunError> {
    let model = args.system.model();
    let channel = args.system.channel()?;
    let couplings = args.system.couplings()?;
    let state = PrincipalState::new(args.n, &channel)?;
    let spectrum = spectra::energy_general(model, &channel, &state, &couplings);
    if spectrum.report.regime == Regime::Broken {
        return Err(RunError::Invalid(spectrum.report.detail));
    }
    let level = match args.branch {
        Some(b) => spectrum.level(b.into()).filter(|l| l.valid),
        None => spectrum.valid_levels().next(),
    }
    .ok_or_else(|| {
        RunError::Invalid(format!(
            "no valid closed-form level to compare with ({}: {})",
            spectrum.report.regime, spectrum.report.detail
        ))
    })?;
    let closed = level.ratio;
    let m = couplings.m;
    let params = qnum::effective_params(model, &channel, &state, &couplings)?;
    let default = ContourGrid::default_for(&params, couplings.coulomb_coefficient(closed * m), args.points)?;
    let grid = ContourGrid::new(
        args.points,
        args.rho_max.unwrap_or(default.rho_max),
        args.angle.unwrap_or(default.angle),
    )?;
    let guess = args.initial_guess.unwrap_or(closed * 1.05) * m;
    let result = contour::self_consistent_energy(model, &channel, &state, &couplings, &grid, guess, args.damping)?;
    let diff = (result.energy_ratio - closed).abs();
    let allowed = SOLVE_TOLERANCE.max(result.grid_error_estimate);
    let mut table = Table::new(vec![
        "closed_form",
        "numeric",
        "abs_diff",
        "outer_iterations",
        "grid_error_estimate",
        "lambda_re",
        "lambda_im",
        "lambda_error_estimate",
        "points",
        "rho_max",
        "angle",
    ]);
    table.push(vec![
        Cell::from(closed),
        Cell::from(result.energy_ratio),
        Cell::from(diff),
        Cell::from(result.outer_iterations),
        Cell::from(result.grid_error_estimate),
        Cell::from(result.lambda.re),
        Cell::from(result.lambda.im),
        Cell::from(result.lambda_error_estimate),
        Cell::from(grid.n_points),
        Cell::from(grid.rho_max),
        Cell::from(grid.angle),
    ]);
    let passed = diff <= allowed;
    table.diagnostics.push(format!(
        "{}: |diff| = {} against allowed {}",
        if passed { "agree" } else { "disagree" },
        format_float(diff),
        format_float(allowed)
    ));
    Ok(Outcome { table, passed })
}

fn open(path: Option<&PathBuf>) -> Result<Box<dyn Write>, RunError> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn emit(outcome: &Outcome, output: &OutputArgs, config: &impl Serialize) -> Result<bool, RunError> {
    let mut out = open(output.output.as_ref())?;
    outcome
        .table
        .write(output.format, config, &mut out, std::io::stderr().lock())?;
    out.flush()?;
    Ok(outcome.passed)
}

/// Runs a parsed command line, writing its output. `Ok(false)` means the
/// command ran but a check failed.
pub fn run(cli: &Cli) -> Result<bool, RunError> {
    match &cli.command {
        Command::Levels(args) => emit(&levels(args)?, &args.output, args),
        Command::Figure(args) => {
            let series = figure_series(args)?;
            let mut out = open(args.output.as_ref())?;
            write_figure(args, &series, &mut out)?;
            out.flush()?;
            Ok(true)
        }
        Command::Verify(args) => emit(&verify(args)?, &args.output, args),
        Command::Solve(args) => emit(&solve(args)?, &args.output, args),
    }
}
